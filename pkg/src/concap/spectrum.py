"""Brute-force weight spectrum of a constrained system.

Enumeration runs weight-ordered over the determinized automaton of the
system, so every accepted string is counted exactly once regardless of how
many derivations the regex gives it.  The resulting spectrum (distinct
weights with distinct-string counts) feeds finite-horizon capacity
estimators and a partial-sum cross-check against the compiled generating
function, which doubles as the regex ambiguity detector.
"""

from __future__ import annotations

import heapq
import io
import math
from dataclasses import dataclass

from .automata import system_dfa
from .dsl import SystemDef
from .genfun import DIVERGENT, GenExpr, eval_real

DEFAULT_WEIGHT_EPSILON = 1e-9


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class WeightSpectrum:
    """Ordered distinct weights with distinct-string counts.

    Only the provably complete part of an enumeration is stored: if the
    string budget was hit, entries stop at the last weight for which every
    string was counted, and ``complete`` is False.  ``exhausted`` means the
    whole language was enumerated (finite language below the cutoff).
    """

    entries: tuple[tuple[float, int], ...]  # (nu, count), nu strictly increasing
    weight_epsilon: float
    max_weight: float
    complete: bool
    exhausted: bool
    includes_empty: bool  # the empty string (weight 0) is in the language

    @property
    def weights(self) -> list[float]:
        return [nu for nu, _ in self.entries]

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.entries]

    @property
    def cumulative(self) -> list[int]:
        out, total = [], 0
        for _, c in self.entries:
            total += c
            out.append(total)
        return out

    @property
    def horizon(self) -> float:
        if not self.entries:
            return 0.0
        return self.entries[-1][0]

    def partial_sum(self, s: float) -> float:
        """Truncated Dirichlet series sum N(nu) exp(-nu*s) over the spectrum."""
        total = 1.0 if self.includes_empty else 0.0
        return total + sum(c * math.exp(-nu * s) for nu, c in self.entries)


def enumerate_spectrum(
    system: SystemDef,
    max_weight: float,
    max_strings: int = 10_000_000,
    weight_epsilon: float = DEFAULT_WEIGHT_EPSILON,
) -> WeightSpectrum:
    """Count every distinct accepted string of weight <= ``max_weight``.

    Weight-ordered frontier search over the DFA: a bucket per distinct
    reached weight holds per-state path counts; buckets are expanded in
    weight order and weights closer than ``weight_epsilon`` are merged into
    one bin.  Counting on the DFA needs no explicit dedup.

    If more than ``max_strings`` strings are found the result is truncated
    to the last fully expanded weight and flagged incomplete.
    """
    if max_weight <= 0:
        raise SpectrumError("max_weight must be positive")
    dfa = system_dfa(system)
    weights = system.weights
    includes_empty = dfa.start in dfa.accepting

    buckets: dict[float, dict[int, int]] = {0.0: {dfa.start: 1}}
    heap = [0.0]
    entries: list[tuple[float, int]] = []
    total = 0
    complete = True
    exhausted = True
    while heap:
        w = heapq.heappop(heap)
        if w not in buckets:
            continue  # already merged into an earlier bin
        states = buckets.pop(w)
        # merge bins within the binning tolerance
        while heap and heap[0] - w <= weight_epsilon:
            w2 = heapq.heappop(heap)
            for state, n in buckets.pop(w2, {}).items():
                states[state] = states.get(state, 0) + n
        accepted = sum(n for state, n in states.items() if state in dfa.accepting)
        if w > 0 and accepted:
            if total + accepted > max_strings:
                complete = False
                exhausted = False
                break
            total += accepted
            entries.append((w, accepted))
        # expand
        for state, n in states.items():
            for label, nxt in dfa.transitions[state].items():
                w2 = w + weights[label]
                if w2 > max_weight + weight_epsilon:
                    exhausted = False
                    continue
                if w2 in buckets:
                    bucket = buckets[w2]
                else:
                    bucket = buckets[w2] = {}
                    heapq.heappush(heap, w2)
                bucket[nxt] = bucket.get(nxt, 0) + n
    return WeightSpectrum(
        entries=tuple(entries),
        weight_epsilon=weight_epsilon,
        max_weight=max_weight,
        complete=complete,
        exhausted=exhausted,
        includes_empty=includes_empty,
    )


def iter_strings(system: SystemDef, max_weight: float, max_strings: int = 1_000_000):
    """Yield the distinct accepted strings of weight <= ``max_weight`` in
    weight order, as (string, weight) pairs.  For small-scale checks; the
    spectrum itself never materializes strings."""
    dfa = system_dfa(system)
    weights = system.weights
    counter = 0
    tie = 0
    heap: list[tuple[float, int, str, int]] = [(0.0, tie, "", dfa.start)]
    while heap:
        w, _, s, state = heapq.heappop(heap)
        if state in dfa.accepting and s != "":
            yield s, w
            counter += 1
            if counter >= max_strings:
                return
        for label, nxt in dfa.transitions[state].items():
            w2 = w + weights[label]
            if w2 <= max_weight + 1e-12:
                tie += 1
                heapq.heappush(heap, (w2, tie, s + label, nxt))


def spectrum_from_counts(
    pairs: list[tuple[float, int]],
    weight_epsilon: float = DEFAULT_WEIGHT_EPSILON,
    includes_empty: bool = False,
) -> WeightSpectrum:
    """Build a spectrum from externally computed (weight, count) pairs,
    e.g. a predicate-filter oracle or a synthetic test case."""
    pairs = sorted(pairs)
    for (a, _), (b, _) in zip(pairs, pairs[1:]):
        if b - a <= weight_epsilon:
            raise SpectrumError(f"weights {a} and {b} closer than epsilon")
    if any(nu <= 0 or c < 1 for nu, c in pairs):
        raise SpectrumError("weights must be positive and counts >= 1")
    return WeightSpectrum(
        entries=tuple(pairs),
        weight_epsilon=weight_epsilon,
        max_weight=pairs[-1][0] if pairs else 0.0,
        complete=True,
        exhausted=False,
        includes_empty=includes_empty,
    )


# ---------------------------------------------------------------------------
# Estimators


def capacity_sequence(sp: WeightSpectrum) -> list[float]:
    """ln(cumulative count) / nu at every horizon."""
    return [math.log(c) / nu for (nu, _), c in zip(sp.entries, sp.cumulative)]


def c0_sequence(sp: WeightSpectrum) -> list[float]:
    """ln(count) / nu at every horizon (Shannon-style, no cumulative sum)."""
    return [math.log(c) / nu for nu, c in sp.entries]


def _require(sp: WeightSpectrum) -> None:
    if len(sp.entries) < 2:
        raise SpectrumError("need at least 2 spectrum entries")


def capacity_estimate(sp: WeightSpectrum) -> float:
    """Finite-horizon capacity estimate: ln(total strings so far)/horizon.

    Converges to the capacity from above; the finite-horizon excess is
    ln(cumulative/last count)/horizon, which decays only like 1/horizon."""
    _require(sp)
    return capacity_sequence(sp)[-1]


def c0_estimate(sp: WeightSpectrum) -> float:
    """Finite-horizon estimate of the per-weight log count at the horizon."""
    _require(sp)
    return c0_sequence(sp)[-1]


def tail_running_max(seq: list[float]) -> float:
    """Max over the last half of an estimate sequence; a second, coarser
    stand-in for the limit superior."""
    if not seq:
        raise SpectrumError("empty sequence")
    return max(seq[len(seq) // 2 :])


def growth_rate_estimate(sp: WeightSpectrum) -> float:
    """Tail growth rate ln(cum_k/cum_{k-1})/(nu_k - nu_{k-1}).

    Converges to the capacity much faster than the plain estimate whenever
    counts grow geometrically (finite automata do)."""
    _require(sp)
    cum = sp.cumulative
    nus = sp.weights
    return math.log(cum[-1] / cum[-2]) / (nus[-1] - nus[-2])


@dataclass(frozen=True)
class DensityReport:
    satisfied: bool
    L: float
    K: float
    worst_n: int  # first violating integer, or the last n checked

    def __bool__(self) -> bool:
        return self.satisfied


def density_check(sp: WeightSpectrum, L: float, K: float) -> DensityReport:
    """Check the polynomial weight-density bound max_{nu_k < n} k <= L*n^K
    for every integer n up to the horizon.

    A finite-horizon check of an asymptotic property: a pass is evidence,
    not proof, and the constants are the caller's choice.
    """
    if L < 0 or K < 0:
        raise SpectrumError("L and K must be nonnegative")
    nus = sp.weights
    n_max = int(math.ceil(sp.horizon)) + 1
    k = 0
    i = 0
    for n in range(1, n_max + 1):
        while i < len(nus) and nus[i] < n:
            i += 1
        k = i  # 1-based index of the largest nu below n
        if k > L * n**K:
            return DensityReport(False, L, K, n)
    return DensityReport(True, L, K, n_max)


# ---------------------------------------------------------------------------
# Cross-check against the compiled generating function


@dataclass(frozen=True)
class CrossCheck:
    difference: float  # gf_value - partial_sum
    partial_sum: float
    gf_value: float
    tail_bound: float
    ambiguous: bool


def gf_tail_bound(g: GenExpr, s: float, horizon: float, s_probe_lo: float) -> float:
    """Upper bound on the series tail beyond ``horizon`` at ``s``: for any
    convergent probe point s' < s, the tail is at most gf(s') * exp(-horizon
    * (s - s')).  The probe grid searches (s_probe_lo, s) for the tightest
    bound."""
    best = math.inf
    for t in range(1, 40):
        sp_ = s_probe_lo + (s - s_probe_lo) * t / 40.0
        v = eval_real(g, sp_)
        if v == DIVERGENT:
            continue
        best = min(best, v * math.exp(-horizon * (s - sp_)))
    return best


def cross_check_gf(
    sp: WeightSpectrum,
    g: GenExpr,
    s: float,
    abscissa_estimate: float = 0.0,
    rel_tol: float = 1e-6,
) -> CrossCheck:
    """Compare the enumerated partial sum with the compiled function value.

    The enumeration counts distinct strings; regex-to-series compilation
    counts derivations.  For an unambiguous regex the function value exceeds
    the complete partial sum by at most the series tail, so a gap larger
    than the tail bound certifies that the regex is ambiguous (some string
    is derived more than once).
    """
    if not sp.complete:
        raise SpectrumError("cross-check needs a complete spectrum")
    gf_value = eval_real(g, s)
    if gf_value == DIVERGENT:
        raise SpectrumError(f"generating function diverges at s={s}")
    partial = sp.partial_sum(s)
    tail = 0.0 if sp.exhausted else gf_tail_bound(g, s, sp.horizon, abscissa_estimate)
    diff = gf_value - partial
    ambiguous = diff > tail + rel_tol * gf_value
    return CrossCheck(diff, partial, gf_value, tail, ambiguous)


# ---------------------------------------------------------------------------
# Export format: header lines then `nu count cumulative` rows


def format_spectrum(sp: WeightSpectrum) -> str:
    out = io.StringIO()
    out.write(f"# weight_epsilon {sp.weight_epsilon:g}\n")
    out.write(f"# max_weight {sp.max_weight:g}\n")
    out.write(f"# complete {int(sp.complete)}\n")
    out.write(f"# exhausted {int(sp.exhausted)}\n")
    out.write(f"# includes_empty {int(sp.includes_empty)}\n")
    for (nu, count), cum in zip(sp.entries, sp.cumulative):
        out.write(f"{nu:.12g} {count} {cum}\n")
    return out.getvalue()


def parse_spectrum(text: str) -> WeightSpectrum:
    meta = {}
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            meta[key] = value
            continue
        nu, count, _ = line.split()
        entries.append((float(nu), int(count)))
    return WeightSpectrum(
        entries=tuple(entries),
        weight_epsilon=float(meta.get("weight_epsilon", DEFAULT_WEIGHT_EPSILON)),
        max_weight=float(meta.get("max_weight", entries[-1][0] if entries else 0.0)),
        complete=bool(int(meta.get("complete", 1))),
        exhausted=bool(int(meta.get("exhausted", 0))),
        includes_empty=bool(int(meta.get("includes_empty", 0))),
    )
