"""Textual definition language for weighted constrained systems.

A system is declared as a symbol alphabet with positive real weights plus a
regular expression over those symbols::

    # at most two consecutive 0s or 1s
    sym 0=1 1=1;
    expr: (0|00)(1|11)*

Supported regex syntax: juxtaposition for concatenation, ``|`` for union,
postfix ``*`` for Kleene star, ``eps`` for the empty string, parentheses,
and bounded repetition ``a{m,n}`` (expanded to a union of concatenations).
Precedence: star binds tighter than concatenation, concatenation tighter
than union.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class DslError(ValueError):
    """Problem in a system definition; carries a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Symbol:
    label: str


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Concat:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Union:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Star:
    child: "Regex"


Regex = Symbol | Epsilon | Concat | Union | Star

EPSILON = Epsilon()


@dataclass(frozen=True)
class SymbolDecl:
    label: str
    weight: float

    def __post_init__(self):
        if not self.label:
            raise DslError("symbol label must be nonempty")
        if not self.weight > 0:
            raise DslError(f"symbol {self.label!r} has nonpositive weight {self.weight}")


@dataclass(frozen=True)
class SystemDef:
    """A named alphabet-plus-regex constraint definition. Immutable."""

    alphabet: tuple[SymbolDecl, ...]
    expr: Regex
    name: str = ""

    def __post_init__(self):
        if not self.alphabet:
            raise DslError("alphabet must be nonempty")
        labels = [d.label for d in self.alphabet]
        for lab in labels:
            if labels.count(lab) > 1:
                raise DslError(f"duplicate symbol label {lab!r}")
        _check_symbols(self.expr, set(labels))

    @property
    def weights(self) -> dict[str, float]:
        return {d.label: d.weight for d in self.alphabet}

    def string_weight(self, s: str) -> float:
        """Weight of a string, summing per-symbol weights (additivity)."""
        w = self.weights
        total = 0.0
        for lab in split_labels(s, list(w)):
            total += w[lab]
        return total


def _check_symbols(node: Regex, labels: set[str]) -> None:
    match node:
        case Symbol(label):
            if label not in labels:
                raise DslError(f"undeclared symbol {label!r}")
        case Concat(l, r) | Union(l, r):
            _check_symbols(l, labels)
            _check_symbols(r, labels)
        case Star(c):
            _check_symbols(c, labels)
        case Epsilon():
            pass


def split_labels(s: str, labels: list[str]) -> list[str]:
    """Segment a plain string into alphabet labels (greedy longest-match)."""
    if s == "":
        return []
    by_len = sorted(labels, key=len, reverse=True)
    out = []
    i = 0
    while i < len(s):
        for lab in by_len:
            if s.startswith(lab, i):
                out.append(lab)
                i += len(lab)
                break
        else:
            raise DslError(f"character {s[i]!r} at position {i} not in alphabet")
    return out


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(r"[A-Za-z0-9_.]+(?:[-+][0-9]+)?|[(){}|,*;=]|\S")


@dataclass
class _Token:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    toks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for m in _TOKEN_RE.finditer(line):
            toks.append(_Token(m.group(), lineno, m.start() + 1))
    return toks


class _Parser:
    def __init__(self, tokens: list[_Token], text: str):
        self.toks = tokens
        self.pos = 0
        self.text = text

    def peek(self) -> _Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Token("", 1, 1)
            raise DslError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise DslError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    # --- declarations

    def parse_system(self, name: str) -> SystemDef:
        decls: list[SymbolDecl] = []
        seen: set[str] = set()
        while True:
            tok = self.peek()
            if tok is None:
                raise DslError("missing 'expr:' clause", 1, 1)
            if tok.text == "sym":
                self.next()
                decls.extend(self._parse_sym_block(seen))
            elif tok.text == "expr":
                self.next()
                break
            else:
                raise DslError(f"expected 'sym' or 'expr', got {tok.text!r}", tok.line, tok.col)
        colon = self.next()
        # 'expr:' arrives as two tokens only if ':' survives tokenization;
        # the token regex lumps ':' into \S
        if colon.text != ":":
            raise DslError(f"expected ':' after 'expr', got {colon.text!r}", colon.line, colon.col)
        if not decls:
            raise DslError("no symbols declared", colon.line, colon.col)
        labels = {d.label for d in decls}
        expr = self._parse_union(labels)
        trailing = self.peek()
        if trailing is not None and trailing.text != ";":
            raise DslError(f"unexpected token {trailing.text!r}", trailing.line, trailing.col)
        return SystemDef(alphabet=tuple(decls), expr=expr, name=name)

    def _parse_sym_block(self, seen: set[str]) -> list[SymbolDecl]:
        decls = []
        while True:
            tok = self.next()
            if tok.text == ";":
                if not decls:
                    raise DslError("empty 'sym' declaration", tok.line, tok.col)
                return decls
            label = tok.text
            if not re.fullmatch(r"[A-Za-z0-9_]+", label):
                raise DslError(f"bad symbol label {label!r}", tok.line, tok.col)
            if label == "eps":
                raise DslError("'eps' is reserved for the empty string", tok.line, tok.col)
            if label in seen:
                raise DslError(f"duplicate symbol label {label!r}", tok.line, tok.col)
            self.expect("=")
            wtok = self.next()
            try:
                weight = float(wtok.text)
            except ValueError:
                raise DslError(f"bad weight {wtok.text!r}", wtok.line, wtok.col) from None
            if not weight > 0:
                raise DslError(f"weight of {label!r} must be positive", wtok.line, wtok.col)
            seen.add(label)
            decls.append(SymbolDecl(label, weight))

    # --- regex, precedence: union < concat < star/repeat

    def _parse_union(self, labels: set[str]) -> Regex:
        node = self._parse_concat(labels)
        while (tok := self.peek()) is not None and tok.text == "|":
            self.next()
            node = Union(node, self._parse_concat(labels))
        return node

    def _parse_concat(self, labels: set[str]) -> Regex:
        node = self._parse_postfix(labels)
        while (tok := self.peek()) is not None and tok.text not in ("|", ")", ";", ",", "}"):
            node = Concat(node, self._parse_postfix(labels))
        return node

    def _parse_postfix(self, labels: set[str]) -> Regex:
        node = self._parse_atom(labels)
        while (tok := self.peek()) is not None:
            if tok.text == "*":
                self.next()
                node = Star(node)
            elif tok.text == "{":
                self.next()
                node = self._parse_repeat(node)
            else:
                break
        return node

    def _parse_repeat(self, node: Regex) -> Regex:
        lo_tok = self.next()
        self.expect(",")
        hi_tok = self.next()
        self.expect("}")
        try:
            lo, hi = int(lo_tok.text), int(hi_tok.text)
        except ValueError:
            raise DslError("repetition bounds must be integers", lo_tok.line, lo_tok.col) from None
        if lo < 0 or hi < lo:
            raise DslError(f"bad repetition bounds {{{lo},{hi}}}", lo_tok.line, lo_tok.col)
        return repeat(node, lo, hi)

    def _parse_atom(self, labels: set[str]) -> Regex:
        tok = self.next()
        if tok.text == "(":
            node = self._parse_union(labels)
            self.expect(")")
            return node
        if tok.text == "eps":
            return EPSILON
        word = tok.text
        if not re.fullmatch(r"[A-Za-z0-9_]+", word):
            raise DslError(f"unexpected token {word!r}", tok.line, tok.col)
        # a bare word is one label, or a juxtaposition of labels ("01")
        if word in labels:
            return Symbol(word)
        try:
            parts = split_labels(word, sorted(labels, key=len, reverse=True))
        except DslError:
            raise DslError(f"undeclared symbol {word!r}", tok.line, tok.col) from None
        node: Regex = Symbol(parts[0])
        for lab in parts[1:]:
            node = Concat(node, Symbol(lab))
        return node


def parse_system(text: str, name: str = "") -> SystemDef:
    """Parse a system definition document into a validated ``SystemDef``."""
    return _Parser(_tokenize(text), text).parse_system(name)


def load_system(path) -> SystemDef:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read(), name=str(path))


# ---------------------------------------------------------------------------
# Construction helpers


def concat_all(parts: list[Regex]) -> Regex:
    node = parts[0]
    for p in parts[1:]:
        node = Concat(node, p)
    return node


def union_all(parts: list[Regex]) -> Regex:
    node = parts[0]
    for p in parts[1:]:
        node = Union(node, p)
    return node


def repeat(node: Regex, lo: int, hi: int) -> Regex:
    """``node{lo,hi}`` as a union of explicit concatenations."""
    choices = []
    for n in range(lo, hi + 1):
        if n == 0:
            choices.append(EPSILON)
        else:
            choices.append(concat_all([node] * n))
    return union_all(choices)


def build_jk_system(j: int, k: int) -> SystemDef:
    """Run-length-limited binary system: at most ``j`` consecutive 1s and at
    most ``k`` consecutive 0s, both symbols of weight 1.

    The expression has one branch starting with a 1-run and one starting
    with a 0-run; each alternates runs of the other symbol and may end with
    a trailing run or the empty string.
    """
    if j < 1 or k < 1:
        raise ValueError("j and k must be >= 1")
    one, zero = Symbol("1"), Symbol("0")
    ones = repeat(one, 1, j)
    zeros = repeat(zero, 1, k)
    branch1 = concat_all([ones, Star(Concat(zeros, ones)), Union(EPSILON, zeros)])
    branch2 = concat_all([zeros, Star(Concat(ones, zeros)), Union(EPSILON, ones)])
    return SystemDef(
        alphabet=(SymbolDecl("0", 1.0), SymbolDecl("1", 1.0)),
        expr=Union(branch1, branch2),
        name=f"S_({j},{k})",
    )


# ---------------------------------------------------------------------------
# Pretty-printing (round-trips through parse_system)

_PREC = {"union": 0, "concat": 1, "postfix": 2}


def format_regex(node: Regex, _prec: int = 0) -> str:
    match node:
        case Symbol(label):
            s, prec = label, 3
        case Epsilon():
            s, prec = "eps", 3
        case Union(l, r):
            s, prec = f"{format_regex(l, 0)} | {format_regex(r, 1)}", 0
        case Concat(l, r):
            s, prec = f"{format_regex(l, 1)} {format_regex(r, 2)}", 1
        case Star(c):
            s, prec = f"{format_regex(c, 2)}*", 2
        case _:
            raise TypeError(f"not a regex node: {node!r}")
    if prec < _prec:
        s = f"({s})"
    return s


def format_system(system: SystemDef) -> str:
    decls = " ".join(f"{d.label}={d.weight:g}" for d in system.alphabet)
    return f"sym {decls};\nexpr: {format_regex(system.expr)}\n"
