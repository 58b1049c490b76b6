import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concap import dsl
from concap.automata import matches
from concap.dsl import (
    Concat,
    DslError,
    Epsilon,
    Star,
    Symbol,
    Union,
    build_jk_system,
    format_regex,
    format_system,
    parse_system,
)

from conftest import all_binary_strings, runlength_ok


def test_single_star():
    s = parse_system("sym a=1.0;\nexpr: a*")
    assert s.expr == Star(Symbol("a"))
    assert s.weights == {"a": 1.0}


def test_sbin_parse(sbin):
    assert sbin.expr == Star(Union(Symbol("0"), Symbol("1")))


def test_union_concat_eps():
    s = parse_system("sym a=0.5;\nexpr: (a a)|eps")
    assert s.expr == Union(Concat(Symbol("a"), Symbol("a")), Epsilon())


def test_precedence_star_concat_union():
    s = parse_system("sym a=1 b=2;\nexpr: a b*|b")
    assert s.expr == Union(Concat(Symbol("a"), Star(Symbol("b"))), Symbol("b"))


def test_juxtaposed_single_char_labels():
    s = parse_system("sym 0=1 1=1;\nexpr: 01|10")
    z, o = Symbol("0"), Symbol("1")
    assert s.expr == Union(Concat(z, o), Concat(o, z))


def test_multichar_labels():
    s = parse_system("sym ab=1.5 c=2;\nexpr: (ab c)*")
    assert s.expr == Star(Concat(Symbol("ab"), Symbol("c")))
    assert s.string_weight("abc") == pytest.approx(3.5)


def test_bounded_repetition_sugar():
    s = parse_system("sym a=1;\nexpr: a{1,2}")
    assert s.expr == Union(Symbol("a"), Concat(Symbol("a"), Symbol("a")))
    s0 = parse_system("sym a=1;\nexpr: a{0,1}")
    assert s0.expr == Union(Epsilon(), Symbol("a"))


def test_comments_ignored():
    s = parse_system("# header\nsym a=1; # trailing\nexpr: a*  # end\n")
    assert s.expr == Star(Symbol("a"))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("sym a=1;\nexpr: b*", "undeclared"),
        ("sym a=0;\nexpr: a", "positive"),
        ("sym a=-1;\nexpr: a", "weight"),
        ("sym a=1 a=2;\nexpr: a", "duplicate"),
        ("sym a=1;\nexpr: (a", "end of input"),
        ("sym a=1;", "expr"),
        ("expr: a", "sym"),
        ("sym a=1;\nexpr: a)", "unexpected"),
        ("sym eps=1;\nexpr: eps", "reserved"),
        ("sym a=1;\nexpr: a{2,1}", "bounds"),
    ],
)
def test_structured_errors(text, fragment):
    with pytest.raises(DslError) as err:
        parse_system(text)
    assert fragment in str(err.value)


def test_error_carries_position():
    with pytest.raises(DslError) as err:
        parse_system("sym a=1;\nexpr: b*")
    assert err.value.line == 2


# --- round trip ---------------------------------------------------------

_LABELS = ("0", "1", "a")


def _regexes(depth):
    leaf = st.one_of(
        st.sampled_from([Symbol(lab) for lab in _LABELS]),
        st.just(Epsilon()),
    )
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.tuples(inner, inner).map(lambda t: Concat(*t)),
            st.tuples(inner, inner).map(lambda t: Union(*t)),
            inner.map(Star),
        ),
        max_leaves=depth,
    )


@settings(max_examples=200, deadline=None)
@given(_regexes(20))
def test_pretty_print_round_trip(expr):
    decls = "sym 0=1 1=1 a=2;"
    text = f"{decls}\nexpr: {format_regex(expr)}"
    assert parse_system(text).expr == expr


def test_format_system_round_trip():
    s = build_jk_system(2, 3)
    again = parse_system(format_system(s))
    assert again.expr == s.expr
    assert again.weights == s.weights


# --- (j,k) preset vs run-length predicate --------------------------------


def test_jk_11_counts():
    s = build_jk_system(1, 1)
    for n in range(1, 11):
        accepted = [w for w in all_binary_strings(n) if matches(s, w)]
        assert len(accepted) == 2  # only the two alternating strings


@pytest.mark.parametrize("j,k,word,expected", [
    (2, 2, "011", True),
    (2, 2, "000", False),
    (1, 2, "0010", True),
    (1, 2, "11", False),
    (1, 1, "0101", True),
    (1, 1, "11", False),
])
def test_jk_membership_examples(j, k, word, expected):
    assert matches(build_jk_system(j, k), word) is expected


def test_empty_string_membership(sbin):
    assert matches(sbin, "") is True  # (0|1)* accepts eps
    assert matches(build_jk_system(2, 2), "") is False


@pytest.mark.parametrize("j,k", [(1, 1), (1, 3), (2, 2), (3, 2), (4, 4), (2, 4)])
def test_jk_matches_equals_predicate(j, k):
    s = build_jk_system(j, k)
    for n in range(1, 13):
        for word in all_binary_strings(n):
            assert matches(s, word) == runlength_ok(word, j, k), (j, k, word)


def test_jk_rejects_zero():
    with pytest.raises(ValueError):
        build_jk_system(0, 2)
    with pytest.raises(ValueError):
        build_jk_system(2, 0)


def test_matches_rejects_foreign_character(sbin):
    with pytest.raises(DslError):
        matches(sbin, "012")
