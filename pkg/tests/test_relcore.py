import pytest
from hypothesis import given, settings, strategies as st

import oracles
from relrep.relcore import (BaseMismatch, ClosureCapExceeded, Rel, RelSyntaxError,
                            compose_angelic, compose_demonic, converse, dom, format_rel,
                            generate_concrete, parse_rel, refines_demonic, rng)
from relrep.signature import Signature


def R(size, *pairs):
    return Rel.from_pairs(size, pairs)


def relations(max_size=3):
    return st.integers(1, max_size).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, 2 ** (n * n) - 1)))


def from_code(n, code):
    pairs = [(x, y) for x in range(n) for y in range(n) if code >> (x * n + y) & 1]
    return Rel.from_pairs(n, pairs)


def as_set(r):
    return frozenset(r.pairs())


# -- examples -------------------------------------------------------------------------

def test_angelic_examples():
    assert compose_angelic(R(2, (0, 1)), R(2, (1, 0))) == R(2, (0, 0))
    assert compose_angelic(R(2, (0, 1), (1, 1)), Rel.empty(2)) == Rel.empty(2)
    assert compose_angelic(R(2, (0, 0), (0, 1)), R(2, (0, 0))) == R(2, (0, 0))


def test_demonic_examples():
    # 1 is an r-successor of 0 outside the domain of s
    assert compose_demonic(R(2, (0, 0), (0, 1)), R(2, (0, 0))) == Rel.empty(2)
    assert compose_demonic(R(2, (0, 1)), R(2, (1, 1))) == R(2, (0, 1))
    assert compose_demonic(Rel.empty(2), Rel.full(2)) == Rel.empty(2)


def test_domain_range_converse_examples():
    assert dom(Rel.empty(2)) == Rel.empty(2)
    assert dom(R(2, (0, 1), (0, 0))) == R(2, (0, 0))
    assert rng(R(2, (0, 1), (1, 1))) == R(2, (1, 1))
    assert converse(R(2, (0, 1))) == R(2, (1, 0))
    assert converse(Rel.identity(3)) == Rel.identity(3)


def test_refinement_examples():
    assert refines_demonic(R(2, (0, 0)), R(2, (0, 0), (0, 1)))
    assert not refines_demonic(R(2, (0, 0), (0, 1)), R(2, (0, 0)))


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        compose_angelic(Rel.empty(1), Rel.empty(2))
    with pytest.raises(BaseMismatch):
        compose_demonic(Rel.empty(2), Rel.empty(3))
    with pytest.raises(BaseMismatch):
        refines_demonic(Rel.empty(2), Rel.empty(1))


def test_pair_out_of_range_rejected():
    with pytest.raises(ValueError):
        R(2, (0, 2))


def test_generate_concrete_examples():
    zero = Signature("angelic", frozenset({"D", "R"}), constants=frozenset({"zero"}))
    assert generate_concrete(1, [Rel.empty(1)], zero) == {Rel.empty(1)}
    dra = Signature("angelic", frozenset({"D", "R"}))
    got = generate_concrete(2, [R(2, (0, 1))], dra)
    assert got == {R(2, (0, 1)), R(2, (0, 0)), R(2, (1, 1)), Rel.empty(2)}
    assert generate_concrete(2, [Rel.identity(2)], dra) == {Rel.identity(2)}


def test_generate_concrete_cap():
    sig = Signature("angelic", frozenset({"D", "R", "conv"}))
    gens = [R(3, (0, 1)), R(3, (1, 2)), R(3, (2, 0), (0, 0))]
    with pytest.raises(ClosureCapExceeded):
        generate_concrete(3, gens, sig, cap=5)


def test_literal_syntax():
    assert parse_rel("{ (0, 1) ,(1,0) }") == R(2, (0, 1), (1, 0))
    assert parse_rel("{}", size=2) == Rel.empty(2)
    assert format_rel(R(3, (2, 0), (0, 2), (0, 1))) == "{(0,1),(0,2),(2,0)}"
    for bad in ("(0,1)", "{(0,1),}", "{(0,1)(1,0)}", "{(a,1)}"):
        with pytest.raises(RelSyntaxError):
            parse_rel(bad)


# -- exhaustive oracle checks at base <= 2, properties at base <= 3 --------------------

@pytest.mark.parametrize("n", [1, 2])
def test_operations_match_oracle_exhaustively(n):
    rels = list(Rel.all_relations(n))
    assert len(rels) == 2 ** (n * n)
    for r in rels:
        sr = as_set(r)
        assert as_set(dom(r)) == oracles.dom(n, sr)
        assert as_set(rng(r)) == oracles.rng(n, sr)
        assert as_set(converse(r)) == oracles.converse(sr)
        for s in rels:
            ss = as_set(s)
            assert as_set(compose_angelic(r, s)) == oracles.compose_angelic(n, sr, ss)
            assert as_set(compose_demonic(r, s)) == oracles.compose_demonic(n, sr, ss)
            assert refines_demonic(r, s) == oracles.refines_demonic(n, sr, ss)


@given(relations(), relations())
def test_demonic_within_angelic(a, b):
    n = min(a[0], b[0])
    r, s = from_code(n, a[1] % 2 ** (n * n)), from_code(n, b[1] % 2 ** (n * n))
    assert compose_demonic(r, s).issubset(compose_angelic(r, s))


@given(relations())
def test_domain_and_range_are_units(a):
    r = from_code(*a)
    assert compose_angelic(dom(r), r) == r
    assert compose_angelic(r, rng(r)) == r
    assert converse(converse(r)) == r
    assert dom(r).is_subidentity() and rng(r).is_subidentity()


@given(relations(), st.integers(0, 2 ** 9 - 1))
def test_soundness_axiom_concretely(a, code):
    n = a[0]
    s, t = from_code(*a), from_code(n, code % 2 ** (n * n))
    lhs = compose_demonic(dom(compose_demonic(s, dom(t))), s)
    assert lhs == compose_demonic(s, dom(t))


@settings(max_examples=300)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_refinement_monotone_for_demonic(a, b, c):
    r, s, t = from_code(2, a), from_code(2, b), from_code(2, c)
    if refines_demonic(r, s):
        assert refines_demonic(compose_demonic(t, r), compose_demonic(t, s))
        assert refines_demonic(compose_demonic(r, t), compose_demonic(s, t))


@given(relations())
def test_literal_round_trip(a):
    r = from_code(*a)
    assert parse_rel(format_rel(r), size=r.size) == r
