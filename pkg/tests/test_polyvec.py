import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hpk import ArgumentError, PreconditionError
from hpk.algebra import FreeGCA, commutator, derivation
from hpk.graded import GradedSpace, vadd
from hpk.liepair import build_lie_pair_algebra, sl2_pair, sl3_pair
from hpk.linf import spanning_words, table_structure
from hpk.polyvec import (AlgebroidData, MCElement, PolyField, algebroid_from_linf,
                         bracket_leibniz_defect, decomposition_report,
                         homological_field_to_linf, lie_pair_algebroid, lie_poisson_extend,
                         linf_mc_agreement, linf_of_algebroid, linf_to_homological_field,
                         mc_defect, mc_from_structure, odot, perturbed_tables,
                         poisson_axiom_defects, random_field, random_linf_structure,
                         random_linf_tables, schouten_bracket, structure_from_mc)

GENS = GradedSpace([("x", 0), ("t", 1), ("s", -1)])
ALG = FreeGCA(GENS)

SL2 = GradedSpace([("h", 0), ("e", 0), ("f", 0)])
SL2_BR = {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}


def sl2_linf(br=SL2_BR):
    return table_structure(SL2, 0, {2: br}, 3)


field_args = st.tuples(st.integers(0, 2), st.integers(-1, 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-1, 1), field_args, field_args, field_args)
def test_bracket_axioms(seed, n, fa, fb, fc):
    rng = random.Random(seed)
    a, b, c = (random_field(ALG, n, m, m * (n + 1) + t, rng) for m, t in (fa, fb, fc))
    assert poisson_axiom_defects(a, b, c) == {}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-1, 1), st.integers(1, 2), st.integers(1, 2))
def test_bracket_degree_and_leibniz(seed, n, ma, mb):
    rng = random.Random(seed)
    a = random_field(ALG, n, ma, ma * (n + 1) + rng.choice([0, 1]), rng)
    b = random_field(ALG, n, mb, mb * (n + 1) + rng.choice([-1, 0]), rng)
    br = schouten_bracket(a, b)
    assert br.m == ma + mb - 1
    assert br.total == a.total + b.total + n + 1
    r = ma + mb - 1
    monos = [m for m in ALG.basis(max_len=2) if m]
    for _ in range(5):
        words = [rng.choice(monos) for _ in range(r)]
        assert bracket_leibniz_defect(a, b, words) == {}


def test_weight_one_bracket_is_the_commutator():
    d1 = derivation(ALG, 1, {"x": {(1,): 1}, "s": {(0,): 2}})
    d2 = derivation(ALG, 0, {"x": {(0, 0): 1}, "t": {(0, 1): -1}})
    P = PolyField(ALG, -1, 1, 1, d1)
    L = PolyField(ALG, -1, 1, 0, d2)
    assert schouten_bracket(P, L).table() == commutator(d1, d2).table
    f = PolyField.function(ALG, -1, {(0, 0): 1})
    assert schouten_bracket(P, f).body == {(0, 1): 2}


def test_product_is_graded_commutative():
    rng = random.Random(3)
    for n in (-1, 0, 1):
        a = random_field(ALG, n, 1, n + 1, rng)
        b = random_field(ALG, n, 1, n + 2, rng)
        s = -1 if (a.total * b.total) % 2 else 1
        assert odot(a, b) == odot(b, a).scaled(s)


def test_shift_mismatch_rejected():
    a = PolyField.zero(ALG, 0, 1)
    b = PolyField.zero(ALG, 1, 1)
    with pytest.raises(ArgumentError):
        schouten_bracket(a, b)


def test_zero_is_maurer_cartan():
    assert mc_defect(MCElement(ALG, 1)) == {}


@pytest.mark.parametrize("k", [-1, 0, 1, 2])
def test_lie_poisson_is_maurer_cartan(k):
    d = lie_poisson_extend(algebroid_from_linf(sl2_linf()), k, arity_cap=3)
    mc = mc_from_structure(d)
    assert mc_defect(mc) == {}
    back = structure_from_mc(mc)
    for w in spanning_words(d.algebra, 2, d.linf.shift, word_cap=2):
        assert back.q(2, w) == d.q(2, w)


def test_non_jacobi_bracket_defect_in_weight_three():
    br = dict(SL2_BR)
    br[(1, 2)] = {1: 1}
    d = lie_poisson_extend(algebroid_from_linf(sl2_linf(br)), 1, arity_cap=3)
    assert set(mc_defect(mc_from_structure(d))) == {3}


def test_q_must_square_to_zero():
    B = FreeGCA(GradedSpace([("x", 0), ("t", 1), ("u", 2)]))
    Q = PolyField(B, -1, 1, 1, derivation(B, 1, {"x": {(1,): 1}, "t": {(2,): 1}}))
    with pytest.raises(PreconditionError):
        mc_defect(MCElement(B, 1, Q))


def ce_differential(space, br):
    """-1/2 sum c_ij^k xi^i xi^j on the dual generators."""
    out = {}
    for (i, j), vec in br.items():
        for kk, c in vec.items():
            # ordered pair (i, j) and (j, i) both contribute -c/2 xi^i xi^j
            vadd(out.setdefault(kk, {}), {(i, j): -Fraction(c)})
    return out


def test_lie_algebra_over_a_point_gives_ce():
    hf = linf_to_homological_field(algebroid_from_linf(sl2_linf()))
    want = ce_differential(SL2, SL2_BR)
    assert {g[0]: v for g, v in hf.Q.table.items()} == want
    assert hf.square() == {}


@pytest.mark.parametrize("data", [
    lie_pair_algebroid(sl2_pair()),
    lie_pair_algebroid(sl3_pair().with_phi({"e1": {"h1": 1}, "f2": {"h2": 3}})),
    algebroid_from_linf(random_linf_structure(1)),
], ids=["sl2", "sl3-phi", "random"])
def test_homological_field_roundtrip(data):
    hf = linf_to_homological_field(data)
    assert hf.square() == {}
    assert homological_field_to_linf(hf).tables() == data.tables()


@pytest.mark.parametrize("pair", [sl2_pair(), sl3_pair(), sl3_pair().with_phi({"e3": {"h1": 1}})],
                         ids=["sl2", "sl3", "sl3-phi"])
def test_differential_decomposes(pair):
    assert decomposition_report(pair) == []


def test_extension_of_lie_pair_algebroid_matches_lie_pair_algebra():
    pair = sl2_pair().with_phi({"f": {"h": 2}})
    ext = lie_poisson_extend(lie_pair_algebroid(pair), 1, arity_cap=3)
    ce = build_lie_pair_algebra(pair, arity_cap=3)
    assert ext.algebra.gens.names == ce.algebra.gens.names
    for n in (1, 2, 3):
        for w in ce.generator_words(n):
            assert ext.q(n, w) == ce.q(n, w)


def test_algebroid_json_roundtrip():
    data = lie_pair_algebroid(sl2_pair())
    again = AlgebroidData.from_json(data.to_json())
    assert again.tables() == data.tables()


def test_linf_algebroid_roundtrip():
    s = random_linf_structure(2)
    back = linf_of_algebroid(algebroid_from_linf(s), arity_cap=4)
    for n in range(1, 5):
        for w in spanning_words(s.space, n, 1, word_cap=n):
            assert back.q(n, w) == s.q(n, w)


def test_random_structures_agree_on_both_checks():
    for seed in (0, 1):
        space, tabs = random_linf_tables(seed)
        s = table_structure(space, 0, tabs, 4)
        assert linf_mc_agreement(s)[:2] == (True, True)
        bad = table_structure(space, 0, perturbed_tables(tabs, space, seed + 1), 4)
        jac, mc, _ = linf_mc_agreement(bad)
        assert jac == mc


def test_wrong_bracket_sign_breaks_axioms(monkeypatch):
    from hpk import polyvec

    def flipped(P, L, words):
        k = P.n + 1
        s = -1 if ((P.total + k) * (L.total + k)) % 2 else 1
        v = polyvec.circle(P, L, words)
        vadd(v, polyvec.circle(L, P, words), Fraction(s))
        return v
    monkeypatch.setattr(polyvec, "_bracket_words", flipped)
    hits = 0
    for seed in range(40):
        rng = random.Random(seed)
        n = rng.choice([-1, 0, 1])
        a, b, c = (random_field(ALG, n, m, m * (n + 1) + rng.randint(-1, 1), rng)
                   for m in (1, 1, 2))
        hits += bool(poisson_axiom_defects(a, b, c))
    assert hits
