from collections import Counter
from itertools import combinations
from math import comb

import pytest

from hpk import StructuralError
from hpk import liepair
from hpk.linf import (check_jacobi, check_leibniz, check_morphism, cohomology_with_bracket,
                      exp_coderivation, spanning_words)
from hpk.liepair import (DIRAC, LieAlgebra, LiePair, abelian_pair, build_lie_pair_algebra,
                         build_matched_pair, gerstenhaber_on_cohomology, matched_pair_report,
                         sl2_matched, sl2_pair, sl3_pair, sl_algebra, splitting_coderivation,
                         splitting_isomorphism)


def test_sl_algebras_are_lie():
    for n in (2, 3):
        g = sl_algebra(n)
        assert g.dim == n * n - 1
        assert g.jacobi_violation() is None
    g = sl_algebra(2)
    assert g.bracket({1: 1}, {2: 1}) == {0: 1}


def test_non_lie_rejected():
    with pytest.raises(StructuralError):
        LieAlgebra(["a", "b", "c"], {(0, 1): {1: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})


def test_subalgebra_closure():
    with pytest.raises(StructuralError) as err:
        LiePair(sl_algebra(2), ["e", "f"])
    assert err.value.witness[:2] == ("e", "f")


def test_curvature_term_is_the_cartan_pairing():
    ce = build_lie_pair_algebra(sl2_pair(), arity_cap=3)
    xi, e, f = (0,), (1,), (2,)
    assert ce.q(3, (xi, e, f)) == {(): 1}
    assert ce.q(3, (e, f, xi)) == ce.q(3, (xi, e, f))
    # phi moves part of [e, f] off h
    tilted = build_lie_pair_algebra(sl2_pair().with_phi({"e": {"h": 1}}), arity_cap=3)
    assert tilted.q(3, (xi, e, f)) != {}


@pytest.mark.parametrize("pair", [sl2_pair(), sl3_pair(),
                                  sl3_pair().with_phi({"e1": {"h1": 1}, "f3": {"h2": -2}})],
                         ids=["sl2", "sl3", "sl3-phi"])
def test_lie_pair_axioms(pair):
    ce = build_lie_pair_algebra(pair, arity_cap=4)
    assert check_jacobi(ce, word_cap=3) == []
    assert check_leibniz(ce, word_cap=3) == []


def test_dirac_convention():
    ce = build_lie_pair_algebra(sl2_pair(), convention=DIRAC, arity_cap=4)
    assert ce.k == -1
    assert check_jacobi(ce, word_cap=3) == []


def test_abelian_pair_has_no_brackets():
    ce = build_lie_pair_algebra(abelian_pair(3, 1), arity_cap=4)
    A = ce.algebra
    for n in range(1, 5):
        for w in spanning_words(A, n, ce.linf.shift, word_cap=3):
            assert ce.q(n, w) == {}


def test_matched_pair():
    a, b, nabla, Delta = sl2_matched()
    assert matched_pair_report(a, b, nabla, Delta) == []
    ce = build_matched_pair(a, b, nabla, Delta, arity_cap=3)
    for w in ce.generator_words(3):
        assert ce.q(3, w) == {}
    assert check_jacobi(ce, word_cap=3) == []


def test_broken_action_rejected():
    a, b, nabla, Delta = sl2_matched()
    # h acting on f with weight -1 instead of -2
    bad = {(0, 0): {0: -1}}
    rep = matched_pair_report(a, b, bad, Delta)
    assert rep and rep[0]["check"] == "Delta-bracket"
    with pytest.raises(StructuralError):
        build_matched_pair(a, b, bad, Delta)


def test_zero_splitting_change_is_identity():
    ce = build_lie_pair_algebra(sl2_pair())
    f = exp_coderivation(splitting_coderivation(ce, {}, arity_cap=3))
    for n in range(1, 4):
        for w in spanning_words(ce.algebra, n, 0, word_cap=3):
            assert f.f(n, w) == ({w[0]: 1} if n == 1 else {})


@pytest.mark.parametrize("pair,dphi", [(sl2_pair(), {"e": {"h": 1}, "f": {"h": 3}}),
                                       (sl3_pair(), {"e3": {"h1": 1}})])
def test_splitting_isomorphism(pair, dphi):
    f, src, dst = splitting_isomorphism(pair, dphi, arity_cap=3, word_cap=3)
    assert f.first_is_identity([m for m in src.algebra.basis() if m])


def test_wrong_splitting_sign_is_detected(monkeypatch):
    monkeypatch.setattr(liepair, "SPLIT_SIGN", -1)
    pair = sl2_pair()
    ce = build_lie_pair_algebra(pair)
    dst = build_lie_pair_algebra(pair.shifted_by({"e": {"h": 1}}))
    f = exp_coderivation(splitting_coderivation(ce, {"e": {"h": 1}}, arity_cap=3))
    assert check_morphism(f, ce, dst, arity_cap=3, word_cap=3) != []


def cartan_cohomology_dims(pair):
    """Abelian h acting diagonally on the complement: H is Lambda(h^*) times
    the weight zero part of Lambda(B), B in degree -1."""
    g = pair.g
    weight = {}
    for b in pair.B:
        w = []
        for a in pair.h:
            v = g.br(a, b)
            assert set(v) <= {b}
            w.append(v.get(b, 0))
        weight[b] = tuple(w)
    zero = tuple(0 for _ in pair.h)
    sizes = Counter()
    for s in range(len(pair.B) + 1):
        for sub in combinations(pair.B, s):
            tot = tuple(sum(weight[b][i] for b in sub) for i in range(len(pair.h)))
            if tot == zero:
                sizes[s] += 1
    dims = Counter()
    r = len(pair.h)
    for s, c in sizes.items():
        for j in range(r + 1):
            dims[j - s] += c * comb(r, j)
    return dict(dims)


@pytest.mark.parametrize("pair", [sl2_pair(), sl3_pair()], ids=["sl2", "sl3"])
def test_cohomology_against_weight_count(pair):
    ce = build_lie_pair_algebra(pair, arity_cap=3)
    H = cohomology_with_bracket(ce)
    assert {d: n for d, n in H.dims.items() if n} == cartan_cohomology_dims(pair)


def test_gerstenhaber_axioms_on_cohomology():
    H = gerstenhaber_on_cohomology(build_lie_pair_algebra(sl2_pair(), arity_cap=3))
    assert sum(H.dims.values()) == 4
