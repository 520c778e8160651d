import pytest

from hpk import ArgumentError, PreconditionError, StructuralError
from hpk import fedosov
from hpk.fedosov import (ConnectionData, FedosovAlgebra, build_koszul_contraction,
                         fedosov_contraction, fedosov_transfer_compare, solve_x_nabla, _h)
from hpk.graded import vadd
from hpk.liepair import abelian_pair, sl2_pair
from hpk.transfer import validate_contraction

E, F_ = 1, 2
TILTED = sl2_pair().with_phi({"e": {"h": 1}})


def test_truncation_weight_must_be_at_least_two():
    with pytest.raises(ArgumentError):
        FedosovAlgebra(sl2_pair(), 1)


def test_torsion_checked():
    with pytest.raises(StructuralError):
        ConnectionData(sl2_pair(), {("e", "f"): {"e": 1}})
    conn = ConnectionData(sl2_pair()).shifted({(E, F_): {E: 1}, (F_, E): {E: 1}})
    assert conn.torsion_violation() is None


def test_koszul_contraction():
    c, F, ce = build_koszul_contraction(sl2_pair(), 3)
    assert validate_contraction(c, semifull=True) == []
    assert F.N == 3 and c.small is ce.algebra


def test_abelian_pair_needs_no_correction():
    assert solve_x_nabla(abelian_pair(2, 1), N=3).X == {}


def test_solution_squares_to_zero_and_is_normalized():
    fq = solve_x_nabla(TILTED, N=3)
    assert fq.X
    assert fq.square_defect() == {}
    hi = fq.hi
    for vec in hi.X.values():
        acc = {}
        for m, c in vec.items():
            vadd(acc, _h(hi.F, hi, m), c)
        assert acc == {}


def test_perturbed_contraction_valid():
    c, base, fq, ce = fedosov_contraction(TILTED, N=3)
    assert validate_contraction(c, semifull=True) == []


@pytest.mark.parametrize("pair", [sl2_pair(), TILTED], ids=["sl2", "sl2-tilted"])
def test_transfer_matches_lie_pair_brackets(pair):
    r = fedosov_transfer_compare(pair, N=3, arity_cap=3)
    assert r["diff"] == []
    assert all(c["pass"] for c in r["checks"])


def test_independent_of_complement_connection():
    conn = ConnectionData(TILTED).shifted({(E, F_): {E: 1}, (F_, E): {E: 1}, (E, E): {F_: 2}})
    r = fedosov_transfer_compare(TILTED, conn=conn, N=3, arity_cap=3)
    assert r["diff"] == []


def test_wrong_bracket_sign_detected(monkeypatch):
    monkeypatch.setattr(fedosov, "SCHOUTEN_SIGN", -1)
    r = fedosov_transfer_compare(TILTED, N=3, arity_cap=3, stability=False)
    assert r["diff"]


def test_wrong_lie_derivative_sign_detected(monkeypatch):
    monkeypatch.setattr(fedosov, "LIE_SIGN", 1)
    with pytest.raises((PreconditionError, StructuralError)):
        fedosov_transfer_compare(TILTED, N=3, arity_cap=3, stability=False)
