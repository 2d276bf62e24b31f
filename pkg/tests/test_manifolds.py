from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chernbetti.cli import calabi_yau_intersections
from chernbetti.core import ExactArithmeticError, UniPoly
from chernbetti.invariants import HodgeDiamond, InvalidDataError
from chernbetti.manifolds import (
    ChernNumbers,
    chi_from_chern,
    chi_from_kclasses,
    complete_intersection_chern,
    cp_chern,
    divisibility_suite,
    gamma,
    newton_partial_sum,
    product_chern,
    psi_of,
    theorem_checks,
)
from chernbetti.symmetric import MonomialKeyError

QUINTIC = complete_intersection_chern(4, [5])
K3 = complete_intersection_chern(3, [4])
SEXTIC = complete_intersection_chern(5, [6])


def test_cp_examples():
    assert cp_chern(1).value("c1") == 2
    cp2 = cp_chern(2)
    assert cp2.value("c2") == 3 and cp2.value("c1^2") == 9
    for n in range(1, 8):
        assert cp_chern(n).euler == n + 1


def test_product_examples():
    p = product_chern(cp_chern(1), cp_chern(1))
    assert p.value("c1^2") == 8 and p.value("c2") == 4
    assert product_chern(cp_chern(2), K3).euler == 3 * 24


def test_complete_intersections():
    assert K3.c1_zero and K3.value("c2") == 24 and K3.value("c1^2") == 0
    assert QUINTIC.c1_zero
    assert QUINTIC.value("c1*c2") == 0 and QUINTIC.euler == -200
    # (1+h)^5/(1+5h) = 1 + 0h + 10h^2 - 40h^3, times degree 5
    assert QUINTIC.value("c3") == 5 * -40
    q22 = complete_intersection_chern(5, [2, 2])
    assert not q22.c1_zero and q22.value("c1^3") == 4 * 8
    with pytest.raises(ValueError):
        complete_intersection_chern(2, [2, 2])


def test_chi_from_chern_examples():
    for n in range(1, 7):
        assert chi_from_chern(cp_chern(n)).coeffs == tuple((-1) ** p for p in range(n + 1))
    assert chi_from_chern(QUINTIC).coeffs == (0, 100, -100, 0)
    assert chi_from_chern(K3).coeffs == (2, -20, 2)


def _generators():
    gens = [cp_chern(n) for n in range(1, 7)]
    gens += [complete_intersection_chern(N, d) for N, d in calabi_yau_intersections(5)]
    gens += [complete_intersection_chern(N, d) for N, d in ((3, [2]), (3, [3]), (4, [2, 2]), (5, [3]), (6, [2, 3]))]
    gens += [product_chern(cp_chern(1), cp_chern(2)), product_chern(cp_chern(2), K3)]
    return gens


@pytest.mark.parametrize("data", _generators(), ids=lambda d: f"n{d.n}")
def test_riemann_roch_routes_agree(data):
    chi = chi_from_chern(data)
    # sum_k <K(n,k)> s^k = chi(-1 - s)
    assert chi_from_kclasses(data) == chi.poly(UniPoly([-1, -1]))
    assert chi.serre_holds()
    assert theorem_checks(data).passed


def test_todd_genus_one_for_fano():
    for data in (cp_chern(3), complete_intersection_chern(3, [3]), complete_intersection_chern(5, [2, 3])):
        assert chi_from_chern(data).todd_genus == 1


def test_integrality_enforced():
    bogus = ChernNumbers(2, {"c1^2": 8, "c2": 3})
    with pytest.raises(ExactArithmeticError):
        chi_from_chern(bogus)


def test_gamma():
    assert gamma(cp_chern(2)) == 3
    assert gamma(product_chern(cp_chern(2), cp_chern(2))) == 6
    assert gamma(cp_chern(1)) == 1
    assert gamma(K3) == 0
    with pytest.raises(ExactArithmeticError):
        gamma(ChernNumbers(2, {"c1^2": 0, "c2": 0}))


@given(st.integers(1, 4), st.integers(1, 4))
def test_gamma_psi_additivity(a, b):
    if a + b > 6:
        return
    A, B = cp_chern(a), cp_chern(b)
    AB = product_chern(A, B)
    assert gamma(AB) == gamma(A) + gamma(B)
    assert psi_of(AB) == psi_of(A) + psi_of(B)


def test_gamma_additivity_mixed():
    A, B = cp_chern(2), complete_intersection_chern(3, [3])
    assert gamma(product_chern(A, B)) == gamma(A) + gamma(B)


def test_divisibility_examples():
    rep = divisibility_suite(QUINTIC)
    assert rep.passed
    assert (3 * QUINTIC.euler) % 3 == 0
    rep = divisibility_suite(K3)
    assert any(c.name.startswith("e even") and c.ok for c in rep.checks)
    v = 8 * SEXTIC.euler + SEXTIC.value("c2^2") - SEXTIC.value("c1*c3")
    assert v % 5 == 0
    assert divisibility_suite(SEXTIC).passed


@pytest.mark.parametrize("N,degrees", calabi_yau_intersections(6))
def test_divisibility_calabi_yau(N, degrees):
    data = complete_intersection_chern(N, degrees)
    assert data.c1_zero
    assert divisibility_suite(data).passed


def test_newton_congruences_any_manifold():
    assert newton_partial_sum(cp_chern(2), 2) == -3
    for n in range(2, 7):
        assert divisibility_suite(cp_chern(n)).passed


def test_theorem_checks_examples():
    rep = theorem_checks(QUINTIC)
    assert rep.passed
    assert theorem_checks(cp_chern(2)).checks[2].detail == "9 vs 9"
    k3_diamond = HodgeDiamond(2, ((1, 0, 1), (0, 20, 0), (1, 0, 1)))
    assert theorem_checks(K3, k3_diamond).passed
    wrong = HodgeDiamond(2, ((1, 0, 1), (0, 19, 0), (1, 0, 1)))
    assert not theorem_checks(K3, wrong).passed
    assert len(theorem_checks(SEXTIC).checks) == 4


def test_json_roundtrip():
    for data in (QUINTIC, cp_chern(3), SEXTIC):
        assert ChernNumbers.from_json(data.to_json()) == data
    d = ChernNumbers.from_json('{"n":3,"c1_zero":true,"pairings":{"c3":-200,"c1*c2":0,"c1^3":0}}')
    assert d == QUINTIC


def test_json_errors():
    with pytest.raises(MonomialKeyError) as info:
        ChernNumbers(6, {"c5c1": 1})
    assert "c5c1" in str(info.value)
    with pytest.raises(InvalidDataError):
        ChernNumbers(3, {"c2": 1})
    with pytest.raises(InvalidDataError):
        ChernNumbers(2, {"c2": F(1, 2)})
    with pytest.raises(InvalidDataError):
        ChernNumbers(2, {"c1^2": 4, "c2": 2}, c1_zero=True)
    with pytest.raises(InvalidDataError):
        ChernNumbers.from_dict({"n": 2, "pairings": {}, "extra": 1})
    with pytest.raises(KeyError):
        ChernNumbers(2, {"c2": 3}).value("c1^2")
    assert not ChernNumbers(2, {"c2": 3}).is_complete()
    assert ChernNumbers(2, {"c2": 3}, c1_zero=True).is_complete()
