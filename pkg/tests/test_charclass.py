from fractions import Fraction as F
from math import comb

import pytest

from chernbetti.charclass import (
    chern_character,
    closed_form_kclass,
    kclass,
    kclass_product,
    kclass_table,
    lambda_chern_character,
    odd_order_combination,
    pair,
    t_squared_full,
    theorem2_identity,
    theorem3_identity,
    todd_class,
    todd_series,
    todd_weight3_report,
    verify_ideal_membership,
    verify_kclass_lemmas,
)
from chernbetti.core import MultiPoly, UniPoly
from chernbetti.manifolds import ChernNumbers, complete_intersection_chern, cp_chern
from chernbetti.symmetric import ChernPoly, substitute


def c(k, n):
    return ChernPoly.gen(k, n)


def test_todd_series_against_bernoulli():
    # x/(1-e^{-x}) = 1 + x/2 + sum B_2k x^2k/(2k)!, B_2=1/6, B_4=-1/30, B_6=1/42
    assert todd_series(6) == UniPoly([1, F(1, 2), F(1, 12), 0, F(-1, 720), 0, F(1, 30240)])
    assert todd_series(2) == UniPoly([1, F(1, 2), F(1, 12)])
    assert todd_series(0) == UniPoly([1])


def test_chern_character_examples():
    assert chern_character(1) == 1 + c(1, 1)
    n = 2
    assert chern_character(n) == 2 + c(1, n) + (c(1, n) ** 2 - c(2, n) * 2) / 2
    from chernbetti.symmetric import newton_power_sum

    assert chern_character(4).homogeneous(4) == newton_power_sum(4, 4) / 24


def test_todd_class_low_weights():
    n = 4
    td = todd_class(n)
    assert td.homogeneous(0) == 1
    assert td.homogeneous(1) == c(1, n) / 2
    assert td.homogeneous(2) == (c(1, n) ** 2 + c(2, n)) / 12
    assert td.homogeneous(3) == c(1, n) * c(2, n) / 24


def test_todd_weight3_report_warns_once():
    rep = todd_weight3_report()
    assert rep.passed
    assert len(rep.warnings) == 1


def test_top_todd_at_c1_zero():
    td = substitute(todd_class(4).homogeneous(4), {1: 0})
    assert td == (c(2, 4) ** 2 * 3 - c(4, 4)) / 720


def test_lambda_chern_character():
    n = 2
    assert lambda_chern_character(n, 0) == 1
    # conjugate bundle: ch(T*) = ch(T) with x -> -x
    assert lambda_chern_character(n, 1) == 2 - c(1, n) + (c(1, n) ** 2 - c(2, n) * 2) / 2
    top = lambda_chern_character(4, 4)
    assert top.homogeneous(0) + top.homogeneous(1) == 1 - c(1, 4)


@pytest.mark.parametrize("n", range(1, 7))
def test_alternating_exterior_sum_gives_top_class(n):
    total = sum(
        ((lambda_chern_character(n, q) * todd_class(n)).homogeneous(n) * (-1) ** q for q in range(n + 1)),
        ChernPoly({}, n),
    )
    assert total == c(n, n)


def test_kclass_product_small():
    p = kclass_product(1)
    x1, t = MultiPoly.root(1, 1), MultiPoly.t(1)
    # x1 + t * td(x1), truncated at degree 1
    assert p == x1 + t + t * x1.scale(F(1, 2))
    assert kclass_product(3).t_degree() <= 3
    assert kclass_product(3).t_coefficient(0) == MultiPoly({(1, 1, 1, 0): 1}, 3)


def test_kclass_examples():
    n = 6
    assert kclass(n, 2) == (c(1, n) * c(5, n) + c(6, n) * 39) / 12
    assert kclass(n, 2).render() == "(1/12)*c1*c5 + (13/4)*c6"
    assert kclass(2, 2) == (c(1, 2) ** 2 + c(2, 2)) / 12
    assert kclass(4, 0) == c(4, 4)


@pytest.mark.parametrize("n", range(1, 9))
def test_low_order_kclasses(n):
    assert kclass(n, 0) == c(n, n)
    assert kclass(n, 1) == c(n, n) * F(n, 2)
    assert kclass(n, n) == todd_class(n).homogeneous(n)


@pytest.mark.parametrize("n", range(1, 8))
def test_kclass_on_projective_space(n):
    # chi^p(CP^n) = (-1)^p, so chi(-1-s) = sum_p (1+s)^p
    data = cp_chern(n)
    for k in range(n + 1):
        assert pair(kclass(n, k), data) == sum(comb(p, k) for p in range(n + 1))


def test_kclass_on_quintic_and_k3():
    q = complete_intersection_chern(4, [5])
    # chi = 100 t - 100 t^2 so chi(-1-s) = -200 - 300 s - 100 s^2
    assert [pair(kclass(3, k), q) for k in range(4)] == [-200, -300, -100, 0]
    k3 = complete_intersection_chern(3, [4])
    assert pair(todd_class(2).homogeneous(2), k3) == 2


@pytest.mark.parametrize("n", range(2, 9))
def test_t_squared_bookkeeping(n):
    assert t_squared_full(n).homogeneous(n) == kclass(n, 2)


@pytest.mark.parametrize("n", range(2, 9))
def test_closed_forms(n):
    rep = verify_kclass_lemmas(n)
    assert rep.passed, rep.render()


def test_k64_leading_bracket():
    n = 6
    K = closed_form_kclass(n, 4)
    assert K.coeff((3, 0, 1, 0, 0, 0)) == F(-1, 720)
    assert K.coeff((1, 1, 1, 0, 0, 0)) == F(3, 720)
    assert K.coeff((0, 0, 2, 0, 0, 0)) == F(-3, 720)


def test_closed_form_unavailable():
    with pytest.raises(ValueError):
        closed_form_kclass(3, 4)


@pytest.mark.parametrize("n", range(1, 9))
def test_ideal_membership(n):
    for k in range(n + 1):
        assert verify_ideal_membership(n, k)


def test_ideal_membership_examples():
    for e in kclass(6, 2).terms:
        assert e[4] or e[5]
    for e in kclass(6, 4).terms:
        assert any(e[2:6])


@pytest.mark.parametrize("n", range(1, 9))
def test_odd_orders_in_even_span(n):
    for k in range(4):
        if 2 * k + 1 > n:
            break
        sol = odd_order_combination(n, k)
        assert sol is not None
        combo = sum((kclass(n, 2 * j) * a for j, a in enumerate(sol)), ChernPoly({}, n))
        assert combo == kclass(n, 2 * k + 1)


@pytest.mark.parametrize("n", range(2, 9))
def test_theorem2(n):
    assert theorem2_identity(n).passed


@pytest.mark.parametrize("n", range(4, 9))
def test_theorem3(n):
    assert theorem3_identity(n).passed


def test_theorem2_at_n2():
    assert kclass(2, 2) * 12 - c(2, 2) == c(1, 2) ** 2


def test_kclass_table():
    tab = kclass_table(3)
    assert tab[0] == c(3, 3)
    assert len(tab.entries) == 4


def test_pair_examples():
    assert pair(c(1, 1), cp_chern(1)) == 2
    k3 = ChernNumbers(2, {"c1^2": 0, "c2": 24}, c1_zero=True)
    assert pair(todd_class(2).homogeneous(2), k3) == 2
    quintic = complete_intersection_chern(4, [5])
    assert pair(kclass(3, 0), quintic) == -200


def test_pair_errors():
    with pytest.raises(KeyError) as info:
        pair(c(1, 2) ** 2, ChernNumbers(2, {"c2": 3}))
    assert "c1^2" in str(info.value)
    with pytest.raises(ValueError):
        pair(c(1, 2), cp_chern(2))
    with pytest.raises(ValueError):
        pair(c(2, 2), cp_chern(3))


def test_kclass_order_range():
    with pytest.raises(ValueError):
        kclass(3, 4)
