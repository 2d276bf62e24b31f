"""Characteristic-class series and the K-classes.

The central object is the product over Chern roots

    prod_i ( x_i + t * x_i / (1 - exp(-x_i)) )

whose ``t**k`` coefficient, restricted to weight ``n``, is the class
``K(n, k)``.  Pairing ``K(n, k)`` with the fundamental class gives
``chi^(k)(-1) / ((-1)^k k!)``, i.e. ``chi(-1 - t) = sum_k <K(n,k)> t^k`` for
the chi_y genus written as ``chi(t) = sum_p chi^p t^p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from .core import MultiPoly, UniPoly, exp_series, product, series_invert, solve_linear
from .report import Report
from .symmetric import (
    ChernPoly,
    check_dimension,
    newton_power_sum,
    reduce_to_elementary,
    substitute,
)


class PairingError(KeyError):
    def __str__(self):
        return str(self.args[0])


# ---------------------------------------------------------------------------
# series


def todd_series(order: int) -> UniPoly:
    """``x / (1 - exp(-x))`` to ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    # (1 - e^{-x}) / x = sum (-1)^k x^k / (k+1)!
    denom = UniPoly(Fraction((-1) ** k, factorial(k + 1)) for k in range(order + 1))
    return series_invert(denom, order)


def chern_character(n: int) -> ChernPoly:
    check_dimension(n)
    ch = ChernPoly.constant(n, n)
    for k in range(1, n + 1):
        ch = ch + newton_power_sum(n, k) / factorial(k)
    return ch


@lru_cache(maxsize=None)
def todd_class(n: int) -> ChernPoly:
    check_dimension(n)
    td = todd_series(n)
    return reduce_to_elementary(product([MultiPoly.univariate(td, i, n) for i in range(1, n + 1)]))


@lru_cache(maxsize=None)
def lambda_chern_character(n: int, p: int) -> ChernPoly:
    """Chern character of the p-th exterior power of the cotangent bundle:
    the sum over p-subsets of ``exp(-(x_i1 + ... + x_ip))``."""
    check_dimension(n)
    if not 0 <= p <= n:
        raise ValueError(f"exterior power {p} outside 0..{n}")
    ex = exp_series(n, -1)
    roots = [MultiPoly.root(i, n) for i in range(1, n + 1)]
    total = MultiPoly({}, n)
    for subset in combinations(range(n), p):
        y = MultiPoly({}, n)
        for i in subset:
            y = y + roots[i]
        term, power = MultiPoly.constant(0, n), MultiPoly.constant(1, n)
        for k, c in enumerate(ex.coeffs):
            term = term + power.scale(c)
            power = power * y
        total = total + term
    return reduce_to_elementary(total)


# ---------------------------------------------------------------------------
# K-classes


@lru_cache(maxsize=None)
def kclass_product(n: int) -> MultiPoly:
    """``prod_i (x_i + t * td(x_i))`` truncated at root degree ``n``."""
    check_dimension(n)
    td = todd_series(n)
    tvar = MultiPoly.t(n)
    factors = [MultiPoly.root(i, n) + tvar * MultiPoly.univariate(td, i, n) for i in range(1, n + 1)]
    return product(factors)


@lru_cache(maxsize=None)
def _reduced_product(n: int) -> ChernPoly:
    return reduce_to_elementary(kclass_product(n))


def kclass(n: int, k: int) -> ChernPoly:
    """``K(n, k)``: weight-n part of the ``t**k`` coefficient, in Chern classes."""
    if not 0 <= k <= n:
        raise ValueError(f"order {k} outside 0..{n}")
    return _reduced_product(n).t_coefficient(k).homogeneous(n)


def t_squared_full(n: int) -> ChernPoly:
    """Full ``t**2`` coefficient of the product (weights ``n-2`` to ``n``)."""
    return _reduced_product(n).t_coefficient(2)


@dataclass(frozen=True)
class KClassTable:
    n: int
    entries: dict

    def __getitem__(self, k: int) -> ChernPoly:
        return self.entries[k]


def kclass_table(n: int) -> KClassTable:
    return KClassTable(n, {k: kclass(n, k) for k in range(n + 1)})


# ---------------------------------------------------------------------------
# closed forms for K(n,2), K(n,4), K(n,6) and the V''(-1) lemma


def _c(n: int):
    return lambda k: ChernPoly.gen(k, n)


def closed_form_kclass(n: int, k: int) -> ChernPoly:
    """Closed-form expressions for ``K(n,2)``, ``K(n,4)``, ``K(n,6)`` with the
    coefficient polynomials in ``n`` evaluated at the given ``n``."""
    c = _c(n)
    F = Fraction
    if k == 2 and n >= 2:
        return (c(1) * c(n - 1) + c(n) * F(n * (3 * n - 5), 2)) / 12
    if k == 4 and n >= 4:
        body = (
            (-(c(1) ** 3) + c(1) * c(2) * 3 - c(3) * 3) * c(n - 3)
            + (c(1) ** 2 + c(2) * 3) * c(n - 2)
            + c(1) * c(n - 1) * F(15 * n**2 - 85 * n + 108, 2)
            + c(n) * F(n * (15 * n**3 - 150 * n**2 + 485 * n - 502), 8)
        )
        return body / 720
    if k == 6 and n >= 6:
        a = 21 * n**2 - 203 * n + 472
        b = 63 * n**2 - 609 * n
        body = (
            (
                c(1) ** 5
                - c(1) ** 3 * c(2) * 5
                + c(1) * c(2) ** 2 * 5
                + c(1) ** 2 * c(3) * 5
                - c(2) * c(3) * 5
                - c(1) * c(4) * 5
                + c(5) * 5
            )
            * c(n - 5)
            + (-(c(1) ** 4) * 2 + c(1) ** 2 * c(2) + c(2) ** 2 * 10 - c(1) * c(3) - c(4) * 20) * c(n - 4) / 2
            + (-(c(1) ** 3) * a + c(1) * c(2) * (b + 1430) - c(3) * (b + 1388)) * c(n - 3) / 4
            + (c(1) ** 2 * a + c(2) * (b + 1408)) * c(n - 2) / 4
            + c(1) * c(n - 1) * F(105 * n**4 - 1890 * n**3 + 12131 * n**2 - 32242 * n + 28800, 16)
            + c(n) * F(n * (63 * n**5 - 1575 * n**4 + 15435 * n**3 - 73801 * n**2 + 171150 * n - 152696), 96)
        )
        return body / 30240
    raise ValueError(f"no closed form for K({n},{k})")


def second_derivative_closed_form(n: int) -> ChernPoly:
    """``2c_{n-2} + (n-1)c_{n-1} + (2 c1 c_{n-1} + n(3n-5) c_n)/12``."""
    c = _c(n)
    return c(n - 2) * 2 + c(n - 1) * (n - 1) + (c(1) * c(n - 1) * 2 + c(n) * (n * (3 * n - 5))) / 12


def _diff(a: ChernPoly, b: ChernPoly) -> str:
    d = a - b
    return "" if not d else f"difference {d.render()}"


def verify_kclass_lemmas(n: int) -> Report:
    """Compare the expansion with every closed form available at ``n``."""
    rep = Report(f"K-class closed forms, n={n}")
    if n < 2:
        return rep
    lhs = t_squared_full(n) * 2
    rep.add(
        f"second t-derivative at -1, n={n}",
        lhs == second_derivative_closed_form(n),
        _diff(lhs, second_derivative_closed_form(n)),
        topic="lemmas",
    )
    for k in (2, 4, 6):
        if n >= k:
            got, want = kclass(n, k), closed_form_kclass(n, k)
            rep.add(f"K({n},{k}) closed form", got == want, _diff(got, want), topic="lemmas")
    return rep


def verify_ideal_membership(n: int, k: int) -> bool:
    """Every monomial of ``K(n,k)`` has a factor ``c_j`` with
    ``j >= n - 2*ceil(k/2) + 1``."""
    if k == 0:
        return kclass(n, 0) == ChernPoly.gen(n, n)
    lowest = n - 2 * ((k + 1) // 2) + 1
    for e in kclass(n, k).terms:
        if not any(e[j - 1] for j in range(max(lowest, 1), n + 1)):
            return False
    return True


def odd_order_combination(n: int, k: int) -> list[Fraction] | None:
    """Coefficients ``a_j`` with ``K(n, 2k+1) = sum_j a_j K(n, 2j)``, or
    ``None`` if no such combination exists."""
    target = kclass(n, 2 * k + 1)
    basis = [kclass(n, 2 * j) for j in range(k + 1)]
    keys = sorted(set(target.terms).union(*(b.terms for b in basis)))
    rows = [[b.coeff(e[:-1]) for b in basis] for e in keys]
    return solve_linear(rows, [target.coeff(e[:-1]) for e in keys])


def theorem2_identity(n: int) -> Report:
    """``12 K(n,2) + n(5-3n)/2 c_n == c1 c_{n-1}``."""
    check_dimension(n)
    rep = Report(f"c1*c(n-1) via chi''(-1), n={n}")
    c = _c(n)
    lhs = kclass(n, 2) * 12 + c(n) * Fraction(n * (5 - 3 * n), 2)
    rhs = c(1) * c(n - 1)
    rep.add(f"c1*c{n - 1} identity, n={n}", lhs == rhs, _diff(lhs, rhs), topic="theorems")
    return rep


def theorem3_identity(n: int) -> Report:
    """At ``c1 = 0``: ``240 K(n,4) - n(15n^3-150n^2+485n-502)/24 c_n ==
    c2 c_{n-2} - c3 c_{n-3}``."""
    check_dimension(n)
    rep = Report(f"c2*c(n-2) - c3*c(n-3) via chi''''(-1), n={n}")
    c = _c(n)
    lhs = kclass(n, 4) * 240 - c(n) * Fraction(n * (15 * n**3 - 150 * n**2 + 485 * n - 502), 24)
    rhs = c(2) * c(n - 2) - c(3) * c(n - 3)
    lhs, rhs = substitute(lhs, {1: 0}), substitute(rhs, {1: 0})
    rep.add(f"c2/c3 identity at c1=0, n={n}", lhs == rhs, _diff(lhs, rhs), topic="theorems")
    return rep


def todd_weight3_report() -> Report:
    """The weight-3 Todd term from the generating product is ``c1 c2 / 24``;
    an often-quoted misprint has ``c1 c3 / 24``."""
    rep = Report("Todd class, weight 3")
    td3 = todd_class(3).homogeneous(3)
    c = _c(3)
    rep.add("weight-3 Todd term is c1*c2/24", td3 == c(1) * c(2) / 24, td3.render(), topic="lemmas")
    rep.warn(
        "printed Todd term c1*c3/24",
        "the expansion gives (1/24)*c1*c2; a c1*c3 term cannot occur in weight 3",
        topic="lemmas",
    )
    return rep


def pair(p: ChernPoly, data) -> Fraction:
    """Evaluate a weight-n class against Chern numbers ``data``."""
    if p.n != data.n:
        raise ValueError(f"class has dimension {p.n}, data has {data.n}")
    total = Fraction(0)
    for e, c in p.terms.items():
        if e[-1]:
            raise ValueError("cannot pair a class that still involves t")
        w = sum((k + 1) * x for k, x in enumerate(e[:-1]))
        if w != data.n:
            raise ValueError(f"monomial {e[:-1]} has weight {w}, expected {data.n}")
        total += c * data.value(e[:-1])
    return total
