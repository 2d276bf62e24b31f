"""Betti- and Hodge-level invariants.

Conventions: ``PoincarePoly.betti[j] = b_j`` for ``0 <= j <= d``;
``HodgeDiamond.h[p][q] = h^{p,q}``; ``ChiPoly.coeffs[p] = chi^p``.

    Phi = 6 P''(-1) + d(5 - 3d)/2 * P(-1)
    phi = 4 P''(-1) / P(-1) - d^2
    psi = 4 chi''(-1) / chi(-1) - n^2
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ExactArithmeticError, UniPoly, series_log
from .report import Report


class InvalidDataError(ValueError):
    pass


def _alt_derivative(coeffs: Sequence[int], k: int) -> int:
    """k-th derivative at -1: sum_j j(j-1)...(j-k+1) c_j (-1)^(j-k)."""
    total = 0
    for j, c in enumerate(coeffs):
        if j < k or not c:
            continue
        f = 1
        for i in range(k):
            f *= j - i
        total += f * c * (-1) ** ((j - k) % 2)
    return total


@dataclass(frozen=True)
class PoincarePoly:
    """Betti numbers ``b_0..b_d`` of a real ``d``-dimensional space.

    ``closed_oriented`` asks for Poincare duality, ``connected`` for
    ``b_0 >= 1``; both are checked by :meth:`validate`, never assumed.
    """

    d: int
    betti: tuple
    connected: bool = False
    closed_oriented: bool = False

    def __post_init__(self):
        object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))
        if len(self.betti) != self.d + 1:
            raise InvalidDataError(f"expected {self.d + 1} Betti numbers for d={self.d}, got {len(self.betti)}")
        for j, b in enumerate(self.betti):
            if b < 0:
                raise InvalidDataError(f"b_{j} = {b} is negative")

    @classmethod
    def from_poly(cls, p: UniPoly, d: int, **flags) -> PoincarePoly:
        cs = [p[j] for j in range(d + 1)]
        if p.degree > d or any(c.denominator != 1 for c in cs):
            raise InvalidDataError(f"{p} is not an integral polynomial of degree <= {d}")
        return cls(d, tuple(int(c) for c in cs), **flags)

    def validate(self) -> PoincarePoly:
        if self.connected and self.betti[0] < 1:
            raise InvalidDataError("connected space needs b_0 >= 1")
        if self.closed_oriented:
            for j in range(self.d + 1):
                if self.betti[j] != self.betti[self.d - j]:
                    raise InvalidDataError(
                        f"Poincare duality fails: b_{j} = {self.betti[j]} but b_{self.d - j} = {self.betti[self.d - j]}"
                    )
        return self

    @property
    def poly(self) -> UniPoly:
        return UniPoly(self.betti)

    def derivative_at_minus_one(self, k: int = 0) -> int:
        return _alt_derivative(self.betti, k)

    @property
    def euler(self) -> int:
        return _alt_derivative(self.betti, 0)

    def __call__(self, t):
        return self.poly(t)


@dataclass(frozen=True)
class HodgeDiamond:
    n: int
    h: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.h)
        if len(rows) != self.n + 1 or any(len(r) != self.n + 1 for r in rows):
            raise InvalidDataError(f"Hodge numbers must form a {self.n + 1}x{self.n + 1} grid")
        for p, row in enumerate(rows):
            for q, x in enumerate(row):
                if x < 0:
                    raise InvalidDataError(f"h^{{{p},{q}}} = {x} is negative")
        object.__setattr__(self, "h", rows)

    def __getitem__(self, pq: tuple[int, int]) -> int:
        p, q = pq
        return self.h[p][q]

    def conjugation_violation(self) -> tuple[int, int] | None:
        for p in range(self.n + 1):
            for q in range(self.n + 1):
                if self.h[p][q] != self.h[q][p]:
                    return (p, q)
        return None

    def serre_violation(self) -> tuple[int, int] | None:
        n = self.n
        for p in range(n + 1):
            for q in range(n + 1):
                if self.h[p][q] != self.h[n - p][n - q]:
                    return (p, q)
        return None

    def mirror_violation(self) -> tuple[int, int] | None:
        n = self.n
        for p in range(n + 1):
            for q in range(n + 1):
                if self.h[p][q] != self.h[n - p][q]:
                    return (p, q)
        return None

    def require_kahler_symmetries(self) -> None:
        cell = self.conjugation_violation()
        if cell:
            p, q = cell
            raise InvalidDataError(f"conjugation symmetry fails at h^{{{p},{q}}} != h^{{{q},{p}}}")
        cell = self.serre_violation()
        if cell:
            p, q = cell
            raise InvalidDataError(f"Serre duality fails at h^{{{p},{q}}} != h^{{{self.n - p},{self.n - q}}}")


@dataclass(frozen=True)
class ChiPoly:
    n: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.n + 1:
            raise InvalidDataError(f"expected {self.n + 1} chi^p values, got {len(self.coeffs)}")

    @property
    def poly(self) -> UniPoly:
        return UniPoly(self.coeffs)

    def derivative_at_minus_one(self, k: int = 0) -> int:
        return _alt_derivative(self.coeffs, k)

    def serre_holds(self) -> bool:
        n = self.n
        return all(self.coeffs[n - p] == (-1) ** n * self.coeffs[p] for p in range(n + 1))

    @property
    def todd_genus(self) -> int:
        return self.coeffs[0]


@dataclass(frozen=True)
class QKBetti:
    """Primitive Betti numbers ``beta_2, beta_4, ..., beta_2m``."""

    m: int
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if len(self.beta) != self.m:
            raise InvalidDataError(f"expected {self.m} primitive Betti numbers, got {len(self.beta)}")
        for k, b in enumerate(self.beta, start=1):
            if b < 0:
                raise InvalidDataError(f"beta_{2 * k} = {b} is negative")

    @classmethod
    def from_betti(cls, P: PoincarePoly) -> QKBetti:
        """``beta_2k = b_2k - b_{2k-4}`` on a ``4m``-manifold."""
        if P.d % 4:
            raise InvalidDataError("quaternion-Kahler data needs d divisible by 4")
        m = P.d // 4
        b = P.betti
        return cls(m, tuple(b[2 * k] - (b[2 * k - 4] if 2 * k >= 4 else 0) for k in range(1, m + 1)))


# ---------------------------------------------------------------------------
# Betti-level invariants


def phi_cap(P: PoincarePoly) -> Fraction:
    """``6 P''(-1) + d(5-3d)/2 P(-1)``.  Defined for every d; meaningful as a
    hyper-Kahler obstruction only for d divisible by 4 (see
    :func:`phi_cap_applicable`)."""
    d = P.d
    return 6 * P.derivative_at_minus_one(2) + Fraction(d * (5 - 3 * d), 2) * P.euler


def phi_cap_applicable(P: PoincarePoly) -> bool:
    return P.d % 4 == 0


def fo_form(P: PoincarePoly) -> tuple[int, int]:
    """``(m e, 6 sum_{j<2m} (-1)^j (2m-j)^2 b_j)`` for ``d = 4m``."""
    if P.d % 4:
        raise InvalidDataError(f"real dimension {P.d} is not divisible by 4")
    PoincarePoly(P.d, P.betti, closed_oriented=True).validate()
    m = P.d // 4
    rhs = 6 * sum((-1) ** j * (2 * m - j) ** 2 * P.betti[j] for j in range(2 * m))
    return m * P.euler, rhs


def phi_small(P: PoincarePoly) -> Fraction:
    e = P.euler
    if e == 0:
        raise ExactArithmeticError("phi undefined: Euler characteristic is zero")
    return Fraction(4 * P.derivative_at_minus_one(2), e) - P.d**2


def psi(chi: ChiPoly) -> Fraction:
    e = chi.derivative_at_minus_one(0)
    if e == 0:
        raise ExactArithmeticError("psi undefined: chi(-1) is zero")
    return Fraction(4 * chi.derivative_at_minus_one(2), e) - chi.n**2


def log_expansion(P: PoincarePoly, order: int) -> UniPoly:
    """Expansion of ``log P(-1+t)``.

    The constant slot holds ``e = P(-1)`` itself (``log e`` is not
    rational); slots ``1..order`` hold the coefficients of
    ``log(P(-1+t)/e)``: ``-d/2``, ``phi/8``, ``(3 phi + 2d)/24``, ...
    """
    e = P.euler
    if e == 0:
        raise ExactArithmeticError("log expansion undefined: Euler characteristic is zero")
    shifted = P.poly.shift(-1) * Fraction(1, e)
    lg = series_log(shifted.truncate(order), order)
    return UniPoly([e] + [lg[k] for k in range(1, order + 1)])


# ---------------------------------------------------------------------------
# Hodge-level


def hodge_to_poincare(H: HodgeDiamond) -> PoincarePoly:
    n = H.n
    b = [0] * (2 * n + 1)
    for p in range(n + 1):
        for q in range(n + 1):
            b[p + q] += H.h[p][q]
    return PoincarePoly(2 * n, tuple(b))


def hodge_to_chi(H: HodgeDiamond) -> ChiPoly:
    return ChiPoly(H.n, tuple(sum((-1) ** q * x for q, x in enumerate(row)) for row in H.h))


def mirror(H: HodgeDiamond) -> HodgeDiamond:
    """``h^{p,q} -> h^{n-p,q}``."""
    n = H.n
    return HodgeDiamond(n, tuple(H.h[n - p] for p in range(n + 1)))


def theorem2_rhs(chi: ChiPoly) -> Fraction:
    """``6 chi''(-1) + n(5-3n)/2 chi(-1)``, which equals ``<c1 c_{n-1}>``."""
    n = chi.n
    return 6 * chi.derivative_at_minus_one(2) + Fraction(n * (5 - 3 * n), 2) * chi.derivative_at_minus_one(0)


def mirror_correction(H: HodgeDiamond, signed: bool = False) -> int:
    """``6 sum (-1)^{p+q} p q (h^{p,q} - h^{n-p,q})``.

    With ``signed=True`` the second term carries ``(-1)^n``, which is what
    the decomposition needs when ``n`` is odd; for even ``n`` the two agree.
    """
    n = H.n
    s = (-1) ** n if signed else 1
    return 6 * sum(
        (-1) ** (p + q) * p * q * (H.h[p][q] - s * H.h[n - p][q]) for p in range(n + 1) for q in range(n + 1)
    )


def phi_lemma_check(H: HodgeDiamond) -> Report:
    """Check ``Phi(P) = 2 [6 chi''(-1) + n(5-3n)/2 chi(-1)] + correction`` on a
    diamond with conjugation symmetry and Serre duality.

    The unsigned correction term only balances for even ``n``; for odd ``n``
    the report also carries the signed variant, which always balances.
    """
    H.require_kahler_symmetries()
    P = hodge_to_poincare(H)
    chi = hodge_to_chi(H)
    lhs = phi_cap(P)
    chi_term = 2 * theorem2_rhs(chi)
    rhs = chi_term + mirror_correction(H)
    rep = Report(f"Phi via chi-polynomial, n={H.n}")
    rep.add("Phi decomposition", lhs == rhs, f"Phi={lhs}, rhs={rhs}", topic="hodge")
    if H.n % 2:
        signed = chi_term + mirror_correction(H, signed=True)
        rep.add("Phi decomposition, signed correction", lhs == signed, f"Phi={lhs}, rhs={signed}", topic="hodge")
    rep.data.update(phi=lhs, chi_term=chi_term, correction=mirror_correction(H))
    return rep


def mirror_sum_identity(H: HodgeDiamond) -> tuple[Fraction, Fraction]:
    """``(Phi(H) + Phi(mirror H), 4 [6 chi''(-1) + n(5-3n)/2 chi(-1)])``;
    equal for even n."""
    lhs = phi_cap(hodge_to_poincare(H)) + phi_cap(hodge_to_poincare(mirror(H)))
    return lhs, 4 * theorem2_rhs(hodge_to_chi(H))


# ---------------------------------------------------------------------------
# holonomy checkers


def hk_report(P: PoincarePoly) -> Report:
    """Hyper-Kahler necessary conditions on a ``4m``-manifold."""
    rep = Report(f"hyper-Kahler constraints, d={P.d}")
    if P.d % 4:
        rep.add("real dimension divisible by 4", False, f"d={P.d}", topic="holonomy")
        return rep
    m, e = P.d // 4, P.euler
    Phi = phi_cap(P)
    rep.add("Phi = 0", Phi == 0, f"Phi={Phi}", topic="holonomy")
    bad = [j for j in range(1, P.d + 1, 2) if P.betti[j] % 4]
    rep.add("odd Betti numbers divisible by 4", not bad, f"violations at j={bad}" if bad else "", topic="holonomy")
    rep.add("m*e = 0 mod 24", (m * e) % 24 == 0, f"m={m}, e={e}, m*e={m * e}", topic="holonomy")
    if m % 8:
        rep.add("e even (m not divisible by 8)", e % 2 == 0, f"e={e}", topic="holonomy")
    else:
        rep.add("e parity unconstrained (m divisible by 8)", True, f"e={e}", topic="holonomy")
    rep.data.update(m=m, euler=e, Phi=Phi)
    return rep


def hk_euler_report(m: int, e: int) -> Report:
    """The Euler-number part of :func:`hk_report` when only ``e`` is known."""
    rep = Report(f"hyper-Kahler Euler constraints, m={m}")
    rep.add("m*e = 0 mod 24", (m * e) % 24 == 0, f"m*e={m * e}", topic="holonomy")
    if m % 8:
        rep.add("e even (m not divisible by 8)", e % 2 == 0, f"e={e}", topic="holonomy")
    else:
        rep.add("e parity unconstrained (m divisible by 8)", True, f"e={e}", topic="holonomy")
    return rep


def g2_quantity(P: PoincarePoly) -> int:
    """``P'(-1)`` of a 7-manifold; with duality this is ``-b3 + 3b2 - 5b1 + 7``."""
    if P.d != 7:
        raise InvalidDataError(f"G2 quantity needs d=7, got {P.d}")
    if P.betti[0] != 1:
        raise InvalidDataError("G2 quantity needs b_0 = 1")
    PoincarePoly(7, P.betti, closed_oriented=True).validate()
    return P.derivative_at_minus_one(1)


def g2_betti(b1: int, b2: int, b3: int) -> PoincarePoly:
    return PoincarePoly(7, (1, b1, b2, b3, b3, b2, b1, 1), connected=True, closed_oriented=True)


def spin7_report(P: PoincarePoly, b4_minus: int | None = None, chern=None) -> Report:
    rep = Report("Spin(7) constraints")
    if P.d != 8:
        rep.add("real dimension 8", False, f"d={P.d}", topic="holonomy")
        return rep
    Phi = phi_cap(P)
    rep.add("Phi = 0", Phi == 0, f"Phi={Phi}", topic="holonomy")
    if b4_minus is not None:
        want = 3 * P.betti[2] + 7
        rep.add("b4- = 3 b2 + 7", b4_minus == want, f"b4-={b4_minus}, 3b2+7={want}", topic="holonomy")
    if chern is not None:
        if not chern.c1_zero:
            rep.add("Chern data has c1 = 0", False, "Pontryagin check needs c1 = 0", topic="holonomy")
        else:
            c2sq, c4 = chern.value("c2^2"), chern.value("c4")
            p1sq = 4 * c2sq  # p1 = -2 c2
            p2 = 2 * c4 + c2sq  # p2 = 2 c4 + c2^2
            val = 4 * p2 - p1sq
            rep.add("<4 p2 - p1^2> = 8 e", val == 8 * P.euler, f"{val} vs 8e={8 * P.euler}", topic="holonomy")
    rep.data.update(Phi=Phi)
    return rep


def qk_constraint(beta: QKBetti) -> int:
    """``sum_k k(m+1-k)(m+1-2k) beta_2k``; zero on known examples."""
    m = beta.m
    return sum(k * (m + 1 - k) * (m + 1 - 2 * k) * b for k, b in enumerate(beta.beta, start=1))


# ---------------------------------------------------------------------------
# random data for property tests


def random_diamond(n: int, rng, high: int = 30) -> HodgeDiamond:
    """A random diamond with conjugation symmetry and Serre duality."""
    h = [[None] * (n + 1) for _ in range(n + 1)]
    for p in range(n + 1):
        for q in range(n + 1):
            if h[p][q] is None:
                v = rng.randint(0, high)
                for a, b in ((p, q), (q, p), (n - p, n - q), (n - q, n - p)):
                    h[a][b] = v
    return HodgeDiamond(n, tuple(tuple(r) for r in h))


def random_poincare(d: int, rng, high: int = 50) -> PoincarePoly:
    half = [rng.randint(0, high) for _ in range(d // 2 + 1)]
    half[0] = 1
    b = half + half[: (d + 1) // 2][::-1]
    return PoincarePoly(d, tuple(b[: d + 1]), connected=True, closed_oriented=True)
