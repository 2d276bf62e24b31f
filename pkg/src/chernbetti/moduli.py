"""Moduli of stable rank-2 bundles with fixed odd-degree determinant on a
genus-g curve: complex dimension ``3g - 3``.

Poincare polynomial, in two equivalent closed forms::

    ((1 + t^3)^{2g} - t^{2g} (1 + t)^{2g}) / ((1 - t^2)(1 - t^4))
    (1 + t)^{2g-2} * sum_{i=0}^{g-1} (1 - t + t^2)^{2i} t^{2g-2-2i}

chi_y polynomial: ``(1 + t)^{2g-2} (1 - t)^{g-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import UniPoly, solve_linear
from .invariants import ChiPoly, PoincarePoly, phi_cap, phi_cap_applicable
from .report import Report


class ModuliError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ModuliParams:
    g: int

    def __post_init__(self):
        if self.g < 2:
            raise ValueError(f"genus must be at least 2, got {self.g}")

    @property
    def n(self) -> int:
        return 3 * self.g - 3

    @property
    def d(self) -> int:
        return 6 * self.g - 6


def _t(k: int) -> UniPoly:
    return UniPoly.monomial(k)


def mg_poincare_quotient(g: int) -> UniPoly:
    ModuliParams(g)
    one = UniPoly([1])
    num = (one + _t(3)) ** (2 * g) - _t(2 * g) * (one + _t(1)) ** (2 * g)
    den = (one - _t(2)) * (one - _t(4))
    q, r = num.divmod(den)
    if r:
        raise ModuliError(f"non-zero remainder {r} in genus {g}")
    return q


def mg_poincare_product(g: int) -> UniPoly:
    ModuliParams(g)
    one = UniPoly([1])
    inner = UniPoly([1, -1, 1])
    s = sum((inner ** (2 * i) * _t(2 * g - 2 - 2 * i) for i in range(g)), UniPoly())
    return (one + _t(1)) ** (2 * g - 2) * s


def mg_poincare(g: int) -> PoincarePoly:
    """Betti numbers; both closed forms are computed and must agree."""
    params = ModuliParams(g)
    q = mg_poincare_quotient(g)
    if q != mg_poincare_product(g):
        raise ModuliError(f"closed forms disagree in genus {g}")
    return PoincarePoly.from_poly(q, params.d, connected=True, closed_oriented=True)


def mg_chi(g: int) -> ChiPoly:
    params = ModuliParams(g)
    p = UniPoly([1, 1]) ** (2 * g - 2) * UniPoly([1, -1]) ** (g - 1)
    return ChiPoly(params.n, tuple(int(p[i]) for i in range(params.n + 1)))


def chi_shifted(chi: ChiPoly) -> UniPoly:
    """``chi(-1 + t)``."""
    return chi.poly.shift(-1)


def genus3_reconstruction(k64_pairing: int = 4, todd_genus: int = 1) -> UniPoly:
    """Rebuild ``chi(t)`` in genus 3 from partial data.

    With ``c5 = c6 = 0`` only ``t^4, t^5, t^6`` survive in ``chi(-1+t)``:
    ``a t^4 + b t^5 + c t^6`` with ``c`` the Todd genus and ``a`` the pairing
    of ``K(6,4)``.  The unknown ``b`` is fixed by Serre symmetry
    ``chi^{6-p} = chi^p``.
    """
    a, c = Fraction(k64_pairing), Fraction(todd_genus)
    # chi(t) = a (1+t)^4 + b (1+t)^5 + c (1+t)^6, linear in b
    base = UniPoly([1, 1]) ** 4 * a + UniPoly([1, 1]) ** 6 * c
    slope = UniPoly([1, 1]) ** 5
    rows, rhs = [], []
    for p in range(4):
        # chi^{6-p} - chi^p = 0
        rows.append([slope[6 - p] - slope[p]])
        rhs.append(-(base[6 - p] - base[p]))
    sol = solve_linear(rows, rhs)
    if sol is None:
        raise ModuliError("Serre symmetry admits no solution")
    (b,) = sol
    return UniPoly([0, 0, 0, 0, a, b, c])


def mg_report(g: int, k64_pairing: int | None = None) -> Report:
    params = ModuliParams(g)
    rep = Report(f"moduli of rank-2 bundles, g={g} (n={params.n}, d={params.d})")
    q, pr = mg_poincare_quotient(g), mg_poincare_product(g)
    rep.add("closed forms agree", q == pr, topic="moduli")
    P = mg_poincare(g)
    rep.add("b2 = 1", P.betti[2] == 1, f"b2={P.betti[2]}", topic="moduli")
    rep.add("b3 = 2g", P.betti[3] == 2 * g, f"b3={P.betti[3]}", topic="moduli")
    rep.add("P(1) = 2^(2g-2) g", sum(P.betti) == 2 ** (2 * g - 2) * g, f"P(1)={sum(P.betti)}", topic="moduli")
    rep.add("P(-1) = 0", P.euler == 0, topic="moduli")
    mult = P.poly.root_multiplicity(-1)
    rep.add("t = -1 has multiplicity 2g-2", mult == 2 * g - 2, f"multiplicity {mult}", topic="moduli")
    rep.warn(
        "vanishing order claim P^(i)(-1) = 0 for i <= 2g-1",
        f"the product form gives multiplicity exactly {mult} = 2g-2, so P^({mult})(-1) != 0",
        topic="moduli",
    )
    Phi = phi_cap(P)
    if phi_cap_applicable(P):
        rep.add("Phi = 0", Phi == 0, f"Phi={Phi}", topic="moduli")
    else:
        rep.add("Phi computed (d not divisible by 4, no constraint)", True, f"Phi={Phi}", topic="moduli")
    chi = mg_chi(g)
    rep.add("chi Serre symmetry", chi.serre_holds(), str(chi.coeffs), topic="moduli")
    rep.add("Todd genus chi^0 = 1", chi.todd_genus == 1, topic="moduli")
    rep.add("signature chi(1) = 0", chi.poly(1) == 0, topic="moduli")
    rep.add("chi(-1) = e", chi.derivative_at_minus_one(0) == P.euler, topic="moduli")
    if g == 3:
        shifted = chi_shifted(chi)
        rep.add(
            "chi(-1+t) = 4t^4 - 4t^5 + t^6",
            shifted == UniPoly([0, 0, 0, 0, 4, -4, 1]),
            shifted.render(),
            topic="moduli",
        )
        rebuilt = genus3_reconstruction(4 if k64_pairing is None else k64_pairing)
        rep.add("reconstruction from a=4, c=1 and Serre", rebuilt == shifted, rebuilt.render(), topic="moduli")
    rep.data.update(betti=list(P.betti), chi=list(chi.coeffs), multiplicity=mult, Phi=Phi)
    return rep
