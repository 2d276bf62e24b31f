"""Chern numbers of concrete manifolds and the checks that consume them.

``ChernNumbers`` stores the pairings ``<c_lambda, [M]>`` for every weight-n
monomial, keyed by exponent tuple ``(e1, ..., en)``.  Generators cover
projective spaces, products and complete intersections; ``chi_from_chern``
applies Riemann-Roch to recover the chi_y polynomial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod

from .charclass import kclass, lambda_chern_character, pair, todd_class
from .core import ExactArithmeticError, UniPoly, series_invert
from .invariants import (
    ChiPoly,
    HodgeDiamond,
    InvalidDataError,
    hodge_to_chi,
    psi,
    theorem2_rhs,
)
from .report import Report
from .symmetric import (
    ChernPoly,
    check_dimension,
    monomial_key,
    newton_power_sum,
    parse_monomial_key,
    partitions_of_weight,
)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class ChernNumbers:
    n: int
    pairings: dict = field(default_factory=dict)
    c1_zero: bool = False

    def __post_init__(self):
        check_dimension(self.n)
        clean = {}
        for k, v in self.pairings.items():
            exps = parse_monomial_key(k, self.n) if isinstance(k, str) else tuple(k)
            if len(exps) != self.n:
                raise InvalidDataError(f"monomial {k!r} has {len(exps)} exponents, expected {self.n}")
            w = sum((i + 1) * e for i, e in enumerate(exps))
            if w != self.n:
                raise InvalidDataError(f"monomial {monomial_key(exps)} has weight {w}, expected {self.n}")
            if Fraction(v).denominator != 1:
                raise InvalidDataError(f"pairing {monomial_key(exps)} = {v} is not an integer")
            clean[exps] = int(v)
        object.__setattr__(self, "pairings", clean)
        if self.c1_zero:
            bad = [monomial_key(e) for e, v in clean.items() if e[0] and v]
            if bad:
                raise InvalidDataError(f"c1_zero is set but {bad[0]} is non-zero")

    def value(self, exps) -> int:
        """Pairing of one monomial, given as exponent tuple or canonical key.

        A missing monomial is an error unless it contains ``c1`` and the data
        is flagged ``c1_zero``.
        """
        if isinstance(exps, str):
            exps = parse_monomial_key(exps, self.n)
        exps = tuple(exps)
        if exps in self.pairings:
            return self.pairings[exps]
        if self.c1_zero and exps and exps[0]:
            return 0
        raise KeyError(f"no pairing for {monomial_key(exps)}")

    @property
    def euler(self) -> int:
        return self.value(tuple(0 for _ in range(self.n - 1)) + (1,))

    def is_complete(self) -> bool:
        try:
            for e in partitions_of_weight(self.n, self.n):
                self.value(e)
        except KeyError:
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "c1_zero": self.c1_zero,
            "pairings": {monomial_key(e): v for e, v in sorted(self.pairings.items(), reverse=True)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> ChernNumbers:
        unknown = set(data) - {"n", "c1_zero", "pairings"}
        if unknown:
            raise InvalidDataError(f"unknown fields {sorted(unknown)}")
        if "n" not in data or "pairings" not in data:
            raise InvalidDataError("Chern data needs 'n' and 'pairings'")
        return cls(int(data["n"]), dict(data["pairings"]), bool(data.get("c1_zero", False)))

    @classmethod
    def from_json(cls, text: str) -> ChernNumbers:
        return cls.from_dict(json.loads(text))


def _from_total_class(n: int, coeffs, degree: int, c1_zero: bool | None = None) -> ChernNumbers:
    """Pairings when ``c_k = coeffs[k] h^k`` and ``<h^n> = degree``."""
    pairings = {}
    for e in partitions_of_weight(n, n):
        pairings[e] = degree * prod(Fraction(coeffs[k + 1]) ** x for k, x in enumerate(e))
    if c1_zero is None:
        c1_zero = coeffs[1] == 0 if n >= 1 else False
    return ChernNumbers(n, pairings, c1_zero)


def cp_chern(n: int) -> ChernNumbers:
    check_dimension(n)
    return _from_total_class(n, [comb(n + 1, k) for k in range(n + 1)], 1)


def complete_intersection_chern(ambient: int, degrees) -> ChernNumbers:
    """Smooth complete intersection of the given degrees in ``CP^ambient``."""
    degrees = [int(d) for d in degrees]
    n = ambient - len(degrees)
    if n < 1:
        raise ValueError(f"complete intersection has dimension {n} < 1")
    if any(d < 1 for d in degrees):
        raise ValueError(f"degrees must be positive, got {degrees}")
    check_dimension(n)
    total = UniPoly([1, 1]) ** (ambient + 1)
    for d in degrees:
        total = (total * series_invert(UniPoly([1, d]), n)).truncate(n)
    return _from_total_class(n, [total[k] for k in range(n + 1)], prod(degrees))


def product_chern(A: ChernNumbers, B: ChernNumbers) -> ChernNumbers:
    """Chern numbers of ``A x B`` from ``c(A x B) = c(A) c(B)``."""
    n = A.n + B.n
    check_dimension(n)

    def bump(exps, i):
        return exps if i == 0 else exps[: i - 1] + (exps[i - 1] + 1,) + exps[i:]

    pairings = {}
    for lam in partitions_of_weight(n, n):
        # expand prod c_k over lambda into bigraded pieces, pruning overweight terms
        terms = {((0,) * A.n, (0,) * B.n, 0, 0): 1}
        for k, mult in enumerate(lam, start=1):
            for _ in range(mult):
                nxt = {}
                for (ea, eb, wa, wb), c in terms.items():
                    for i in range(max(0, k - (B.n - wb)), min(k, A.n - wa) + 1):
                        key = (bump(ea, i), bump(eb, k - i), wa + i, wb + k - i)
                        nxt[key] = nxt.get(key, 0) + c
                terms = nxt
        pairings[lam] = sum(
            c * A.value(ea) * B.value(eb) for (ea, eb, wa, wb), c in terms.items() if wa == A.n and wb == B.n
        )
    return ChernNumbers(n, pairings, A.c1_zero and B.c1_zero)


@lru_cache(maxsize=None)
def _rr_class(n: int, p: int) -> ChernPoly:
    """``(-1)^n ch(Lambda^{n-p} T*) td``, weight-n part."""
    return (lambda_chern_character(n, n - p) * todd_class(n)).homogeneous(n) * (-1) ** n


def chi_from_chern(data: ChernNumbers) -> ChiPoly:
    """Riemann-Roch: ``chi^p = (-1)^n <ch(Lambda^{n-p} T*) td(T), [M]>``."""
    out = []
    for p in range(data.n + 1):
        v = pair(_rr_class(data.n, p), data)
        if v.denominator != 1:
            raise ExactArithmeticError(f"chi^{p} = {v} is not an integer; Chern data is inconsistent")
        out.append(int(v))
    return ChiPoly(data.n, tuple(out))


def chi_from_kclasses(data: ChernNumbers) -> UniPoly:
    """``chi(-1 - s)`` as ``sum_k <K(n,k)> s^k``."""
    return UniPoly([pair(kclass(data.n, k), data) for k in range(data.n + 1)])


def c1_cn1(data: ChernNumbers) -> int:
    """``<c1 c_{n-1}>``; for ``n = 1`` this reads ``c_0 = 1``."""
    n = data.n
    e = [0] * n
    e[0] += 1
    if n > 1:
        e[n - 2] += 1
    return data.value(tuple(e))


def gamma(data: ChernNumbers) -> Fraction:
    e = data.euler
    if e == 0:
        raise ExactArithmeticError("gamma undefined: Euler characteristic is zero")
    return Fraction(c1_cn1(data), e)


def _pair_poly(p: ChernPoly, data: ChernNumbers) -> Fraction:
    return pair(p.homogeneous(data.n), data)


def newton_partial_sum(data: ChernNumbers, k: int) -> Fraction:
    """``n c_n - s_1 c_{n-1} + ... +- s_{k-1} c_{n-k+1}`` paired."""
    n = data.n
    total = Fraction(0)
    for j in range(k):
        s = ChernPoly.constant(n, n) if j == 0 else newton_power_sum(n, j)
        total += (-1) ** j * _pair_poly(s * ChernPoly.gen(n - j, n), data)
    return total


def divisibility_suite(data: ChernNumbers) -> Report:
    n, e = data.n, data.euler
    rep = Report(f"divisibility and congruences, n={n}")
    c = lambda k: ChernPoly.gen(k, n)  # noqa: E731
    if data.c1_zero:
        rep.add("n e = 0 mod 3", (n * e) % 3 == 0, f"n e = {n * e}", topic="manifolds")
        if n % 4 == 2:
            rep.add("e even (n = 2 mod 4)", e % 2 == 0, f"e={e}", topic="manifolds")
        if n >= 3:
            combo = _pair_poly(c(n) * (2 * n) + c(2) * c(n - 2) - c(3) * c(n - 3), data)
            rep.add(
                "2n c_n + c2 c_(n-2) - c3 c_(n-3) = 0 mod 5",
                combo % 5 == 0,
                f"value {combo}",
                topic="manifolds",
            )
    for k in range(2, n + 1):
        if _is_prime(k + 1):
            s = newton_partial_sum(data, k)
            rep.add(f"Newton partial sum S_{k} = 0 mod {k + 1}", s % (k + 1) == 0, f"S_{k} = {s}", topic="manifolds")
    return rep


def theorem_checks(data: ChernNumbers, H: HodgeDiamond | None = None) -> Report:
    n = data.n
    rep = Report(f"Chern-number identities via chi_y, n={n}")
    chi = chi_from_chern(data)
    rep.add("chi(-1) = e", chi.derivative_at_minus_one(0) == data.euler, f"chi={chi.coeffs}", topic="theorems")
    rep.add("chi Serre symmetry", chi.serre_holds(), topic="theorems")
    lhs, rhs = c1_cn1(data), theorem2_rhs(chi)
    rep.add("<c1 c_(n-1)> = 6 chi''(-1) + n(5-3n)/2 chi(-1)", lhs == rhs, f"{lhs} vs {rhs}", topic="theorems")
    if data.c1_zero and n >= 4:
        c = lambda k: ChernPoly.gen(k, n)  # noqa: E731
        lhs4 = _pair_poly(c(2) * c(n - 2) - c(3) * c(n - 3), data)
        rhs4 = 10 * chi.derivative_at_minus_one(4) - Fraction(
            n * (15 * n**3 - 150 * n**2 + 485 * n - 502), 24
        ) * chi.derivative_at_minus_one(0)
        rep.add(
            "<c2 c_(n-2) - c3 c_(n-3)> = 10 chi''''(-1) - n(15n^3-150n^2+485n-502)/24 chi(-1)",
            lhs4 == rhs4,
            f"{lhs4} vs {rhs4}",
            topic="theorems",
        )
    if H is not None:
        other = hodge_to_chi(H)
        rep.add("chi agrees with Hodge diamond", other == chi, f"{chi.coeffs} vs {other.coeffs}", topic="theorems")
    rep.data.update(chi=list(chi.coeffs))
    return rep


def psi_of(data: ChernNumbers) -> Fraction:
    return psi(chi_from_chern(data))
