"""Exact arithmetic substrate: rationals, dense univariate polynomials and
sparse truncated multivariate polynomials.

Rationals are :class:`fractions.Fraction` throughout.  Polynomial values are
immutable once built, so they can be cached and shared between workers.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class ExactArithmeticError(ArithmeticError):
    """Raised for operations with no exact answer (division by zero,
    inverting a series with vanishing constant term, ...)."""


class ArityError(ValueError):
    pass


_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}


def rational_arith(a: Scalar, b: Scalar, op: str) -> Fraction:
    """Apply ``op`` (one of ``+ - * /``, also ``−``, ``×``, ``÷``) exactly."""
    op = {"−": "-", "×": "*", "÷": "/"}.get(op, op)
    if op not in _OPS:
        raise ValueError(f"unknown operator {op!r}")
    a, b = Fraction(a), Fraction(b)
    if op == "/" and b == 0:
        raise ExactArithmeticError("division by zero")
    return _OPS[op](a, b)


def format_rational(q: Scalar) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# univariate


class UniPoly:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``; trailing zeros are stripped,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> UniPoly:
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> UniPoly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.render()

    def render(self, var: str = "t") -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mon:
                body = format_rational(abs(c))
            elif abs(c) == 1:
                body = mon
            else:
                body = f"{format_rational(abs(c))}*{mon}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @staticmethod
    def _coerce(other) -> UniPoly:
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other) -> UniPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> UniPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> UniPoly:
        return (-self) + other

    def __mul__(self, other) -> UniPoly:
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> UniPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = UniPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, value):
        """Horner evaluation; works for scalars and for ``UniPoly`` arguments
        (composition)."""
        acc = 0 if not isinstance(value, UniPoly) else UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self, k: int = 1) -> UniPoly:
        p = self
        for _ in range(k):
            p = UniPoly(i * c for i, c in enumerate(p.coeffs) if i > 0)
        return p

    def truncate(self, order: int) -> UniPoly:
        """Drop every term of degree greater than ``order``."""
        return UniPoly(self.coeffs[: order + 1])

    def shift(self, a: Scalar) -> UniPoly:
        """The polynomial ``p(a + x)``."""
        return self(UniPoly([a, 1]))

    def divmod(self, divisor: UniPoly) -> tuple[UniPoly, UniPoly]:
        if not divisor:
            raise ExactArithmeticError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = divisor.coeffs[-1]
        dd = divisor.degree
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for i in range(len(rem) - dd - 1, -1, -1):
            q = rem[i + dd] / lead
            quot[i] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[i + j] -= q * c
        return UniPoly(quot), UniPoly(rem[:dd] if dd > 0 else [])

    def root_multiplicity(self, a: Scalar) -> int:
        """Multiplicity of ``a`` as a root (0 if not a root).  The zero
        polynomial has no finite multiplicity and raises."""
        if not self:
            raise ExactArithmeticError("zero polynomial has every root")
        mult, p, lin = 0, self, UniPoly([-Fraction(a), 1])
        while True:
            q, r = p.divmod(lin)
            if r:
                return mult
            mult, p = mult + 1, q


def series_invert(p: UniPoly, order: int) -> UniPoly:
    """Return ``q`` with ``p*q == 1`` modulo ``x**(order+1)``."""
    if p[0] == 0:
        raise ExactArithmeticError("series with zero constant term is not invertible")
    inv0 = 1 / p[0]
    q = [inv0]
    for k in range(1, order + 1):
        s = sum((p[j] * q[k - j] for j in range(1, min(k, p.degree) + 1)), Fraction(0))
        q.append(-s * inv0)
    return UniPoly(q)


def series_log(p: UniPoly, order: int) -> UniPoly:
    """Formal logarithm of a series with constant term 1, to ``order``."""
    if p[0] != 1:
        raise ExactArithmeticError("formal log needs constant term 1")
    # log p = integral(p'/p)
    dlog = (p.derivative() * series_invert(p, order)).truncate(order - 1)
    return UniPoly([0] + [dlog[k] / (k + 1) for k in range(order)])


def exp_series(order: int, scale: Scalar = 1) -> UniPoly:
    """Truncated ``exp(scale*x)``."""
    coeffs, c = [], Fraction(1)
    for k in range(order + 1):
        coeffs.append(c)
        c = c * scale / (k + 1)
    return UniPoly(coeffs)


# ---------------------------------------------------------------------------
# multivariate

Exponent = tuple  # tuple[int, ...]; last slot is the formal variable t


def _root_degree(e: Exponent) -> int:
    return sum(e) - e[-1]


class MultiPoly:
    """Sparse polynomial in roots ``x1..x_arity`` and one extra variable ``t``.

    Exponent vectors have ``arity + 1`` slots, the last one for ``t``.  Every
    term whose total root degree exceeds ``bound`` is dropped on construction
    and after every operation; ``t`` is exempt from the bound.
    """

    __slots__ = ("arity", "bound", "_terms")

    def __init__(self, terms: Mapping[Exponent, Scalar] | Iterable = (), arity: int = 1, bound: int | None = None):
        if bound is None:
            bound = arity
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        width = arity + 1
        for e, c in items:
            e = tuple(e)
            if len(e) != width:
                raise ArityError(f"exponent {e} does not have {width} slots")
            if c == 0 or _root_degree(e) > bound:
                continue
            clean[e] = clean.get(e, 0) + Fraction(c)
            if clean[e] == 0:
                del clean[e]
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "_terms", clean)

    @classmethod
    def _raw(cls, terms: dict, arity: int, bound: int) -> MultiPoly:
        obj = object.__new__(cls)
        object.__setattr__(obj, "arity", arity)
        object.__setattr__(obj, "bound", bound)
        object.__setattr__(obj, "_terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c: Scalar, arity: int, bound: int | None = None) -> MultiPoly:
        return cls({(0,) * (arity + 1): c}, arity, bound)

    @classmethod
    def root(cls, i: int, arity: int, bound: int | None = None) -> MultiPoly:
        """The root ``x_i`` (1-based)."""
        if not 1 <= i <= arity:
            raise ArityError(f"root index {i} outside 1..{arity}")
        e = [0] * (arity + 1)
        e[i - 1] = 1
        return cls({tuple(e): 1}, arity, bound)

    @classmethod
    def t(cls, arity: int, bound: int | None = None) -> MultiPoly:
        return cls({(0,) * arity + (1,): 1}, arity, bound)

    @classmethod
    def univariate(cls, p: UniPoly, i: int, arity: int, bound: int | None = None) -> MultiPoly:
        """Embed ``p(x_i)``."""
        terms = {}
        for k, c in enumerate(p.coeffs):
            e = [0] * (arity + 1)
            e[i - 1] = k
            terms[tuple(e)] = c
        return cls(terms, arity, bound)

    # access -------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, e: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order: by root degree, then t degree, then
        exponent vector descending."""
        return sorted(
            self._terms.items(),
            key=lambda kv: (_root_degree(kv[0]), kv[0][-1], tuple(-x for x in kv[0][:-1])),
        )

    def t_degree(self) -> int:
        return max((e[-1] for e in self._terms), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.arity, self.bound, self._terms) == (other.arity, other.bound, other._terms)

    def __hash__(self) -> int:
        return hash((self.arity, self.bound, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()}, arity={self.arity}, bound={self.bound})"

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [(f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}") for i, k in enumerate(e[:-1]) if k]
            if e[-1]:
                factors.append("t" if e[-1] == 1 else f"t^{e[-1]}")
            mon = "*".join(factors)
            if not mon:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"({format_rational(c)})*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic ---------------------------------------------------------
    def _check(self, other: MultiPoly) -> None:
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
        if self.bound != other.bound:
            raise ArityError(f"truncation bound mismatch: {self.bound} vs {other.bound}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.arity, self.bound)
        return NotImplemented

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return MultiPoly._raw(terms, self.arity, self.bound)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw({e: -c for e, c in self._terms.items()}, self.arity, self.bound)

    def __sub__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> MultiPoly:
        return (-self) + other

    def scale(self, c: Scalar) -> MultiPoly:
        c = Fraction(c)
        if c == 0:
            return MultiPoly._raw({}, self.arity, self.bound)
        return MultiPoly._raw({e: v * c for e, v in self._terms.items()}, self.arity, self.bound)

    def __mul__(self, other) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        bound = self.bound
        rhs = [(e, c, _root_degree(e)) for e, c in other._terms.items()]
        out: dict = {}
        get = out.get
        for ea, ca in self._terms.items():
            da = _root_degree(ea)
            for eb, cb, db in rhs:
                if da + db > bound:
                    continue
                e = tuple(map(operator.add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return MultiPoly._raw({e: c for e, c in out.items() if c}, self.arity, bound)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.arity, self.bound)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # structure ----------------------------------------------------------
    def truncated(self, bound: int) -> MultiPoly:
        """Re-truncate at a (smaller or larger) root-degree bound."""
        return MultiPoly(self._terms, self.arity, bound)

    def t_coefficient(self, k: int) -> MultiPoly:
        """Coefficient of ``t**k`` (a polynomial in the roots only)."""
        terms = {e[:-1] + (0,): c for e, c in self._terms.items() if e[-1] == k}
        return MultiPoly._raw(terms, self.arity, self.bound)

    def homogeneous(self, degree: int) -> MultiPoly:
        """The part of root degree exactly ``degree``."""
        terms = {e: c for e, c in self._terms.items() if _root_degree(e) == degree}
        return MultiPoly._raw(terms, self.arity, self.bound)

    def permute_roots(self, perm: Sequence[int]) -> MultiPoly:
        """Apply ``x_i -> x_perm[i]`` (0-based permutation of root slots)."""
        n = self.arity
        terms = {}
        for e, c in self._terms.items():
            new = [0] * (n + 1)
            for i in range(n):
                new[perm[i]] = e[i]
            new[n] = e[n]
            terms[tuple(new)] = c
        return MultiPoly._raw(terms, n, self.bound)

    def evaluate(self, roots: Sequence[Scalar], t: Scalar = 0) -> Fraction:
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(roots, e[:-1]):
                if k:
                    v *= Fraction(x) ** k
            if e[-1]:
                v *= Fraction(t) ** e[-1]
            total += v
        return total


def multipoly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def product(factors: Sequence[MultiPoly]) -> MultiPoly:
    """Left-to-right product of a non-empty sequence.  Exact arithmetic makes
    the result independent of association order; folding keeps one operand
    small, which is the cheap direction for sparse root factors."""
    factors = list(factors)
    if not factors:
        raise ValueError("empty product")
    acc = factors[0]
    for f in factors[1:]:
        acc = acc * f
    return acc


def solve_linear(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> list[Fraction] | None:
    """One exact solution of ``A x = b`` (free variables set to zero), or
    ``None`` when the system is inconsistent.  Fraction-valued Gauss-Jordan."""
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        m[r] = [v / lead for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in m):
        return None
    x = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        x[col] = m[i][-1]
    return x
