"""Chern-roots ring: elementary symmetric polynomials, symmetry tests, reduction
to the Chern-class basis (Gauss's algorithm) and Newton's identities.

A :class:`ChernPoly` is a polynomial in generators ``c1..cn`` (weight of
``ck`` is ``k``) and one formal variable ``t`` of weight zero.  Keys are
exponent tuples ``(e1, ..., en, t_exp)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .core import MultiPoly, Scalar, format_rational

DEFAULT_MAX_DIMENSION = 8
DIMENSION_CEILING = 10


class DimensionError(ValueError):
    pass


class NotSymmetricError(ValueError):
    def __init__(self, i: int):
        self.transposition = (i, i + 1)
        super().__init__(f"polynomial is not invariant under swapping x{i} and x{i + 1}")


class MonomialKeyError(KeyError):
    def __str__(self):
        return str(self.args[0])


def check_dimension(n: int, limit: int = DIMENSION_CEILING) -> int:
    if not isinstance(n, int) or n < 1:
        raise DimensionError(f"dimension must be a positive integer, got {n!r}")
    if n > min(limit, DIMENSION_CEILING):
        raise DimensionError(f"dimension {n} exceeds the configured ceiling {min(limit, DIMENSION_CEILING)}")
    return n


def _weight(e: Sequence[int]) -> int:
    # e includes the trailing t slot, which has weight zero
    return sum((k + 1) * x for k, x in enumerate(e[:-1]))


def _order_key(e: Sequence[int]):
    idx = []
    for k, x in enumerate(e[:-1]):
        idx.extend([k + 1] * x)
    return (e[-1], tuple(idx))


# ---------------------------------------------------------------------------
# monomial keys

_KEY_FACTOR = re.compile(r"c([1-9][0-9]*)(?:\^([1-9][0-9]*))?$")


def monomial_key(exps: Sequence[int]) -> str:
    """Canonical text for ``c1^e1*...*cn^en`` (no t slot); ``1`` for the
    empty monomial."""
    parts = []
    for k, x in enumerate(exps):
        if x == 1:
            parts.append(f"c{k + 1}")
        elif x > 1:
            parts.append(f"c{k + 1}^{x}")
    return "*".join(parts) or "1"


def parse_monomial_key(key: str, n: int) -> tuple[int, ...]:
    """Inverse of :func:`monomial_key` for dimension ``n``.

    Only the canonical spelling is accepted (factors in increasing index,
    each index once, ``*`` separated); anything else raises
    :class:`MonomialKeyError` naming the key.
    """
    exps = [0] * n
    if key == "1":
        return tuple(exps)
    last = 0
    for factor in key.split("*"):
        m = _KEY_FACTOR.match(factor)
        if not m:
            raise MonomialKeyError(f"malformed Chern monomial key {key!r}")
        k = int(m.group(1))
        x = int(m.group(2) or 1)
        if k > n:
            raise MonomialKeyError(f"key {key!r} uses c{k} beyond dimension {n}")
        if k <= last:
            raise MonomialKeyError(f"key {key!r} is not in canonical order")
        last = k
        exps[k - 1] = x
    if monomial_key(exps) != key:
        raise MonomialKeyError(f"key {key!r} is not canonical (expected {monomial_key(exps)!r})")
    return tuple(exps)


def partitions_of_weight(n: int, w: int) -> list[tuple[int, ...]]:
    """All Chern exponent vectors of length ``n`` with weight exactly ``w``."""
    out = []

    def rec(k, remaining, acc):
        if k == 0:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for x in range(remaining // k, -1, -1):
            acc[k - 1] = x
            rec(k - 1, remaining - k * x, acc)
        acc[k - 1] = 0

    rec(n, w, [0] * n)
    return sorted(out, key=lambda e: _order_key(e + (0,)))


# ---------------------------------------------------------------------------
# ChernPoly


class ChernPoly:
    """Polynomial in Chern classes ``c1..cn`` and ``t``, truncated at weight
    ``bound`` (default ``n``)."""

    __slots__ = ("n", "bound", "_terms")

    def __init__(self, terms: Mapping | Iterable = (), n: int = 1, bound: int | None = None):
        if bound is None:
            bound = n
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) == n:
                e = e + (0,)
            if len(e) != n + 1:
                raise DimensionError(f"exponent {e} does not fit dimension {n}")
            if c == 0 or _weight(e) > bound:
                continue
            v = clean.get(e, 0) + Fraction(c)
            if v:
                clean[e] = v
            else:
                clean.pop(e, None)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ChernPoly is immutable")

    @classmethod
    def gen(cls, k: int, n: int, bound: int | None = None) -> ChernPoly:
        """The generator ``c_k``; ``c_0`` is 1 and ``c_k`` for ``k > n`` is 0."""
        if k == 0:
            return cls.constant(1, n, bound)
        if k < 0 or k > n:
            return cls({}, n, bound)
        e = [0] * (n + 1)
        e[k - 1] = 1
        return cls({tuple(e): 1}, n, bound)

    @classmethod
    def constant(cls, c: Scalar, n: int, bound: int | None = None) -> ChernPoly:
        return cls({(0,) * (n + 1): c}, n, bound)

    @classmethod
    def t(cls, n: int, bound: int | None = None) -> ChernPoly:
        return cls({(0,) * n + (1,): 1}, n, bound)

    @classmethod
    def parse(cls, text: str, n: int, bound: int | None = None) -> ChernPoly:
        """Parse the output of :meth:`render` back into a polynomial."""
        text = text.strip()
        if text == "0":
            return cls({}, n, bound)
        pieces = re.split(r" ([+-]) ", text)
        signed = [("-", pieces[0][1:]) if pieces[0].startswith("-") else ("+", pieces[0])]
        signed += list(zip(pieces[1::2], pieces[2::2]))
        terms: dict = {}
        for sign, body in signed:
            m = re.fullmatch(r"(?:\((\d+(?:/\d+)?)\)\*|(\d+)\*)?(.+)", body)
            coeff = Fraction(m.group(1) or m.group(2) or 1)
            mon = m.group(3)
            if re.fullmatch(r"\d+(?:/\d+)?", mon):
                coeff, mon = Fraction(mon), "1"
            tdeg, rest = 0, []
            for f in mon.split("*"):
                if f == "t":
                    tdeg += 1
                elif f.startswith("t^"):
                    tdeg += int(f[2:])
                else:
                    rest.append(f)
            exps = parse_monomial_key("*".join(rest) or "1", n)
            key = exps + (tdeg,)
            terms[key] = terms.get(key, 0) + (-coeff if sign == "-" else coeff)
        return cls(terms, n, bound)

    # access -------------------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, exps: Sequence[int] | str, t: int = 0) -> Fraction:
        if isinstance(exps, str):
            exps = parse_monomial_key(exps, self.n)
        return self._terms.get(tuple(exps) + (t,), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]))

    def weights(self) -> set[int]:
        return {_weight(e) for e in self._terms}

    def is_homogeneous(self, w: int) -> bool:
        return all(_weight(e) == w for e in self._terms)

    def homogeneous(self, w: int) -> ChernPoly:
        return ChernPoly({e: c for e, c in self._terms.items() if _weight(e) == w}, self.n, self.bound)

    def t_coefficient(self, k: int) -> ChernPoly:
        return ChernPoly({e[:-1] + (0,): c for e, c in self._terms.items() if e[-1] == k}, self.n, self.bound)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ChernPoly.constant(other, self.n, self.bound)
        if not isinstance(other, ChernPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"ChernPoly({self.render()!r}, n={self.n})"

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        """Canonical text, e.g. ``(1/12)*c1*c5 + (13/4)*c6``."""
        if not self._terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mon = monomial_key(e[:-1])
            if e[-1]:
                tpart = "t" if e[-1] == 1 else f"t^{e[-1]}"
                mon = tpart if mon == "1" else f"{tpart}*{mon}"
            a = abs(c)
            if mon == "1":
                body = format_rational(a)
            elif a == 1:
                body = mon
            elif a.denominator == 1:
                body = f"{a.numerator}*{mon}"
            else:
                body = f"({format_rational(a)})*{mon}"
            out.append(("-" if c < 0 else "+", body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def latex(self) -> str:
        """LaTeX rendering with subscripted generators, e.g.
        ``\\frac{1}{12} c_1 c_5 + \\frac{13}{4} c_6``."""
        if not self._terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            factors = []
            if e[-1]:
                factors.append("t" if e[-1] == 1 else f"t^{{{e[-1]}}}")
            for k, x in enumerate(e[:-1]):
                if x:
                    factors.append(f"c_{{{k + 1}}}" + (f"^{{{x}}}" if x > 1 else ""))
            mon = " ".join(factors)
            a = abs(c)
            if a.denominator == 1:
                num = "" if (a == 1 and mon) else str(a.numerator)
            else:
                num = f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
            body = " ".join(x for x in (num, mon) if x)
            out.append(("-" if c < 0 else "+", body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ChernPoly):
            if other.n != self.n:
                raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return ChernPoly.constant(other, self.n, self.bound)
        return NotImplemented

    def __add__(self, other) -> ChernPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return ChernPoly(terms, self.n, min(self.bound, other.bound))

    __radd__ = __add__

    def __neg__(self) -> ChernPoly:
        return ChernPoly({e: -c for e, c in self._terms.items()}, self.n, self.bound)

    def __sub__(self, other) -> ChernPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> ChernPoly:
        return (-self) + other

    def __mul__(self, other) -> ChernPoly:
        if isinstance(other, (int, Fraction)):
            return ChernPoly({e: c * other for e, c in self._terms.items()}, self.n, self.bound)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bound = min(self.bound, other.bound)
        out: dict = {}
        for ea, ca in self._terms.items():
            wa = _weight(ea)
            for eb, cb in other._terms.items():
                if wa + _weight(eb) > bound:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return ChernPoly(out, self.n, bound)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> ChernPoly:
        return self * (1 / Fraction(other))

    def __pow__(self, k: int) -> ChernPoly:
        result = ChernPoly.constant(1, self.n, self.bound)
        for _ in range(k):
            result = result * self
        return result

    def expand_in_roots(self) -> MultiPoly:
        """Substitute ``c_k -> e_k(x1..xn)``; ``t`` maps to the extra slot."""
        n, bound = self.n, self.bound
        out = MultiPoly({}, n, bound)
        for e, c in self._terms.items():
            mono = _elementary_monomial(n, bound, e[:-1])
            if e[-1]:
                mono = MultiPoly._raw({k[:-1] + (k[-1] + e[-1],): v for k, v in mono.terms.items()}, n, bound)
            out = out + mono.scale(c)
        return out


# ---------------------------------------------------------------------------
# roots side


def elementary_in_roots(n: int, k: int, bound: int | None = None) -> MultiPoly:
    """The k-th elementary symmetric polynomial in ``x1..xn``."""
    if k < 0 or k > n:
        raise DimensionError(f"elementary index {k} outside 0..{n}")
    return _elementary(n, k, n if bound is None else bound)


@lru_cache(maxsize=None)
def _elementary(n: int, k: int, bound: int) -> MultiPoly:
    from itertools import combinations

    terms = {}
    for subset in combinations(range(n), k):
        e = [0] * (n + 1)
        for i in subset:
            e[i] = 1
        terms[tuple(e)] = 1
    return MultiPoly(terms, n, bound)


@lru_cache(maxsize=None)
def _elementary_monomial(n: int, bound: int, chern_exps: tuple) -> MultiPoly:
    """Expansion of ``prod c_k^{e_k}`` in the roots."""
    # peel one factor at a time so intermediate results are cached too
    for k in range(len(chern_exps), 0, -1):
        if chern_exps[k - 1]:
            rest = list(chern_exps)
            rest[k - 1] -= 1
            return _elementary_monomial(n, bound, tuple(rest)) * _elementary(n, k, bound)
    return MultiPoly.constant(1, n, bound)


@lru_cache(maxsize=None)
def _dominant_image(n: int, bound: int, chern_exps: tuple) -> tuple:
    """Coefficients of ``prod c_k^{e_k}`` on non-increasing root exponents."""
    poly = _elementary_monomial(n, bound, chern_exps)
    return tuple((e[:-1], c) for e, c in poly.terms.items() if _is_dominant(e[:-1]))


def _is_dominant(a: Sequence[int]) -> bool:
    return all(a[i] >= a[i + 1] for i in range(len(a) - 1))


def power_sum_in_roots(n: int, k: int, bound: int | None = None) -> MultiPoly:
    terms = {}
    for i in range(n):
        e = [0] * (n + 1)
        e[i] = k
        terms[tuple(e)] = 1
    return MultiPoly(terms, n, bound)


def is_symmetric(p: MultiPoly) -> bool:
    return _first_asymmetry(p) is None


def _first_asymmetry(p: MultiPoly) -> int | None:
    """1-based index ``i`` such that swapping ``x_i, x_{i+1}`` changes ``p``."""
    terms = p.terms
    for i in range(p.arity - 1):
        for e, c in terms.items():
            if e[i] == e[i + 1]:
                continue
            s = list(e)
            s[i], s[i + 1] = s[i + 1], s[i]
            if terms.get(tuple(s)) != c:
                return i + 1
    return None


def reduce_to_elementary(p: MultiPoly, trace: list | None = None) -> ChernPoly:
    """Rewrite a symmetric polynomial in the Chern classes.

    Gauss's algorithm: repeatedly take the lex-leading monomial
    ``x^a`` (``a`` non-increasing), subtract its coefficient times
    ``c1^(a1-a2) c2^(a2-a3) ... cn^an``.  Symmetry lets us track only the
    non-increasing exponents.  If ``trace`` is given, the leading exponent of
    every step is appended to it.
    """
    bad = _first_asymmetry(p)
    if bad is not None:
        raise NotSymmetricError(bad)
    n, bound = p.arity, p.bound
    # remainder keyed by (root exponents, t exponent)
    rem = {(e[:-1], e[-1]): c for e, c in p.terms.items() if _is_dominant(e[:-1])}
    out: dict = {}
    while rem:
        lead = max(rem)
        if trace is not None:
            trace.append(lead)
        a, tdeg = lead
        coef = rem[lead]
        chern = tuple(a[k] - (a[k + 1] if k + 1 < n else 0) for k in range(n))
        out[chern + (tdeg,)] = coef
        for root_e, v in _dominant_image(n, bound, chern):
            key = (root_e, tdeg)
            nv = rem.get(key, 0) - coef * v
            if nv:
                rem[key] = nv
            else:
                rem.pop(key, None)
    return ChernPoly(out, n, bound)


@lru_cache(maxsize=None)
def newton_power_sum(n: int, k: int, bound: int | None = None) -> ChernPoly:
    """Power sum ``s_k = sum x_i^k`` in the Chern classes, by Newton's
    recurrence ``s_k = c1 s_{k-1} - c2 s_{k-2} + ... + (-1)^(k-1) k c_k``."""
    if k < 1:
        raise ValueError("power sums start at k=1")
    bound = n if bound is None else bound
    c = [ChernPoly.gen(i, n, bound) for i in range(k + 1)]
    s = [ChernPoly.constant(n, n, bound)]
    for j in range(1, k + 1):
        acc = c[j] * ((-1) ** (j - 1) * j)
        for i in range(1, j):
            acc = acc + c[i] * s[j - i] * ((-1) ** (i - 1))
        s.append(acc)
    return s[k]


def substitute(p: ChernPoly, assignments: Mapping[int, ChernPoly | Scalar]) -> ChernPoly:
    """Replace generators ``c_k`` by the given values (other generators are
    left alone); the result is re-truncated at ``p.bound``."""
    n, bound = p.n, p.bound
    images = []
    for k in range(1, n + 1):
        v = assignments.get(k)
        if v is None:
            images.append(ChernPoly.gen(k, n, bound))
        elif isinstance(v, ChernPoly):
            images.append(v)
        else:
            images.append(ChernPoly.constant(v, n, bound))
    out = ChernPoly({}, n, bound)
    tvar = ChernPoly.t(n, bound)
    for e, c in p.terms.items():
        term = ChernPoly.constant(c, n, bound)
        for k, x in enumerate(e[:-1]):
            if x:
                term = term * images[k] ** x
        if e[-1]:
            term = term * tvar ** e[-1]
        out = out + term
    return out
