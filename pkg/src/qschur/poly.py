"""Exact integer polynomials in ``q`` and interpolation from prime-indexed counts."""

from __future__ import annotations

from fractions import Fraction
from itertools import count, islice
from typing import Iterable, Iterator, Sequence


class NotIntegral(ValueError):
    """The interpolating polynomial has a non-integer coefficient."""


class DegreeExceeded(ValueError):
    """The interpolating polynomial has degree above the stated bound."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPolynomial:
    """Polynomial with integer coefficients in ascending degree.

    Instances are immutable and hashable; the zero polynomial has no
    coefficients at all.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(int(a) for a in coeffs)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def const(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.const(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("IntPolynomial", self.coeffs))

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        result = IntPolynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                mon = "q" if d == 1 else f"q^{d}"
                body = mon if mag == 1 else f"{mag}*{mon}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "IntPolynomial":
        return cls(int(c) for c in data)


ZERO = IntPolynomial()
ONE = IntPolynomial.const(1)
Q = IntPolynomial.monomial(1)


def evaluate(P: IntPolynomial, x: int) -> int:
    """Exact Horner evaluation."""
    acc = 0
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def q_integer(m: int) -> IntPolynomial:
    """The Gaussian integer ``[m] = 1 + q + ... + q^(m-1)``."""
    return IntPolynomial([1] * m)


def q_factorial(m: int) -> IntPolynomial:
    out = ONE
    for k in range(1, m + 1):
        out = out * q_integer(k)
    return out


def gl_order(m: int) -> IntPolynomial:
    """``|GL_m(F_q)|`` as a polynomial in q."""
    out = ONE
    qm = IntPolynomial.monomial(m)
    for i in range(m):
        out = out * (qm - IntPolynomial.monomial(i))
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_stream() -> Iterator[int]:
    """2, 3, 5, 7, 11, ..."""
    return (n for n in count(2) if is_prime(n))


def first_primes(k: int) -> list[int]:
    return list(islice(prime_stream(), k))


def interpolate(samples: Sequence[tuple[int, int]], degree_bound: int) -> IntPolynomial:
    """Unique polynomial of degree <= ``degree_bound`` through the samples.

    Arithmetic is carried out over the rationals (Newton divided
    differences); a non-integer coefficient raises :class:`NotIntegral`.
    Extra samples beyond ``degree_bound + 1`` must lie on the same curve,
    otherwise :class:`DegreeExceeded` is raised.
    """
    pts = {}
    for x, y in samples:
        x, y = int(x), int(y)
        if x in pts and pts[x] != y:
            raise ValueError(f"conflicting samples at {x}")
        pts[x] = y
    if len(pts) < degree_bound + 1:
        raise ValueError(
            f"need {degree_bound + 1} distinct sample points, got {len(pts)}"
        )
    xs = list(pts)
    ys = [Fraction(pts[x]) for x in xs]
    k = len(xs)
    # Newton divided differences over all points; the full interpolant has
    # degree <= k - 1, and we check it against the bound afterwards.
    coef = list(ys)
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        # poly = poly * (q - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    while poly and poly[-1] == 0:
        poly.pop()
    if len(poly) - 1 > degree_bound:
        raise DegreeExceeded(
            f"interpolant has degree {len(poly) - 1} > bound {degree_bound}"
        )
    if any(c.denominator != 1 for c in poly):
        raise NotIntegral(f"non-integral interpolant {poly}")
    return IntPolynomial(int(c) for c in poly)


class NotPolynomial(ValueError):
    """Counts disagree with the interpolated polynomial at a validation prime."""


def fit_counts(
    count, degree_bound: int, primes: Sequence[int] | None = None
) -> IntPolynomial:
    """Interpolate ``count(p)`` through ``degree_bound + 1`` primes, then validate.

    With ``primes=None`` the first ``degree_bound + 2`` primes are used and the
    last one only validates. An explicit list must hold at least
    ``degree_bound + 2`` primes; every prime past the first ``degree_bound + 1``
    is a validation prime.
    """
    if primes is None:
        primes = first_primes(degree_bound + 2)
    primes = list(primes)
    if len(primes) < degree_bound + 2:
        raise ValueError(
            f"degree bound {degree_bound} needs {degree_bound + 2} primes, got {len(primes)}"
        )
    head = primes[: degree_bound + 1]
    P = interpolate([(p, count(p)) for p in head], degree_bound)
    for p in primes[degree_bound + 1:]:
        got = count(p)
        if evaluate(P, p) != got:
            raise NotPolynomial(f"interpolant {P} gives {evaluate(P, p)} at {p}, count is {got}")
    return P


class PolyCombination:
    """Finite formal sum of hashable keys with IntPolynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for k, c in items:
                if isinstance(c, int):
                    c = IntPolynomial.const(c)
                if c:
                    clean[k] = clean.get(k, ZERO) + c
                    if not clean[k]:
                        del clean[k]
        self.terms = clean

    def _new(self, terms):
        out = object.__new__(type(self))
        out.terms = terms
        for name in getattr(type(self), "_extra", ()):
            setattr(out, name, getattr(self, name))
        return out

    def __iter__(self):
        return iter(sorted(self.terms))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, key) -> IntPolynomial:
        return self.terms.get(key, ZERO)

    def __contains__(self, key):
        return key in self.terms

    def items(self):
        return sorted(self.terms.items())

    def keys(self):
        return sorted(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PolyCombination):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, ZERO) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return self._new(terms)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolyCombination":
        if isinstance(c, int):
            c = IntPolynomial.const(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, IntPolynomial)):
            return self.scale(c)
        return NotImplemented

    def map_coefficients(self, fn) -> "PolyCombination":
        terms = {}
        for k, c in self.terms.items():
            v = fn(c)
            if isinstance(v, int):
                v = IntPolynomial.const(v)
            if v:
                terms[k] = v
        return self._new(terms)

    def specialize(self, x: int) -> "PolyCombination":
        """Coefficient-wise evaluation at ``q = x``; zero coefficients vanish."""
        return self.map_coefficients(lambda c: evaluate(c, x))

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {c}" for k, c in self.items())
        return f"{type(self).__name__}({{{inner}}})"
