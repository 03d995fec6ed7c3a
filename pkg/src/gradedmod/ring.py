"""Sparse multivariate polynomials over Q (or a prime field) with a weighted grading.

Monomials are exponent tuples. A polynomial is an immutable map from monomials
to nonzero coefficients; the zero polynomial is the empty map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

Monomial = tuple[int, ...]


class RingError(ValueError):
    """Raised on mismatched rings or invalid ring data."""


class NotIsobaric(ValueError):
    """Raised when an operation needs an isobaric polynomial and gets a mixed one."""


def _is_prime(n: int) -> bool:
    return n > 1 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class CoefficientField:
    """Either exact rationals (``prime is None``) or GF(p)."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None:
            if not _is_prime(self.prime):
                raise RingError(f"{self.prime} is not prime")
            if self.prime <= 3:
                raise RingError("prime must exceed 3")

    @property
    def kind(self) -> str:
        return "exact-rationals" if self.prime is None else "prime-field"

    @property
    def is_exact(self) -> bool:
        return self.prime is None

    def __call__(self, value):
        """Coerce an int, Fraction, mpq or 'a/b' string into the field."""
        if self.prime is None:
            return mpq(value)
        q = mpq(value)
        p = self.prime
        num, den = int(q.numerator), int(q.denominator)
        if den % p == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        return num * pow(den, -1, p) % p

    def inv(self, c):
        if self.prime is None:
            return 1 / c
        return pow(int(c), -1, self.prime)

    def normalize(self, c):
        return c if self.prime is None else c % self.prime

    def label(self) -> str:
        return "QQ" if self.prime is None else f"Fp {self.prime}"

    def format(self, c) -> str:
        if self.prime is None:
            return str(c)
        # symmetric residues read better in reports
        c = int(c)
        return str(c - self.prime if c > self.prime // 2 else c)


QQ = CoefficientField()


@dataclass(frozen=True)
class GradedRing:
    variable_names: tuple[str, ...]
    weights: tuple[int, ...]
    field: CoefficientField = QQ

    def __post_init__(self):
        object.__setattr__(self, "variable_names", tuple(self.variable_names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.variable_names) != len(self.weights):
            raise RingError("one weight per variable required")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise RingError("duplicate variable")
        if any(w < 1 for w in self.weights):
            raise RingError("weights must be positive")
        if self.field.prime is not None and self.field.prime <= max(self.weights, default=0):
            raise RingError("prime must exceed every weight")

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def with_field(self, field: CoefficientField) -> "GradedRing":
        return GradedRing(self.variable_names, self.weights, field)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def one_mono(self) -> Monomial:
        return (0,) * self.nvars

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self.one_mono(): c} if c else {})

    def var(self, i: int) -> "Polynomial":
        mono = [0] * self.nvars
        mono[i] = 1
        return Polynomial(self, {tuple(mono): self.field(1)})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r}") from None

    def monomials_of_degree(self, d: int) -> list[Monomial]:
        """All monomials of weighted degree d, in descending term order."""
        out: list[Monomial] = []
        n = self.nvars
        w = self.weights

        def rec(i, remaining, acc):
            if i == n:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            for e in range(remaining // w[i] + 1):
                acc.append(e)
                rec(i + 1, remaining - e * w[i], acc)
                acc.pop()

        if d >= 0:
            rec(0, d, [])
        out.sort(key=self.order_key, reverse=True)
        return out

    def order_key(self, mono: Monomial):
        """Sort key of the weighted graded reverse lexicographic order (larger = bigger)."""
        return (self.monomial_degree(mono), tuple(-e for e in reversed(mono)))

    def from_terms(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]]) -> "Polynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, object] = {}
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != self.nvars:
                raise RingError("monomial length does not match ring")
            acc[mono] = self.field.normalize(acc.get(mono, 0) + self.field(c))
        return Polynomial(self, {m: c for m, c in acc.items() if c})

    def __str__(self):
        return f"{self.field.label()}[{', '.join(self.variable_names)}] weights {self.weights}"


@dataclass(frozen=True, eq=False)
class Polynomial:
    ring: GradedRing
    terms: Mapping[Monomial, object] = field(default_factory=dict)

    # -- basics ---------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and dict(self.terms) == dict(other.terms)
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError("ring mismatch")
            return other
        return self.ring.const(other)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        norm = self.ring.field.normalize
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field.normalize
        return Polynomial(self.ring, {m: norm(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.field(other)
            if not c:
                return self.ring.zero()
            norm = self.ring.field.normalize
            return Polynomial(self.ring, {m: norm(v * c) for m, v in self.terms.items()})
        other = self._coerce(other)
        norm = self.ring.field.normalize
        out: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.ring, {m: norm(c) for m, c in out.items() if norm(c)})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        c = self.ring.field(c)
        norm = self.ring.field.normalize
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): norm(v * c) for m, v in self.terms.items()},
        )

    def exact_divide(self, other: "Polynomial") -> "Polynomial":
        """Quotient q with self == q*other; raises ArithmeticError if the division leaves a remainder."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        field = self.ring.field
        lead = other.leading_monomial()
        inv = field.inv(other.terms[lead])
        rem = self
        quot: dict[Monomial, object] = {}
        while rem:
            m = rem.leading_monomial()
            q = tuple(a - b for a, b in zip(m, lead))
            if min(q) < 0:
                raise ArithmeticError("not divisible")
            c = field.normalize(rem.terms[m] * inv)
            quot[q] = c
            rem = rem - other.mul_monomial(q, c)
        return Polynomial(self.ring, quot)

    # -- structure ------------------------------------------------------------
    def monomials(self) -> list[Monomial]:
        """Monomials in descending term order."""
        return sorted(self.terms, key=self.ring.order_key, reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.order_key)

    def weighted_degree(self) -> int:
        """The common weighted degree of all terms; raises NotIsobaric otherwise."""
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        degs = {self.ring.monomial_degree(m) for m in self.terms}
        if len(degs) != 1:
            raise NotIsobaric("polynomial is not isobaric")
        return degs.pop()

    def is_isobaric(self) -> bool:
        return len({self.ring.monomial_degree(m) for m in self.terms}) <= 1

    def diff(self, i: int) -> "Polynomial":
        norm = self.ring.field.normalize
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                v = norm(c * e)
                if v:
                    out[m[:i] + (e - 1,) + m[i + 1:]] = v
        return Polynomial(self.ring, out)

    def gradient(self) -> tuple["Polynomial", ...]:
        return tuple(self.diff(i) for i in range(self.ring.nvars))

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def change_field(self, field: CoefficientField) -> "Polynomial":
        ring = self.ring.with_field(field)
        return ring.from_terms(self.terms.items())

    # -- printing -------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variable_names
        fmt = self.ring.field.format
        parts = []
        for m in self.monomials():
            c = fmt(self.terms[m])
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            neg = c.startswith("-")
            mag = c[1:] if neg else c
            if not factors:
                body = mag
            elif mag == "1":
                body = "*".join(factors)
            else:
                body = "*".join([mag] + factors)
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"Polynomial({self})"


def weighted_degree(p: Polynomial) -> int | None:
    """Weighted degree of a nonzero polynomial, or None if it is not isobaric."""
    if p.is_zero():
        raise ValueError("zero polynomial has no degree")
    try:
        return p.weighted_degree()
    except NotIsobaric:
        return None


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.diff(i)


def euler_check(p: Polynomial) -> bool:
    """Check sum_v d_v X_v dP/dX_v == k P for an isobaric P of weight k."""
    if p.is_zero():
        return True
    k = p.weighted_degree()
    ring = p.ring
    lhs = ring.zero()
    for v, w in enumerate(ring.weights):
        lhs = lhs + ring.var(v) * p.diff(v) * w
    return lhs == p * k


DifferentialElement = tuple  # tuple[Polynomial, ...] over dX_1..dX_m


def bracket_concrete(f: Polynomial, g: Polynomial) -> tuple[Polynomial, ...]:
    """The bracket deg(g) g df - deg(f) f dg as a vector over dX_1..dX_m."""
    if f.ring != g.ring:
        raise RingError("ring mismatch")
    if f.is_zero() or g.is_zero():
        raise ValueError("bracket needs nonzero arguments")
    a, b = f.weighted_degree(), g.weighted_degree()
    if a <= 0 or b <= 0:
        raise ValueError("bracket needs positive degrees")
    return tuple(g * f.diff(v) * b - f * g.diff(v) * a for v in range(f.ring.nvars))


def polynomial_ring(names: Sequence[str], weights: Sequence[int], prime: int | None = None) -> GradedRing:
    return GradedRing(tuple(names), tuple(weights), CoefficientField(prime))
