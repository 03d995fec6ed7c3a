"""Hilbert series of graded presentations.

Two independent routes: the leading-term module of a Groebner basis
(``hilbert_of_presentation``), and dense exact linear algebra degree by degree
(``dims_oracle``), which never touches the Groebner code.

Integer polynomials in t are dicts {degree: coefficient}; degrees may be
negative after a shift.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import flint
from gmpy2 import gcd, mpq, mpz

from .module import Presentation, Submodule, groebner

IntPoly = dict[int, int]


class ResourceLimitExceeded(RuntimeError):
    pass


# -- integer polynomial helpers -----------------------------------------------


def _clean(p: Mapping[int, int]) -> IntPoly:
    return {d: c for d, c in p.items() if c}


def _mul(a: Mapping[int, int], b: Mapping[int, int]) -> IntPoly:
    out: dict[int, int] = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
    return _clean(out)


def _one_minus(w: int) -> IntPoly:
    if w == 0:
        return {}
    return {0: 1, w: -1}


def _divide_one_minus(p: Mapping[int, int], w: int) -> IntPoly | None:
    """p / (1 - t^w) if exact, else None."""
    if not p:
        return {}
    lo, hi = min(p), max(p)
    q: dict[int, int] = {}
    for d in range(lo, hi - w + 1):
        c = p.get(d, 0) + q.get(d - w, 0)
        if c:
            q[d] = c
    return q if _mul(q, _one_minus(w)) == _clean(p) else None


def format_poly(p: Mapping[int, int], var: str = "t") -> str:
    if not p:
        return "0"
    parts = []
    for d in sorted(p):
        c = p[d]
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            mono = var if d == 1 else f"{var}^{d}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# -- series -----------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """numerator / prod (1 - t^w)^mult."""

    numerator: tuple[tuple[int, int], ...]
    denominator_factors: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, numerator: Mapping[int, int], factors: Iterable[tuple[int, int]]) -> "HilbertSeries":
        acc = Counter()
        for w, m in factors:
            if m:
                acc[w] += m
        return cls(tuple(sorted(_clean(numerator).items())), tuple(sorted(acc.items())))

    @property
    def num(self) -> IntPoly:
        return dict(self.numerator)

    def normalized(self) -> "HilbertSeries":
        """Cancel (1 - t^w) factors that divide the numerator."""
        num = self.num
        factors = dict(self.denominator_factors)
        for w in sorted(factors):
            while factors[w]:
                q = _divide_one_minus(num, w)
                if q is None:
                    break
                num = q
                factors[w] -= 1
        return HilbertSeries.build(num, factors.items())

    def shifted(self, d: int) -> "HilbertSeries":
        """t^d times the series."""
        return HilbertSeries.build({k + d: c for k, c in self.numerator}, self.denominator_factors)

    def __str__(self):
        den = " * ".join(f"(1 - t^{w})^{m}" if m > 1 else f"(1 - t^{w})" for w, m in self.denominator_factors)
        return f"({format_poly(self.num)}) / ({den or '1'})"

    def over_t_minus_one(self) -> str:
        """Same series written over (t^w - 1)^m, i.e. with the sign of an odd total multiplicity moved up."""
        total = sum(m for _, m in self.denominator_factors)
        num = self.num if total % 2 == 0 else {d: -c for d, c in self.numerator}
        den = " * ".join(f"(t^{w} - 1)^{m}" if m > 1 else f"(t^{w} - 1)" for w, m in self.denominator_factors)
        return f"({format_poly(num)}) / ({den or '1'})"


@dataclass(frozen=True)
class SeriesExpansion:
    """Graded dimensions through ``bound``; degrees not listed are zero."""

    coefficients: tuple[tuple[int, int], ...]
    bound: int

    def at(self, d: int) -> int:
        return dict(self.coefficients).get(d, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def degrees(self) -> list[int]:
        return [d for d, _ in self.coefficients]

    def values(self) -> list[int]:
        return [c for _, c in self.coefficients]

    def shifted(self, d: int) -> "SeriesExpansion":
        return SeriesExpansion(tuple((k + d, c) for k, c in self.coefficients), self.bound + d)


def expand(series: HilbertSeries, bound: int) -> SeriesExpansion:
    """Power series coefficients through degree ``bound``."""
    if bound < 0 and not series.numerator:
        return SeriesExpansion((), bound)
    coeffs = series.num
    lo = min(coeffs, default=0)
    for w, mult in series.denominator_factors:
        for _ in range(mult):
            # multiply by 1/(1 - t^w) = 1 + t^w + t^2w + ...
            out: dict[int, int] = {}
            for d in range(lo, bound + 1):
                c = coeffs.get(d, 0) + out.get(d - w, 0)
                if c:
                    out[d] = c
            coeffs = out
    items = tuple((d, c) for d, c in sorted(coeffs.items()) if d <= bound and c)
    return SeriesExpansion(items, bound)


def numerator_over(series: HilbertSeries, w: int, mult: int) -> IntPoly | None:
    """q with series == q / (1 - t^w)^mult, or None when q is not a polynomial."""
    num = series.num
    for _ in range(mult):
        num = _mul(num, _one_minus(w))
    for fw, fm in series.denominator_factors:
        for _ in range(fm):
            q = _divide_one_minus(num, fw)
            if q is None:
                return None
            num = q
    return num


# -- leading-term route ---------------------------------------------------------


def _minimalize(gens: Iterable[tuple[int, ...]]) -> frozenset:
    gens = sorted(set(gens), key=sum)
    kept: list[tuple[int, ...]] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(k, g)) for k in kept):
            kept.append(g)
    return frozenset(kept)


@functools.lru_cache(maxsize=100_000)
def _numerator(gens: frozenset, weights: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    """Numerator of R/I over prod (1 - t^w_i) for the monomial ideal I, by pivot splitting."""
    if not gens:
        return ((0, 1),)
    if any(not any(g) for g in gens):
        return ()
    glist = sorted(gens)
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in glist]
    coprime = all(not (supports[a] & supports[b]) for a in range(len(glist)) for b in range(a))
    if coprime:
        out: IntPoly = {0: 1}
        for g in glist:
            out = _mul(out, _one_minus(sum(w * e for w, e in zip(weights, g))))
        return tuple(sorted(out.items()))
    counts = Counter(i for s in supports for i in s)
    var = min(counts, key=lambda i: (-counts[i], i))
    # var occurs in two minimal generators, so x_var^e with the least positive exponent is not in I
    e = min(g[var] for g in glist if g[var])
    pivot = tuple(e if i == var else 0 for i in range(len(weights)))
    # N(I) = N(I + (p)) + t^deg(p) N(I : p)
    plus = _minimalize(list(glist) + [pivot])
    quot = _minimalize(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in glist)
    first = dict(_numerator(plus, weights))
    second = dict(_numerator(quot, weights))
    shift = weights[var] * e
    for d, c in second.items():
        first[d + shift] = first.get(d + shift, 0) + c
    return tuple(sorted(_clean(first).items()))


def monomial_quotient_numerator(gens: Iterable[tuple[int, ...]], weights: tuple[int, ...]) -> IntPoly:
    return dict(_numerator(_minimalize(gens), tuple(weights)))


def _variable_factors(weights: Iterable[int]) -> list[tuple[int, int]]:
    return sorted(Counter(weights).items())


def hilbert_of_presentation(p: Presentation) -> HilbertSeries:
    """Series of free/relations from the leading terms of the reduced Groebner basis (not normalized)."""
    F = p.free
    weights = F.ring.weights
    gb = p.relations.gb if p.relations.generators else groebner(p.relations)
    by_pos: dict[int, list[tuple[int, ...]]] = {}
    for pos, exps in gb.leading_terms():
        by_pos.setdefault(pos, []).append(exps)
    total: IntPoly = {}
    for j, s in enumerate(F.shifts):
        for d, c in monomial_quotient_numerator(by_pos.get(j, ()), weights).items():
            total[d + s] = total.get(d + s, 0) + c
    return HilbertSeries.build(total, _variable_factors(weights))


def hilbert_of_submodule(sub: Submodule) -> HilbertSeries:
    return hilbert_of_presentation(Presentation(sub.ambient, sub))


# -- dense linear-algebra route ----------------------------------------------------


DEFAULT_MAX_ENTRIES = 20_000_000


def _graded_rank(sub: Submodule, d: int, prime: int | None, max_entries: int) -> tuple[int, int]:
    """(dim F_d, dim sub_d) by explicit elimination on all monomial multiples of the generators."""
    F = sub.ambient
    ring = F.ring
    columns: dict[tuple[int, tuple[int, ...]], int] = {}
    for j, s in enumerate(F.shifts):
        for mono in ring.monomials_of_degree(d - s):
            columns[(j, mono)] = len(columns)
    ncols = len(columns)
    rows: list[dict[int, object]] = []
    for g in sub.generators:
        e = g.degree()
        if e > d:
            continue
        for mono in ring.monomials_of_degree(d - e):
            row = {}
            for j, c in enumerate(g.components):
                for m, v in c.terms.items():
                    row[columns[(j, tuple(a + b for a, b in zip(m, mono)))]] = v
            rows.append(row)
    if not rows or not ncols:
        return ncols, 0
    if len(rows) * ncols > max_entries:
        raise ResourceLimitExceeded(f"degree {d}: {len(rows)} x {ncols} matrix exceeds the limit")
    if prime is None:
        mat = flint.fmpz_mat(len(rows), ncols)
        for r, row in enumerate(rows):
            den = mpz(1)
            for v in row.values():
                den = den * v.denominator // gcd(den, v.denominator)
            for col, v in row.items():
                mat[r, col] = int(v * den)
    else:
        mat = flint.nmod_mat(len(rows), ncols, prime)
        for r, row in enumerate(rows):
            for col, v in row.items():
                if isinstance(v, type(mpq())):
                    v = int(v.numerator) * pow(int(v.denominator), -1, prime)
                mat[r, col] = int(v) % prime
    return ncols, mat.rank()


def submodule_dims(sub: Submodule, bound: int, prime: int | None = None,
                   max_entries: int = DEFAULT_MAX_ENTRIES) -> dict[int, int]:
    """dim sub_d for every d up to bound (zeros omitted)."""
    F = sub.ambient
    out = {}
    for d in range(min(F.shifts), bound + 1):
        _, rk = _graded_rank(sub, d, prime, max_entries)
        if rk:
            out[d] = rk
    return out


def dims_oracle(p: Presentation, bound: int, prime: int | None = None,
                max_entries: int = DEFAULT_MAX_ENTRIES) -> SeriesExpansion:
    """Graded dimensions of free/relations through ``bound`` by dense exact elimination.

    ``prime`` switches to GF(p) elimination, which is a probabilistic check only.
    """
    if prime is None:
        prime = p.free.ring.field.prime
    F = p.free
    items = []
    for d in range(min(F.shifts), bound + 1):
        ncols, rk = _graded_rank(p.relations, d, prime, max_entries)
        if ncols - rk:
            items.append((d, ncols - rk))
    return SeriesExpansion(tuple(items), bound)


def series_difference(a: HilbertSeries, b: HilbertSeries) -> HilbertSeries:
    """a - b, over the product of both denominators."""
    fa, fb = dict(a.denominator_factors), dict(b.denominator_factors)
    common = {w: max(fa.get(w, 0), fb.get(w, 0)) for w in set(fa) | set(fb)}
    num: IntPoly = {}
    for s, f, sign in ((a, fa, 1), (b, fb, -1)):
        part = s.num
        for w, m in common.items():
            for _ in range(m - f.get(w, 0)):
                part = _mul(part, _one_minus(w))
        for d, c in part.items():
            num[d] = num.get(d, 0) + sign * c
    return HilbertSeries.build(num, common.items())
