"""Submodules of free graded modules: Groebner bases, membership, syzygies, colons.

All submodules are homogeneous.  The module order is term-over-position on the
shifted weighted degree, weighted grevlex on monomials, and lower position
first.  Syzygies, intersections, colons and lifts go through one elimination
helper that stacks two free modules and eliminates the first block degree by
degree.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _kernel
from .ring import GradedRing, Polynomial, RingError


class AmbientMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FreeModule:
    ring: GradedRing
    rank: int
    shifts: tuple[int, ...] = ()

    def __post_init__(self):
        shifts = tuple(self.shifts) if self.shifts else (0,) * self.rank
        object.__setattr__(self, "shifts", shifts)
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if len(shifts) != self.rank:
            raise ValueError("one shift per basis vector required")

    def basis(self, j: int) -> "ModuleElement":
        comps = [self.ring.zero()] * self.rank
        comps[j] = self.ring.one()
        return ModuleElement(self, tuple(comps))

    def basis_vectors(self) -> list["ModuleElement"]:
        return [self.basis(j) for j in range(self.rank)]

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, (self.ring.zero(),) * self.rank)

    def element(self, components: Sequence) -> "ModuleElement":
        comps = tuple(c if isinstance(c, Polynomial) else self.ring.const(c) for c in components)
        return ModuleElement(self, comps)

    def shifted(self, d: int) -> "FreeModule":
        return FreeModule(self.ring, self.rank, tuple(s + d for s in self.shifts))

    def order(self) -> _kernel.TermOrder:
        return _order(self.ring.weights, self.shifts, None)


@functools.lru_cache(maxsize=None)
def _order(weights, shifts, classes) -> _kernel.TermOrder:
    return _kernel.TermOrder(weights, shifts, classes)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    ambient: FreeModule
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.ambient.rank:
            raise ValueError("component count must equal the rank")
        for c in self.components:
            if c.ring != self.ambient.ring:
                raise RingError("component ring mismatch")

    def __getitem__(self, j):
        return self.components[j]

    def __iter__(self):
        return iter(self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other: "ModuleElement"):
        if not isinstance(other, ModuleElement) or other.ambient != self.ambient:
            raise AmbientMismatch("elements live in different free modules")

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.ambient == other.ambient and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other):
        self._check(other)
        return ModuleElement(self.ambient, tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        self._check(other)
        return ModuleElement(self.ambient, tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return ModuleElement(self.ambient, tuple(-a for a in self))

    def __mul__(self, scalar):
        return ModuleElement(self.ambient, tuple(a * scalar for a in self))

    __rmul__ = __mul__

    def degrees(self) -> set[int]:
        ring, shifts = self.ambient.ring, self.ambient.shifts
        return {ring.monomial_degree(m) + s for c, s in zip(self, shifts) for m in c.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("zero or inhomogeneous element has no degree")
        return degs.pop()

    def pack(self, order: _kernel.TermOrder, offset: int = 0) -> dict:
        out = {}
        for j, c in enumerate(self.components):
            for m, v in c.terms.items():
                out[order.key(j + offset, m)] = v
        return out

    def serialize(self) -> str:
        """Canonical text: nonzero components in slot order, terms in descending order."""
        parts = [f"[{j}] {c}" for j, c in enumerate(self.components) if c]
        return "; ".join(parts) if parts else "0"

    def __str__(self):
        return self.serialize()

    def __repr__(self):
        return f"ModuleElement({self.serialize()})"


def _unpack(packed: dict, order: _kernel.TermOrder, ambient: FreeModule, offset: int = 0) -> ModuleElement:
    comps: list[dict] = [{} for _ in range(ambient.rank)]
    for k, v in packed.items():
        pos, exps = order.decode(k)
        comps[pos - offset][exps] = v
    ring = ambient.ring
    return ModuleElement(ambient, tuple(Polynomial(ring, c) for c in comps))


@dataclass(frozen=True, eq=False)
class Submodule:
    ambient: FreeModule
    generators: tuple[ModuleElement, ...] = ()

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.ambient != self.ambient:
                raise AmbientMismatch("generator outside the ambient module")
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise ValueError("generators must be homogeneous")
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    def __len__(self):
        return len(self.generators)

    @functools.cached_property
    def gb(self) -> "GroebnerBasis":
        return groebner(self)

    def __add__(self, other: "Submodule") -> "Submodule":
        if other.ambient != self.ambient:
            raise AmbientMismatch("different ambient modules")
        return Submodule(self.ambient, self.generators + other.generators)

    def scaled(self, f: Polynomial) -> "Submodule":
        return Submodule(self.ambient, tuple(g * f for g in self.generators))


def full_module(F: FreeModule) -> Submodule:
    return Submodule(F, tuple(F.basis_vectors()))


def multiples(F: FreeModule, f: Polynomial) -> Submodule:
    """The submodule f*F."""
    return Submodule(F, tuple(e * f for e in F.basis_vectors()))


@dataclass(frozen=True)
class Presentation:
    free: FreeModule
    relations: Submodule

    def __post_init__(self):
        if self.relations.ambient != self.free:
            raise AmbientMismatch("relations must live in the free module")


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    ambient: FreeModule
    elements: tuple[ModuleElement, ...]
    order: str = "top-wgrevlex"
    reduced: bool = True
    _packed: tuple = field(default=(), repr=False)

    @functools.cached_property
    def _basis(self) -> _kernel._Basis:
        b = _kernel._Basis(self.ambient.order())
        for p in self._packed:
            b.add(p)
        return b

    def __len__(self):
        return len(self.elements)

    def leading_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        """(position, exponents) of each leading term, in basis order."""
        order = self.ambient.order()
        return [order.decode(max(p)) for p in self._packed]

    def serialize(self) -> str:
        return "\n".join(e.serialize() for e in self.elements)


def _prime(F: FreeModule) -> int | None:
    return F.ring.field.prime


def _from_packed(F: FreeModule, packed: list[dict]) -> GroebnerBasis:
    order = F.order()
    return GroebnerBasis(F, tuple(_unpack(p, order, F) for p in packed), _packed=tuple(packed))


_gb_cache = None


def set_gb_cache(cache) -> None:
    """Install (or with None remove) a store consulted by groebner()."""
    global _gb_cache
    _gb_cache = cache


def basis_from_elements(F: FreeModule, elems: Sequence[ModuleElement]) -> GroebnerBasis:
    """Wrap elements already known to form a reduced basis."""
    order = F.order()
    return _from_packed(F, sorted((e.pack(order) for e in elems), key=max))


def _groebner(sub: Submodule) -> GroebnerBasis:
    F = sub.ambient
    order = F.order()
    packed = _kernel.buchberger(
        (g.pack(order) for g in sub.generators),
        order,
        _prime(F),
        product_criterion=F.rank == 1,
    )
    return _from_packed(F, packed)


def groebner(sub: Submodule) -> GroebnerBasis:
    """Reduced Groebner basis of a homogeneous submodule."""
    if _gb_cache is not None and sub.generators:
        return _gb_cache.fetch(sub, lambda: _groebner(sub))
    return _groebner(sub)


def normal_form(v: ModuleElement, gb: GroebnerBasis) -> ModuleElement:
    if v.ambient != gb.ambient:
        raise AmbientMismatch("element and basis live in different modules")
    order = gb.ambient.order()
    r = _kernel.reduce(v.pack(order), gb._basis, _prime(gb.ambient), full=True)
    return _unpack(r, order, gb.ambient)


def is_member(v: ModuleElement, sub: Submodule) -> bool:
    if v.ambient != sub.ambient:
        raise AmbientMismatch("element and submodule live in different modules")
    if v.is_zero():
        return True
    order = sub.ambient.order()
    return not _kernel.reduce(v.pack(order), sub.gb._basis, _prime(sub.ambient), full=False)


def contains(big: Submodule, small: Submodule) -> bool:
    return all(is_member(g, big) for g in small.generators)


def equal(a: Submodule, b: Submodule) -> bool:
    """Submodule equality by mutual generator membership."""
    return contains(a, b) and contains(b, a)


# -- elimination -------------------------------------------------------------


class _Stacked:
    """first (+) second, with the first block eliminated degree-wise."""

    def __init__(self, first: FreeModule, second: FreeModule):
        if first.ring != second.ring:
            raise RingError("ring mismatch")
        self.first, self.second = first, second
        self.order = _order(
            first.ring.weights,
            first.shifts + second.shifts,
            (1,) * first.rank + (0,) * second.rank,
        )

    def pack(self, a: ModuleElement | None, b: ModuleElement | None) -> dict:
        out = {}
        if a is not None:
            out.update(a.pack(self.order))
        if b is not None:
            out.update(b.pack(self.order, offset=self.first.rank))
        return out

    def split(self, packed: dict) -> tuple[dict, dict]:
        r1 = self.first.rank
        top, bottom = {}, {}
        for k, v in packed.items():
            (top if self.order.decode(k)[0] < r1 else bottom)[k] = v
        return top, bottom

    def second_part(self, packed: dict) -> ModuleElement:
        return _unpack(packed, self.order, self.second, offset=self.first.rank)

    def eliminated(self, rows: Iterable[dict]) -> list[dict]:
        """Reduced basis elements whose first block vanishes."""
        prime = _prime(self.first)
        gb = _kernel.buchberger(rows, self.order, prime)
        r1 = self.first.rank
        out = []
        for p in gb:
            if self.order.decode(max(p))[0] >= r1:
                out.append(p)
        return out

    def basis(self, rows: Iterable[dict]) -> _kernel._Basis:
        b = _kernel._Basis(self.order)
        for p in _kernel.buchberger(rows, self.order, _prime(self.first)):
            b.add(p)
        return b


def syzygy_basis(gens: Sequence[ModuleElement]) -> Submodule:
    """Generators of the syzygy module of gens, inside a free module with shifts deg(g_i)."""
    gens = list(gens)
    if not gens:
        raise ValueError("no generators")
    F = gens[0].ambient
    for g in gens:
        if g.ambient != F:
            raise AmbientMismatch("generators in different modules")
        if g.is_zero() or not g.is_homogeneous():
            raise ValueError("generators must be nonzero and homogeneous")
    G = FreeModule(F.ring, len(gens), tuple(g.degree() for g in gens))
    st = _Stacked(F, G)
    rows = [st.pack(g, e) for g, e in zip(gens, G.basis_vectors())]
    syz = [st.second_part(p) for p in st.eliminated(rows)]
    return Submodule(G, tuple(syz))


def intersect(a: Submodule, b: Submodule) -> Submodule:
    """a ∩ b; the returned generators are the reduced Groebner basis of the intersection."""
    if a.ambient != b.ambient:
        raise AmbientMismatch("different ambient modules")
    F = a.ambient
    st = _Stacked(F, F)
    rows = [st.pack(g, g) for g in a.generators] + [st.pack(g, None) for g in b.generators]
    packed = st.eliminated(rows)
    elems = [st.second_part(p) for p in packed]
    sub = Submodule(F, tuple(elems))
    order = F.order()
    # the eliminated part already is the reduced basis in F's own order
    sub.__dict__["gb"] = _from_packed(F, [e.pack(order) for e in elems])
    return sub


def _require_divisor(f: Polynomial, F: FreeModule) -> None:
    if f.ring != F.ring:
        raise RingError("ring mismatch")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if not f.is_isobaric():
        raise ValueError("f must be isobaric")


def colon(sub: Submodule, f: Polynomial) -> Submodule:
    """{x : f*x in sub}, computed as (1/f) * (sub ∩ fF)."""
    F = sub.ambient
    _require_divisor(f, F)
    if f.weighted_degree() == 0:
        return sub
    meet = intersect(multiples(F, f), sub)
    quotients = [ModuleElement(F, tuple(c.exact_divide(f) for c in g)) for g in meet.generators]
    return Submodule(F, tuple(quotients))


def mult_injective(p: Presentation, f: Polynomial) -> bool:
    """Whether multiplication by f is injective on free/relations."""
    _require_divisor(f, p.free)
    return equal(colon(p.relations, f), p.relations)


def quotient_divide(w: ModuleElement, f: Polynomial, rel: Submodule) -> ModuleElement | None:
    """Some v with f*v ≡ w modulo rel, or None when w is not in fF + rel."""
    F = rel.ambient
    if w.ambient != F:
        raise AmbientMismatch("element and relations live in different modules")
    _require_divisor(f, F)
    if w.is_zero():
        return F.zero()
    G = F.shifted(f.weighted_degree())
    st = _Stacked(F, G)
    rows = [st.pack(e * f, ModuleElement(G, e.components)) for e in F.basis_vectors()]
    rows += [st.pack(g, None) for g in rel.generators]
    basis = st.basis(rows)
    r = _kernel.reduce(st.pack(w, None), basis, _prime(F), full=True)
    top, bottom = st.split(r)
    if top:
        return None
    v = -st.second_part(bottom)
    return ModuleElement(F, v.components)


def lift(v: ModuleElement, sub: Submodule) -> tuple[Polynomial, ...] | None:
    """Coefficients c with v == sum c_i * sub.generators[i], or None if v is not a member."""
    F = sub.ambient
    if v.ambient != F:
        raise AmbientMismatch("element and submodule live in different modules")
    if not sub.generators:
        return () if v.is_zero() else None
    G = FreeModule(F.ring, len(sub), tuple(g.degree() for g in sub.generators))
    st = _Stacked(F, G)
    rows = [st.pack(g, e) for g, e in zip(sub.generators, G.basis_vectors())]
    r = _kernel.reduce(st.pack(v, None), st.basis(rows), _prime(F), full=True)
    top, bottom = st.split(r)
    if top:
        return None
    return tuple(-c for c in st.second_part(bottom).components)
