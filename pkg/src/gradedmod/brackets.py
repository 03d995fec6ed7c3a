"""Presentations of the module generated by the brackets {f_i, f_j} of an algebra's generators.

For a graded algebra A = K[X_1..X_m]/(R_1..R_s), the bracket module is built
over the free polynomial ring on symbols e_ij (i < j) standing for [f_i, f_j].
The skew relation is absorbed into the basis: [f_j, f_i] = -e_ij and
[f_i, f_i] = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .module import (
    FreeModule,
    ModuleElement,
    Presentation,
    Submodule,
    is_member,
    mult_injective,
)
from .ring import GradedRing, NotIsobaric, Polynomial, bracket_concrete, euler_check


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraPresentation:
    """Generators X_1..X_m with isobaric relations.

    ``dependent`` maps a dependent variable index k to the index of the
    relation R_k that involves only the independent variables and X_k.
    """

    ring: GradedRing
    relations: tuple[Polynomial, ...] = ()
    dependent: dict[int, int] = field(default_factory=dict)
    relation_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if not self.relation_names:
            names = tuple(f"R{i + 1}" for i in range(len(self.relations)))
            object.__setattr__(self, "relation_names", names)
        for r in self.relations:
            if r.ring != self.ring:
                raise ValueError("relation over a different ring")
            if r.is_zero() or not r.is_isobaric():
                raise NotIsobaric("relation not isobaric")
            if not euler_check(r):
                raise NotIsobaric("relation fails the Euler identity")
        indep = self.independent
        for k, ri in self.dependent.items():
            r = self.relations[ri]
            used = r.variables()
            if k not in used:
                raise ValueError(f"relation {self.relation_names[ri]} does not involve X_{k + 1}")
            if not used <= set(indep) | {k}:
                raise ValueError(f"relation {self.relation_names[ri]} involves other dependent variables")

    @property
    def m(self) -> int:
        return self.ring.nvars

    @property
    def independent(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.m) if i not in self.dependent)


@dataclass(frozen=True)
class BracketModulePresentation:
    presentation: Presentation
    index_map: dict[tuple[int, int], int]
    shift_constant: int
    labels: tuple[str, ...] = ()

    @property
    def free(self) -> FreeModule:
        return self.presentation.free

    @property
    def relations(self) -> Submodule:
        return self.presentation.relations

    def slot(self, i: int, j: int) -> int:
        return self.index_map[(i, j)]

    def bracket_symbol(self, i: int, j: int) -> ModuleElement:
        """[f_i, f_j] written on the e-basis, skew encoding applied."""
        F = self.free
        if i == j:
            return F.zero()
        if i < j:
            return F.basis(self.index_map[(i, j)])
        return -F.basis(self.index_map[(j, i)])

    def slot_names(self) -> list[str]:
        names = self.free.ring.variable_names
        out = [""] * self.free.rank
        for (i, j), s in self.index_map.items():
            out[s] = f"[{names[i]},{names[j]}]"
        return out


def slot_pairs(m: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(m), 2))


def build_nprime(alg: AlgebraPresentation, shift_constant: int = -1) -> BracketModulePresentation:
    """Free module on e_ij modulo the triple relations, the relation-gradient relations, and R*e_ij."""
    ring = alg.ring
    m = alg.m
    d = ring.weights
    if m < 2:
        raise ValueError("need at least two generators")
    pairs = slot_pairs(m)
    index_map = {p: s for s, p in enumerate(pairs)}
    shifts = tuple(d[i] + d[j] + shift_constant for i, j in pairs)
    F = FreeModule(ring, len(pairs), shifts)
    X = ring.gens()

    def sym(i, j):
        if i == j:
            return F.zero()
        return F.basis(index_map[(i, j)]) if i < j else -F.basis(index_map[(j, i)])

    rels: list[ModuleElement] = []
    labels: list[str] = []
    names = ring.variable_names
    for i, j, k in itertools.combinations(range(m), 3):
        r = sym(i, j) * (X[k] * d[k]) - sym(i, k) * (X[j] * d[j]) + sym(j, k) * (X[i] * d[i])
        rels.append(r)
        labels.append(f"triple({names[i]},{names[j]},{names[k]})")
    for rname, R in zip(alg.relation_names, alg.relations):
        grad = R.gradient()
        for mu in range(m):
            r = F.zero()
            for nu in range(m):
                if grad[nu] and nu != mu:
                    r = r + sym(nu, mu) * grad[nu]
            if r:
                rels.append(r)
                labels.append(f"gradient({rname},{names[mu]})")
    for rname, R in zip(alg.relation_names, alg.relations):
        for s, (i, j) in enumerate(pairs):
            rels.append(F.basis(s) * R)
            labels.append(f"quotient({rname},[{names[i]},{names[j]}])")
    kept = [(lab, r) for lab, r in zip(labels, rels) if r]
    for _, r in kept:
        if not r.is_homogeneous():
            raise ValueError("inconsistent shifts: relation not homogeneous")
    labels = [lab for lab, _ in kept]
    pres = Presentation(F, Submodule(F, tuple(r for _, r in kept)))
    return BracketModulePresentation(pres, index_map, shift_constant, tuple(labels))


def differential_module(alg: AlgebraPresentation) -> FreeModule:
    """Free module on dX_1..dX_m, dX_v in degree d_v."""
    return FreeModule(alg.ring, alg.m, alg.ring.weights)


def kaehler_realize(b: BracketModulePresentation, v: ModuleElement) -> tuple[Polynomial, ...]:
    """Image of v under e_ij -> {X_i, X_j}, as a vector over dX_1..dX_m."""
    if v.ambient != b.free:
        raise ValueError("element not in the bracket module's free module")
    ring = b.free.ring
    X = ring.gens()
    out = [ring.zero()] * ring.nvars
    for (i, j), s in b.index_map.items():
        c = v[s]
        if c:
            br = bracket_concrete(X[i], X[j])
            out = [a + c * x for a, x in zip(out, br)]
    return tuple(out)


def kaehler_relations(alg: AlgebraPresentation) -> Submodule:
    """Gradients of the relations and R*dX_v: the relations of the differential module of A."""
    D = differential_module(alg)
    gens = []
    for R in alg.relations:
        gens.append(D.element(R.gradient()))
        gens.extend(e * R for e in D.basis_vectors())
    return Submodule(D, tuple(gens))


def realizes_to_zero(alg: AlgebraPresentation, b: BracketModulePresentation, v: ModuleElement,
                     omega: Submodule | None = None) -> bool:
    omega = omega if omega is not None else kaehler_relations(alg)
    w = omega.ambient.element(kaehler_realize(b, v))
    return is_member(w, omega)


@dataclass
class ProjectionReport:
    coefficients: dict[int, Polynomial]
    pi: Polynomial
    per_index: dict[int, bool]
    notes: list[str]

    @property
    def passed(self) -> bool:
        return all(self.per_index.values())


def projection_system(alg: AlgebraPresentation, b: BracketModulePresentation, relation: ModuleElement,
                      omega: Submodule | None = None) -> ProjectionReport:
    """Project a bracket syzygy onto {f_1, f_j} and check the resulting linear system.

    The identities live in A, so they are checked modulo the relation ideal.
    """
    if not realizes_to_zero(alg, b, relation, omega):
        raise PreconditionError("input is not a syzygy of the brackets")
    ring = alg.ring
    X = ring.gens()
    d = ring.weights
    m = alg.m

    def coeff(i, j):
        return relation[b.index_map[(i, j)]]

    P = {}
    for j in range(m):
        acc = ring.zero()
        for i in range(m):
            if i < j:
                acc = acc + X[i] * coeff(i, j) * d[i]
            elif i > j:
                acc = acc - X[i] * coeff(j, i) * d[i]
        P[j] = acc
    partials = {}
    for k, ri in sorted(alg.dependent.items()):
        dk = alg.relations[ri].diff(k)
        if dk.is_zero():
            raise PreconditionError(f"partial of relation by X_{k + 1} vanishes")
        partials[k] = dk
    pi = ring.one()
    for dk in partials.values():
        pi = pi * dk
    ideal_F = FreeModule(ring, 1)
    ideal = Submodule(ideal_F, tuple(ideal_F.element([R]) for R in alg.relations))
    per_index = {}
    for j in alg.independent:
        rhs = ring.zero()
        for k, ri in sorted(alg.dependent.items()):
            others = ring.one()
            for k2, dk2 in partials.items():
                if k2 != k:
                    others = others * dk2
            rhs = rhs + alg.relations[ri].diff(j) * P[k] * others
        diff = P[j] * pi - rhs
        per_index[j] = diff.is_zero() or is_member(ideal_F.element([diff]), ideal)
    notes = ["the divisor in the cofactor is read as the partial of R_k by X_k"]
    return ProjectionReport(P, pi, per_index, notes)


@dataclass
class CertificateReport:
    tests: list[tuple[str, bool]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.tests)


def injectivity_certificate(b: BracketModulePresentation, alg: AlgebraPresentation,
                            all_variables: bool = False) -> CertificateReport:
    """Injectivity of multiplication by X_1 (or every X_i) and by each dR_k/dX_k on the presentation."""
    ring = alg.ring
    names = ring.variable_names
    tests: list[tuple[str, bool]] = []
    indices = range(alg.m) if all_variables else [0]
    for i in indices:
        tests.append((f"mult_injective({names[i]})", mult_injective(b.presentation, ring.var(i))))
    for k, ri in sorted(alg.dependent.items()):
        dk = alg.relations[ri].diff(k)
        tests.append(
            (f"mult_injective(d{alg.relation_names[ri]}/d{names[k]})", mult_injective(b.presentation, dk))
        )
    return CertificateReport(tests)
