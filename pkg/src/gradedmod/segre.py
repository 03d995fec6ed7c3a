"""The Segre cubic instance: bracket module N of the weight-3 generators, its
saturation M, and every computer check about them.

M is realized through the scaling x -> T1^2 x: V = {x in F : T_j^2 x in T1^2 F + U
for all j} satisfies V/U = T1^2 M, so dim M_d = dim (V/U)_{d+6}.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources

from .brackets import (
    AlgebraPresentation,
    BracketModulePresentation,
    build_nprime,
    kaehler_relations,
    injectivity_certificate,
    projection_system,
    realizes_to_zero,
)
from .dsl import PresentationFile
from .hilbert import (
    HilbertSeries,
    dims_oracle,
    expand,
    hilbert_of_presentation,
    numerator_over,
    series_difference,
)
from .module import (
    FreeModule,
    ModuleElement,
    Presentation,
    Submodule,
    colon,
    contains,
    equal,
    intersect,
    is_member,
    mult_injective,
    multiples,
    normal_form,
    quotient_divide,
)
from .report import Section, VerificationReport
from .ring import CoefficientField, GradedRing, Polynomial, bracket_concrete, euler_check, polynomial_ring

# expansions and closed forms as printed for the two modules
PRINTED_N = {5: 10, 8: 40, 11: 95, 14: 173, 17: 275, 20: 401}
PRINTED_M = {5: 11, 8: 41, 11: 95, 14: 173, 17: 275, 20: 401}
# numerators over (1 - t^3)^3, i.e. the printed ones over (t^3 - 1)^3 with the sign moved
PRINTED_NUMERATOR_LABELED_M = {5: 10, 8: 10, 11: 5, 14: -2, 17: 1}
PRINTED_NUMERATOR_LABELED_N = {5: 11, 8: 8, 11: 5}
PRINTED_SUPPORT = {5: 1, 8: 1}

CROSS_CHECK_PRIME = 32003
HILBERT_SHIFT = -6


def _w_components(ring: GradedRing) -> dict[tuple[int, int], Polynomial]:
    T1, T2, T3, T4, T5 = ring.gens()
    return {
        (0, 1): 2 * T1 * T3 + T3 ** 2 + 2 * T1 * T4 + 2 * T3 * T4 + T4 ** 2
        + 2 * T1 * T5 + 2 * T3 * T5 + 2 * T4 * T5 + T5 ** 2,
        (0, 2): -T2 * T3 - 2 * T2 * T4 - 2 * T2 * T5,
        (0, 3): -T2 * T4 - 2 * T2 * T5,
        (0, 4): -T2 * T5,
    }


def segre_polynomial(ring: GradedRing) -> Polynomial:
    T = ring.gens()
    s = ring.zero()
    cubes = ring.zero()
    for t in T:
        s = s + t
        cubes = cubes + t ** 3
    return cubes - s ** 3


@dataclass(frozen=True)
class SegreData:
    ring: GradedRing
    S: Polynomial
    partials: tuple[Polynomial, ...]
    algebra: AlgebraPresentation
    nprime: BracketModulePresentation
    w: ModuleElement

    @property
    def F(self) -> FreeModule:
        return self.nprime.free

    @property
    def U(self) -> Submodule:
        return self.nprime.relations

    def with_field(self, fld: CoefficientField) -> "SegreData":
        ring = self.ring.with_field(fld)
        S = self.S.change_field(fld)
        dep = dict(self.algebra.dependent)
        alg = AlgebraPresentation(ring, (S,), dep, self.algebra.relation_names)
        b = build_nprime(alg, self.nprime.shift_constant)
        w = ModuleElement(b.free, tuple(c.change_field(fld) for c in self.w.components))
        return SegreData(ring, S, S.gradient(), alg, b, w)

    def serialize(self) -> str:
        pf = PresentationFile(self.ring.field, self.ring, {self.algebra.relation_names[0]: self.S},
                              {k: self.algebra.relation_names[ri] for k, ri in self.algebra.dependent.items()},
                              {"nprime": self.nprime}, {"w": ("nprime", self.w)})
        pf.order = [("relation", self.algebra.relation_names[0])]
        pf.order += [("dependent", self.ring.variable_names[k]) for k in self.algebra.dependent]
        pf.order += [("bracket-module", "nprime"), ("element", "w")]
        return pf.serialize()


def segre_data(prime: int | None = None) -> SegreData:
    """The reference instance, built directly."""
    ring = polynomial_ring([f"T{i}" for i in range(1, 6)], [3] * 5, prime)
    S = segre_polynomial(ring)
    alg = AlgebraPresentation(ring, (S,), {4: 0}, ("S",))
    b = build_nprime(alg, -1)
    comps = [ring.zero()] * b.free.rank
    for pair, c in _w_components(ring).items():
        comps[b.slot(*pair)] = c
    return SegreData(ring, S, S.gradient(), alg, b, ModuleElement(b.free, tuple(comps)))


def bundled_input() -> str:
    return resources.files("gradedmod").joinpath("data/segre.gpa").read_text()


def segre_from_file(pf: PresentationFile, element: str = "w") -> SegreData:
    """Segre data from a parsed file: one relation, one bracket module, the element ``w``."""
    if pf.ring is None or len(pf.relations) != 1:
        raise ValueError("expected a ring with exactly one relation")
    if len(pf.bracket_modules) != 1:
        raise ValueError("expected exactly one bracket module")
    if element not in pf.elements:
        raise ValueError(f"missing element {element!r}")
    if pf.ring.nvars != 5:
        raise ValueError("expected five generators")
    (b,) = pf.bracket_modules.values()
    S = next(iter(pf.relations.values()))
    return SegreData(pf.ring, S, S.gradient(), pf.algebra(), b, pf.elements[element][1])


@dataclass(frozen=True)
class MRepresentation:
    V: Submodule
    scale: Polynomial
    hilbert_shift: int = HILBERT_SHIFT


def compute_M(data: SegreData) -> MRepresentation:
    """V = intersection over j of (T1^2 F + U) : T_j^2."""
    T = data.ring.gens()
    base = multiples(data.F, T[0] ** 2) + data.U
    V = None
    for t in T:
        C = colon(base, t ** 2)
        V = C if V is None else intersect(V, C)
    return MRepresentation(V, T[0] ** 2)


class SegreSuite:
    """Runs the verification sections; shared intermediate results are computed once."""

    SECTIONS = ("fixture", "identities", "injectivity", "partial_colons", "exceptional_element", "square_multipliers", "hilbert_series", "oracle")

    def __init__(self, data: SegreData, bound: int = 20, support_bound: int = 30,
                 cross_check_prime: int | None = CROSS_CHECK_PRIME, seed: int = 0):
        if bound < 0 or support_bound < 0:
            raise ValueError("bounds must be non-negative")
        self.data = data
        self.bound = bound
        self.support_bound = max(support_bound, bound)
        self.cross_check_prime = cross_check_prime
        self.seed = seed
        self._lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._memo: dict[str, object] = {}

    def _once(self, key: str, fn):
        with self._lock:
            lk = self._locks.setdefault(key, threading.Lock())
        with lk:
            if key not in self._memo:
                self._memo[key] = fn()
            return self._memo[key]

    # -- shared pieces -----------------------------------------------------------
    def M(self) -> MRepresentation:
        return self._once("M", lambda: compute_M(self.data))

    def base(self) -> Submodule:
        return self._once("base", lambda: multiples(self.data.F, self.data.ring.var(0) ** 2) + self.data.U)

    def series_N(self) -> HilbertSeries:
        return self._once("series_N", lambda: hilbert_of_presentation(self.data.nprime.presentation))

    def series_M(self) -> HilbertSeries:
        def build():
            fv = hilbert_of_presentation(Presentation(self.data.F, self.M().V))
            return series_difference(self.series_N(), fv).shifted(HILBERT_SHIFT)

        return self._once("series_M", build)

    def lift(self) -> ModuleElement | None:
        """T1^2 times the exceptional element, i.e. a v with T2 v = T1 w modulo U."""
        d = self.data
        return self._once("lift", lambda: quotient_divide(d.w * d.ring.var(0), d.ring.var(1), d.U))

    # -- sections ----------------------------------------------------------------
    def fixture(self) -> Section:
        sec = Section("fixture")
        d = self.data
        ref = segre_data(d.ring.field.prime)
        sec.check("S_isobaric_weight_9", d.S.is_isobaric() and d.S.weighted_degree() == 9)
        sec.check("S_euler_identity", euler_check(d.S))
        sec.check("S_matches_reference", d.S == ref.S)
        same_w = d.F.rank == ref.F.rank and all(a == b for a, b in zip(d.w.components, ref.w.components))
        sec.check("w_matches_reference", same_w)
        sec.check("w_degree_11", d.w.is_homogeneous() and not d.w.is_zero() and d.w.degree() == 11)
        labels = d.nprime.labels
        counts = {k: sum(1 for lab in labels if lab.startswith(k)) for k in ("triple", "gradient", "quotient")}
        sec.check("relation_counts_10_5_10", counts == {"triple": 10, "gradient": 5, "quotient": 10},
                  f"{counts['triple']} triple, {counts['gradient']} gradient, {counts['quotient']} quotient")
        sec.check("slot_shifts_all_5", d.F.shifts == (5,) * 10)
        sec.info("assumption", "S irreducible (declared, not checked)")
        return sec

    def identities(self) -> Section:
        sec = Section("identities")
        d = self.data
        ring = d.ring
        omega = kaehler_relations(d.algebra)
        killed = [realizes_to_zero(d.algebra, d.nprime, r, omega) for r in d.U.generators]
        sec.check("relations_realize_to_zero", all(killed), f"{sum(killed)}/{len(killed)} generators")
        grads = [(lab, r) for lab, r in zip(d.nprime.labels, d.U.generators) if lab.startswith("gradient")]
        ok_proj = [projection_system(d.algebra, d.nprime, r, omega).passed for _, r in grads]
        sec.check("projection_system_gradient_relations", all(ok_proj), f"{sum(ok_proj)}/{len(ok_proj)} relations")
        rng = random.Random(self.seed)
        polys = list(ring.gens()) + [_random_isobaric(ring, rng, rng.choice([3, 6, 9])) for _ in range(6)]
        skew = cocycle = True
        for f, g in itertools.combinations(polys, 2):
            skew &= all((a + b).is_zero() for a, b in zip(bracket_concrete(f, g), bracket_concrete(g, f)))
        for f, g, h in itertools.combinations(polys[:7], 3):
            a, b, c = f.weighted_degree(), g.weighted_degree(), h.weighted_degree()
            lhs = [h * x * c for x in bracket_concrete(f, g)]
            r1 = [g * x * b for x in bracket_concrete(f, h)]
            r2 = [f * x * a for x in bracket_concrete(h, g)]
            cocycle &= all((p - q - s).is_zero() for p, q, s in zip(lhs, r1, r2))
        sec.check("bracket_skew_symmetry", skew)
        sec.check("bracket_cocycle_rule", cocycle)
        sec.check("euler_identity_samples", all(euler_check(p) for p in polys))
        return sec

    def injectivity(self) -> Section:
        sec = Section("injectivity")
        d = self.data
        names = d.ring.variable_names
        outcomes = {}
        for f, label in self._injectivity_divisors(d):
            outcomes[label] = not f.is_zero() and mult_injective(d.nprime.presentation, f)
            sec.check(f"injective_{label}", outcomes[label], "" if f else "zero divisor polynomial")
        try:
            cert = injectivity_certificate(d.nprime, d.algebra)
            sec.check("certificate_first_variable_and_dependent_partial", cert.passed,
                      ", ".join(f"{n}={'pass' if ok else 'fail'}" for n, ok in cert.tests))
        except ValueError as exc:
            sec.check("certificate_first_variable_and_dependent_partial", False, str(exc))
        # control: synthetic torsion T1*e12 added to a presentation missing one quotient relation
        F, U = d.F, d.U
        gens = [g for g, lab in zip(U.generators, d.nprime.labels) if lab != f"quotient(S,[{names[0]},{names[1]}])"]
        gens.append(F.basis(d.nprime.slot(0, 1)) * d.ring.var(0))
        bad = Presentation(F, Submodule(F, tuple(gens)))
        detected = not mult_injective(bad, d.ring.var(0))
        sec.check("control_torsion_detected", detected, "relation T1*[T1,T2] added; T1 must fail")
        if self.cross_check_prime is not None and d.ring.field.prime is None:
            pd = d.with_field(CoefficientField(self.cross_check_prime))
            agree = all(
                (not f.is_zero() and mult_injective(pd.nprime.presentation, f)) == outcomes[label]
                for f, label in self._injectivity_divisors(pd)
            )
            sec.check("prime_mode_agrees", agree, f"probabilistic cross-check over Fp {self.cross_check_prime}")
        return sec

    @staticmethod
    def _injectivity_divisors(d: SegreData):
        names = d.ring.variable_names
        out = [(t, n) for t, n in zip(d.ring.gens(), names)]
        out += [(p, f"dS/d{n}") for p, n in zip(d.partials, names)]
        return out

    def partial_colons(self) -> Section:
        sec = Section("partial_colons")
        d = self.data
        for i, j in itertools.combinations(range(5), 2):
            ok = partial_colon_pair(d, i, j)
            sec.check(f"pair_{i + 1}_{j + 1}", ok)
        sec.info("index_6", "undefined: only five generators; pairs with 6 not checked")
        T1 = d.ring.var(0)
        base = multiples(d.F, T1) + d.U
        holds = contains(base, colon(base, T1))
        sec.check("control_T1_T1_fails", not holds, "colon(T1 F + U, T1) is all of F")
        return sec

    def exceptional_element(self) -> Section:
        sec = Section("exceptional_element")
        d = self.data
        T1, T2 = d.ring.var(0), d.ring.var(1)
        w = d.w
        sec.check("w_in_T1N", is_member(w, multiples(d.F, T1) + d.U))
        sec.check("w_in_T2N", is_member(w, multiples(d.F, T2) + d.U))
        sec.check("w_not_in_T1T2N", not is_member(w, multiples(d.F, T1 * T2) + d.U))
        v = self.lift()
        if not sec.check("lift_exists", v is not None, "v with T2*v = T1*w modulo U"):
            sec.check("lift_in_M", False, "no lift")
            return sec
        sec.check("lift_verified", is_member(v * T2 - w * T1, d.U))
        sec.check("lift_in_M", is_member(v, self.M().V))
        sec.witness("lift", normal_form(v, d.U.gb).serialize())
        return sec

    def square_multipliers(self) -> Section:
        sec = Section("square_multipliers")
        d = self.data
        V = self.M().V
        base = self.base()
        T = d.ring.gens()
        for i in range(5):
            for j in range(5):
                f = T[i] ** 2 * d.partials[j]
                ok = not f.is_zero() and all(is_member(g * f, base) for g in V.generators)
                sec.check(f"pair_{i + 1}_{j + 1}", ok)
        v = self.lift()
        if v is None:
            sec.info("exponent_one_control", "skipped: no lift of the exceptional element")
        else:
            sec.info("exponent_one_control", is_member(v * (T[0] * T[1]), base))
        return sec

    def hilbert_series(self) -> Section:
        sec = Section("hilbert_series")
        d = self.data
        degrees = sorted(PRINTED_N)
        eN = expand(self.series_N(), self.bound)
        eM = expand(self.series_M(), self.bound)
        sec.add_series("N", [(k, eN.at(k)) for k in degrees if k <= self.bound])
        sec.add_series("M", [(k, eM.at(k)) for k in degrees if k <= self.bound])
        shown = [k for k in degrees if k <= self.bound]
        sec.check("N_expansion_matches_printed", all(eN.at(k) == PRINTED_N[k] for k in shown))
        sec.check("M_expansion_matches_printed", all(eM.at(k) == PRINTED_M[k] for k in shown))
        # closed forms
        qN = numerator_over(self.series_N(), 3, 3)
        qM = numerator_over(self.series_M(), 3, 3)
        sec.check("N_numerator_over_cube_is_polynomial", qN is not None)
        sec.check("M_numerator_over_cube_is_polynomial", qM is not None)
        sec.check("N_numerator_equals_printed_M_form", qN == PRINTED_NUMERATOR_LABELED_M)
        sec.check("M_numerator_equals_printed_N_form", qM == PRINTED_NUMERATOR_LABELED_N)
        if qN == PRINTED_NUMERATOR_LABELED_N and qM == PRINTED_NUMERATOR_LABELED_M:
            pairing = "as printed"
        elif qN == PRINTED_NUMERATOR_LABELED_M and qM == PRINTED_NUMERATOR_LABELED_N:
            pairing = "swapped"
        else:
            pairing = "neither"
        sec.info("numerator_pairing", pairing)
        sec.witness("series_N", f"{self.series_N().normalized()}\n{self.series_N().normalized().over_t_minus_one()}")
        sec.witness("series_M", f"{self.series_M().normalized()}\n{self.series_M().normalized().over_t_minus_one()}")
        # support of M/N
        top = self.support_bound
        sN = expand(self.series_N(), top)
        sM = expand(self.series_M(), top)
        diff = {k: sM.at(k) - sN.at(k) for k in range(0, top + 1) if sM.at(k) - sN.at(k)}
        sec.add_series("M_minus_N", sorted(diff.items()))
        sec.check(f"differ_only_in_degrees_5_8_through_{top}", diff == PRINTED_SUPPORT)
        sec.check("N_contained_in_M", all(sM.at(k) >= sN.at(k) for k in range(top + 1))
                  and contains(self.M().V, self.base()))
        # generation
        v = self.lift()
        without = self.base()
        sec.info("V_equals_T1sq_N", equal(without, self.M().V))
        if v is None:
            sec.check("generated_by_brackets_and_special_element", False, "no lift of the exceptional element")
        else:
            gen = without + Submodule(d.F, (v,))
            sec.check("generated_by_brackets_and_special_element", equal(gen, self.M().V))
        sec.check("special_generator_needed", eN.at(5) == 10 and eM.at(5) == 11,
                  f"dim N_5 = {eN.at(5)}, dim M_5 = {eM.at(5)}")
        return sec

    def oracle(self) -> Section:
        sec = Section("oracle")
        d = self.data
        b = self.bound
        F0 = FreeModule(d.F.ring, d.F.rank, d.F.shifts)
        free = Presentation(F0, Submodule(F0, ()))
        A1 = FreeModule(d.ring, 1)
        A = Presentation(A1, Submodule(A1, (A1.element([d.S]),)))
        for name, p in (("free", free), ("A", A), ("N", d.nprime.presentation)):
            gb = expand(hilbert_of_presentation(p), b)
            orc = dims_oracle(p, b)
            sec.check(f"{name}_agrees", gb == orc)
            sec.add_series(f"{name}_oracle", orc.coefficients)
        top = b - HILBERT_SHIFT
        nU = dims_oracle(d.nprime.presentation, top)
        nV = dims_oracle(Presentation(d.F, self.M().V), top)
        orc_M = {k + HILBERT_SHIFT: nU.at(k) - nV.at(k) for k in range(top + 1) if nU.at(k) - nV.at(k)}
        eM = expand(self.series_M(), b)
        sec.check("M_agrees", orc_M == eM.as_dict())
        sec.add_series("M_oracle", sorted(orc_M.items()))
        return sec

    def run(self, threads: int = 1, sections=None) -> VerificationReport:
        names = list(sections or self.SECTIONS)
        for n in names:
            if n not in self.SECTIONS:
                raise ValueError(f"unknown section {n!r}")
        digest = hashlib.sha256(self.data.serialize().encode()).hexdigest()[:16]
        fld = self.data.ring.field
        header = [
            ("suite", "segre"),
            ("input_digest", digest),
            ("field", fld.label()),
            ("mode", "exact" if fld.prime is None else "probabilistic cross-check"),
            ("bound", str(self.bound)),
            ("support_bound", str(self.support_bound)),
        ]
        if threads <= 1:
            secs = [getattr(self, n)() for n in names]
        else:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                secs = list(ex.map(lambda n: getattr(self, n)(), names))
        return VerificationReport(header, secs)


def partial_colon_pair(d: SegreData, i: int, j: int) -> bool:
    """Whether every generator of (dS_i F + U) : dS_j lies in dS_i F + U."""
    if i == j or not (0 <= i < 5 and 0 <= j < 5):
        raise ValueError("indices must be distinct and in 1..5")
    if d.partials[i].is_zero() or d.partials[j].is_zero():
        return False
    base = multiples(d.F, d.partials[i]) + d.U
    return contains(base, colon(base, d.partials[j]))


def _random_isobaric(ring: GradedRing, rng: random.Random, degree: int) -> Polynomial:
    monos = ring.monomials_of_degree(degree)
    k = rng.randint(1, min(4, len(monos)))
    terms = {m: rng.randint(-5, 5) or 1 for m in rng.sample(monos, k)}
    return ring.from_terms(terms)

