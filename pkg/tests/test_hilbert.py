import random
from math import comb

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from gradedmod.hilbert import (
    HilbertSeries,
    ResourceLimitExceeded,
    dims_oracle,
    expand,
    hilbert_of_presentation,
    monomial_quotient_numerator,
    numerator_over,
    series_difference,
    submodule_dims,
)
from gradedmod.module import FreeModule, ModuleElement, Presentation, Submodule
from gradedmod.ring import polynomial_ring

from conftest import random_isobaric

R5 = polynomial_ring([f"T{i}" for i in range(1, 6)], [3] * 5)
T1, T2, T3, T4, T5 = R5.gens()


def free_rank_one(shift=0):
    F = FreeModule(R5, 1, (shift,))
    return Presentation(F, Submodule(F, ()))


def algebra_presentation(segre):
    F = FreeModule(segre.ring, 1)
    return Presentation(F, Submodule(F, (F.basis(0) * segre.S,)))


def test_free_module_series():
    s = hilbert_of_presentation(free_rank_one())
    assert s.num == {0: 1}
    assert s.denominator_factors == ((3, 5),)
    e = expand(s, 12)
    assert e.as_dict() == {0: 1, 3: 5, 6: 15, 9: 35, 12: 70}


def test_algebra_series(segre):
    s = hilbert_of_presentation(algebra_presentation(segre))
    assert s.num == {0: 1, 9: -1}
    assert s.denominator_factors == ((3, 5),)
    # 35 cubic monomials in five variables, minus S
    assert expand(s, 9).at(9) == comb(7, 4) - 1 == 34


def test_nprime_series(segre):
    s = hilbert_of_presentation(segre.nprime.presentation)
    e = expand(s, 20)
    assert e.as_dict() == {5: 10, 8: 40, 11: 100, 14: 199, 17: 346, 20: 550}
    assert s.normalized().num == {5: 10, 14: -1}
    assert s.normalized().denominator_factors == ((3, 4),)


def test_expand_examples():
    s = HilbertSeries.build({5: 11, 8: 8, 11: 5}, [(3, 3)])
    assert expand(s, 20).values() == [11, 41, 95, 173, 275, 401]
    s = HilbertSeries.build({5: 10, 8: 10, 11: 5, 14: -2, 17: 1}, [(3, 3)])
    assert expand(s, 20).values() == [10, 40, 95, 173, 275, 401]
    s = HilbertSeries.build({0: 1}, [(3, 3)])
    assert expand(s, 9).as_dict() == {0: 1, 3: 3, 6: 6, 9: 10}


def test_numerator_over_examples(segre):
    a = hilbert_of_presentation(algebra_presentation(segre))
    assert numerator_over(a, 3, 5) == {0: 1, 9: -1}
    # (1 - t^9) = (1 - t^3)(1 + t^3 + t^6), so A is a polynomial over four factors too
    assert numerator_over(a, 3, 4) == {0: 1, 3: 1, 6: 1}
    assert numerator_over(a, 3, 3) is None
    n = hilbert_of_presentation(segre.nprime.presentation)
    assert numerator_over(n, 3, 4) == {5: 10, 14: -1}
    assert numerator_over(n, 3, 3) is None


def test_over_t_minus_one_moves_sign():
    s = HilbertSeries.build({5: 11, 8: 8, 11: 5}, [(3, 3)])
    assert s.over_t_minus_one() == "(-11*t^5 - 8*t^8 - 5*t^11) / ((t^3 - 1)^3)"
    assert str(s) == "(11*t^5 + 8*t^8 + 5*t^11) / ((1 - t^3)^3)"


def test_series_difference():
    a = HilbertSeries.build({0: 1}, [(3, 2)])
    b = HilbertSeries.build({0: 1}, [(3, 1)])
    d = series_difference(a, b)
    assert expand(d, 12).as_dict() == {3: 1, 6: 2, 9: 3, 12: 4}


def test_monomial_numerator_matches_counting():
    # k[x,y]/(x^2, xy): basis 1, x, y, y^2, ...
    num = monomial_quotient_numerator([(2, 0), (1, 1)], (1, 1))
    s = HilbertSeries.build(num, [(1, 2)])
    assert expand(s, 5).as_dict() == {0: 1, 1: 2, 2: 1, 3: 1, 4: 1, 5: 1}


def test_oracle_examples(segre):
    assert dims_oracle(free_rank_one(5), 5).as_dict() == {5: 1}
    assert dims_oracle(algebra_presentation(segre), 9).at(9) == 34
    assert dims_oracle(segre.nprime.presentation, 14).as_dict() == {5: 10, 8: 40, 11: 100, 14: 199}


def test_oracle_prime_mode(segre):
    exact = dims_oracle(segre.nprime.presentation, 11)
    modp = dims_oracle(segre.nprime.presentation, 11, prime=32003)
    assert exact == modp


def test_oracle_resource_limit(segre):
    with pytest.raises(ResourceLimitExceeded):
        dims_oracle(segre.nprime.presentation, 14, max_entries=100)


def test_additivity_on_segre(segre):
    p = segre.nprime.presentation
    quotient = dims_oracle(p, 14).as_dict()
    sub = submodule_dims(p.relations, 14)
    free = expand(hilbert_of_presentation(Presentation(p.free, Submodule(p.free, ()))), 14).as_dict()
    for d in range(0, 15):
        assert free.get(d, 0) == sub.get(d, 0) + quotient.get(d, 0)


# -- random presentations -------------------------------------------------------

R3 = polynomial_ring(["x", "y", "z"], [1, 2, 3])


@st.composite
def presentations(draw):
    rank = draw(st.integers(1, 2))
    shifts = tuple(draw(st.lists(st.integers(0, 3), min_size=rank, max_size=rank)))
    F = FreeModule(R3, rank, shifts)
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    gens = []
    for _ in range(draw(st.integers(0, 4))):
        d = rng.randint(max(shifts) + 1, max(shifts) + 4)
        v = ModuleElement(F, tuple(random_isobaric(R3, rng, d - s, 3) for s in shifts))
        if v:
            gens.append(v)
    return Presentation(F, Submodule(F, tuple(gens)))


PROP = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
BOUND = 12


@PROP
@given(presentations())
def test_oracle_agreement(p):
    s = hilbert_of_presentation(p)
    assert expand(s, BOUND) == dims_oracle(p, BOUND)


@PROP
@given(presentations())
def test_expansion_nonnegative(p):
    assert all(c > 0 for c in expand(hilbert_of_presentation(p), BOUND).values())


@PROP
@given(presentations())
def test_normalization_round_trip(p):
    s = hilbert_of_presentation(p)
    e = expand(s, BOUND)
    assert expand(s.normalized(), BOUND) == e
    # (1 - t^6)^3 is divisible by (1 - t)(1 - t^2)(1 - t^3), so this always succeeds
    q = numerator_over(s, 6, 3)
    assert q is not None
    assert expand(HilbertSeries.build(q, [(6, 3)]), BOUND) == e


@PROP
@given(presentations())
def test_additivity(p):
    free = Presentation(p.free, Submodule(p.free, ()))
    fd = dims_oracle(free, BOUND).as_dict()
    qd = expand(hilbert_of_presentation(p), BOUND).as_dict()
    ud = submodule_dims(p.relations, BOUND) if p.relations.generators else {}
    for d in range(min(p.free.shifts), BOUND + 1):
        assert fd.get(d, 0) == ud.get(d, 0) + qd.get(d, 0)
