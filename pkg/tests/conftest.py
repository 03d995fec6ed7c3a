import random

import pytest
from hypothesis import strategies as st

from gradedmod.dsl import parse_input
from gradedmod.ring import polynomial_ring
from gradedmod.segre import SegreSuite, bundled_input, segre_data, segre_from_file


@pytest.fixture(scope="session")
def segre():
    return segre_data()


@pytest.fixture(scope="session")
def segre_file_data():
    return segre_from_file(parse_input(bundled_input()))


@pytest.fixture(scope="session")
def suite(segre_file_data):
    """One suite per session so the expensive pieces (V, series) are computed once."""
    return SegreSuite(segre_file_data)


@pytest.fixture(scope="session")
def full_report(suite):
    return suite.run()


def random_isobaric(ring, rng: random.Random, degree: int, max_terms: int = 4):
    monos = ring.monomials_of_degree(degree)
    if not monos:
        return ring.zero()
    picks = rng.sample(monos, rng.randint(1, min(max_terms, len(monos))))
    return ring.from_terms({m: rng.choice([-3, -2, -1, 1, 2, 5]) for m in picks})


@st.composite
def weighted_rings(draw, max_vars=4, max_weight=4):
    n = draw(st.integers(2, max_vars))
    weights = draw(st.lists(st.integers(1, max_weight), min_size=n, max_size=n))
    return polynomial_ring([f"X{i + 1}" for i in range(n)], weights)


@st.composite
def isobaric_polys(draw, ring, min_degree=1, max_degree=9):
    degrees = [d for d in range(min_degree, max_degree + 1) if ring.monomials_of_degree(d)]
    d = draw(st.sampled_from(degrees))
    monos = ring.monomials_of_degree(d)
    picked = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=4, unique=True))
    coeffs = draw(st.lists(st.integers(-6, 6).filter(bool), min_size=len(picked), max_size=len(picked)))
    return ring.from_terms(dict(zip(picked, coeffs)))
