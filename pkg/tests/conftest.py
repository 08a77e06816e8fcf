import random

import pytest

from sullivan.algebra import monomial_basis
from sullivan.library import get_model, library
from sullivan.model import RandomModelParams, length_profile, random_elliptic_model

# parameter shapes for the seeded random corpus; mixes sizes, lengths and
# leading odd-sphere factors (so the Wang sequence gets random coverage)
CORPUS_SHAPES = [
    RandomModelParams(n_even=1, n_odd=1, l=2),
    RandomModelParams(n_even=1, n_odd=2, l=2),
    RandomModelParams(n_even=2, n_odd=2, l=2),
    RandomModelParams(n_even=2, n_odd=3, l=2),
    RandomModelParams(n_even=3, n_odd=3, l=2),
    RandomModelParams(n_even=1, n_odd=1, l=3),
    RandomModelParams(n_even=1, n_odd=2, l=3),
    RandomModelParams(n_even=2, n_odd=2, l=3),
    RandomModelParams(n_even=1, n_odd=2, l=2, leading_odd_sphere=True),
    RandomModelParams(n_even=2, n_odd=2, l=2, leading_odd_sphere=True),
    RandomModelParams(n_even=1, n_odd=1, l=3, leading_odd_sphere=True),
    RandomModelParams(n_even=1, n_odd=1, l=4),
]


def build_random_corpus(count: int, base_seed: int = 1000):
    models = []
    for idx in range(count):
        params = CORPUS_SHAPES[idx % len(CORPUS_SHAPES)]
        models.append(random_elliptic_model(base_seed + idx, params))
    return models


@pytest.fixture(scope="session")
def random_corpus():
    """50 seeded random pure homogeneous elliptic models (criteria 2/3/4/6)."""
    return build_random_corpus(50)


@pytest.fixture(scope="session")
def library_models():
    return library()


@pytest.fixture(scope="session")
def homogeneous_library(library_models):
    return [m for m in library_models if length_profile(m).is_homogeneous]


def random_monomial(rng: random.Random, gens, max_degree: int = 12):
    """A random valid monomial (odd exponents <= 1)."""
    degree = rng.randint(0, max_degree)
    options = monomial_basis(gens, degree)
    attempts = 0
    while not options and attempts < 8:
        degree = rng.randint(0, max_degree)
        options = monomial_basis(gens, degree)
        attempts += 1
    if not options:
        return (0,) * len(gens)
    return options[rng.randrange(len(options))]


def random_polynomial(rng: random.Random, gens, n_terms: int = 3, homogeneous=False):
    """Random polynomial; homogeneous=True keeps all terms in one degree."""
    from fractions import Fraction

    coeff_pool = [1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-2, 3), Fraction(5, 4)]
    terms = {}
    if homogeneous:
        first = random_monomial(rng, gens)
        degree = sum(e * g.degree for e, g in zip(first, gens))
        options = monomial_basis(gens, degree)
        for _ in range(n_terms):
            m = options[rng.randrange(len(options))]
            terms[m] = Fraction(coeff_pool[rng.randrange(len(coeff_pool))])
    else:
        for _ in range(n_terms):
            m = random_monomial(rng, gens)
            terms[m] = Fraction(coeff_pool[rng.randrange(len(coeff_pool))])
    return {m: c for m, c in terms.items() if c}


def model_pool():
    """Validated models whose algebras host the property suites."""
    return [
        get_model("sphere:2"),
        get_model("cp:3"),
        get_model("heisenberg"),
        get_model("example-5gen"),
        get_model("nil5"),
        get_model("mixed:3"),
        get_model("cpl-sphere:3,1"),
    ]
