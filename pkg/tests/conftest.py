import math

import numpy as np
import pytest

from moranspec import make_system


@pytest.fixture
def final_system():
    """Alternating (2,{0,1}) / (3,{0,1,2}); Lebesgue measure on [0,1]."""
    return make_system(cycle=[(2, (0, 1)), (3, (0, 1, 2))])


@pytest.fixture
def nonuniform_system():
    """Inadmissible system with a three-valued density on [0, 13/4]."""
    return make_system(
        preamble=[(2, (0, 1, 2)), (2, (0, 5, 6))], cycle=[(2, (0, 3))]
    )


@pytest.fixture
def alternating_system():
    """Admissible (9,{0,1,2}) / (4,{0,2}) alternation."""
    return make_system(cycle=[(9, (0, 1, 2)), (4, (0, 2))])


@pytest.fixture
def pure_t3_system():
    """Two-digit head (4,{0,2}) with a (4,{0,1}) cycle."""
    return make_system(preamble=[(4, (0, 2))], cycle=[(4, (0, 1))])


@pytest.fixture
def mixed_system():
    """One level of each class; consecutive-digit cycle."""
    return make_system(
        preamble=[(4, (0, 2)), (12, (0, 1, 2))], cycle=[(8, (0, 1, 2, 3))]
    )


@pytest.fixture
def dyadic_system():
    """Binary digits at every level."""
    return make_system(cycle=[(2, (0, 1))])


# -- random admissible level generators --------------------------------------


def random_t1_level(rng) -> tuple[int, tuple[int, ...]]:
    n = int(rng.integers(4, 13))
    m = int(rng.integers(2, 9))
    return n * m, tuple(range(n))


def random_t2_level(rng) -> tuple[int, tuple[int, ...]]:
    while True:
        b = int(rng.integers(2, 21))
        a = int(rng.integers(1, b))
        if math.gcd(a, b) == 1 and {a % 3, b % 3} == {1, 2}:
            break
    k_min = b // 2 + 1  # ensures b/(3k) < 2/3 strictly
    k = int(rng.integers(k_min, k_min + 12))
    return 3 * k, (0, a, b)


def random_t3_level(rng) -> tuple[int, tuple[int, ...]]:
    while True:
        p = int(rng.integers(2, 65))
        d = int(rng.integers(1, p))
        if (p // math.gcd(d, p)) % 2 == 0:
            return p, (0, d)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
