import random
from pathlib import Path

import pytest

from toricset.exactmath import factorize, gcd
from toricset.family import FamilyParams
from toricset.polyring import family_ring

GOLDEN = Path(__file__).parent / "golden"

REFERENCE_GENERATORS = [
    "y1^2 - x1^3*x3^2",
    "y2^3 - x2^5*x3^3",
    "y3^6 - x1^9*x2^10",
    "x3^2*y3 - y1*y2",
    "y1*y3 - x1^3*y2",
    "y2*y3^2 - x1^3*x2^5*x3",
    "y2^2*y3 - x2^5*x3*y1",
    "x3*y3^3 - x1^3*x2^5*y1",
]


@pytest.fixture
def ex1():
    return FamilyParams.example1()


@pytest.fixture
def ring3():
    return family_ring(3)


@pytest.fixture
def ref_gens(ring3):
    return [ring3.parse(s) for s in REFERENCE_GENERATORS]


def _is_valid(n, d, f, h):
    if any(gcd(a, b) != 1 for a, b in zip(d, f)) or any(gcd(a, b) != 1 for a, b in zip(d, h)):
        return False
    if any(gcd(d[i], d[j]) != 1 for i in range(n - 1) for j in range(i + 1, n - 1)):
        return False
    primes = {p for x in d for p, _ in factorize(x)}
    return len(primes) >= 2


def sample_valid_params(count, seed=0, ns=(3, 4), max_entry=7):
    """Rejection-sample valid family members with entries <= max_entry."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice(ns)
        m = n - 1
        d = [rng.randint(1, max_entry) for _ in range(m)]
        f = [rng.randint(1, max_entry) for _ in range(m)]
        g = [rng.randint(1, max_entry) for _ in range(m)]
        h = [rng.randint(1, max_entry) for _ in range(m)]
        if _is_valid(n, d, f, h):
            out.append(FamilyParams(n, d, f, g, h))
    return out
