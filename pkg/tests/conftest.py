import itertools
from fractions import Fraction

import pytest

from sortbounds import chain2_plus_point, standard_family, tech_constant


@pytest.fixture
def wedge():
    """2-chain plus an isolated element: 3 extensions, entropy (2/3) ln 2."""
    return chain2_plus_point()


@pytest.fixture(scope="session")
def tech500():
    return tech_constant(500)


@pytest.fixture(scope="session")
def family8():
    return standard_family(max_n=8, seed=12345)


def brute_force_extensions(n, pairs01):
    """Oracle: filter all n! element orders against the 0-based pairs."""
    out = []
    for perm in itertools.permutations(range(n)):
        rank = [0] * n
        for pos, e in enumerate(perm):
            rank[e] = pos + 1
        if all(rank[a] < rank[b] for a, b in pairs01):
            out.append(perm)
    return out


def brute_force_qlb(n, pairs01):
    """Oracle: average the harmonic gap sums over brute-forced extensions."""
    def harm(q):
        return sum((Fraction(1, i) for i in range(1, q + 1)), Fraction(0))

    exts = brute_force_extensions(n, pairs01)
    preds = {i: [a for a, b in pairs01 if b == i] for i in range(n)}
    total = Fraction(0)
    for perm in exts:
        rank = [0] * n
        for pos, e in enumerate(perm):
            rank[e] = pos + 1
        for i in range(n):
            ps = preds[i]
            d = rank[i] - max(rank[j] for j in ps) if ps else rank[i]
            total += harm(d - 1)
    return total / len(exts)
