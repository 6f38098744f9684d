import pytest

from dedarr import charquasi as cq
from dedarr import ring as rg


@pytest.fixture(scope="session")
def gaussian_arrangement():
    """Four lines over the Gaussian integers; period <2>."""
    ZI = rg.quadratic(-1)
    return cq.Arrangement(
        ZI,
        [[(1, 0), (1, 0)], [(1, 0), (-1, 0)],
         [(1, 0), (0, 1)], [(1, 0), (0, -1)]],
        name="gauss4")


@pytest.fixture(scope="session")
def nonprincipal_arrangement():
    """Two proportional columns over Z[sqrt(-5)]; period <1+sqrt(-5)>."""
    Z5 = rg.quadratic(-5)
    return cq.Arrangement(
        Z5, [[(2, 0), (1, -1)], [(1, 1), (3, 0)]], name="nonprincipal")


def rand_small_arrangement(rng, ring, ell_max=3, n_max=4, bound=3):
    while True:
        ell = rng.randint(1, ell_max)
        n = rng.randint(1, n_max)
        cols = []
        ok = True
        for _ in range(n):
            col = tuple(
                tuple(rng.randint(-bound, bound) for _ in range(ring.degree))
                for _ in range(ell))
            if all(not any(x) for x in col):
                ok = False
                break
            cols.append(col)
        if ok:
            return cq.Arrangement(ring, cols)
