import random
from itertools import combinations

import pytest

from dedarr import charquasi as cq
from dedarr import modstruct as ms
from dedarr import oracle
from dedarr import ring as rg
from dedarr import rootsys
from dedarr.errors import BudgetExceeded

from conftest import rand_small_arrangement

Z = rg.rational_integers()
ZI = rg.quadratic(-1)
Z5 = rg.quadratic(-5)
ZT = rg.quadratic(5)

P5 = rg.Ideal.from_generators(Z5, [(2, 0), (1, -1)])
Q5 = rg.Ideal.from_generators(Z5, [(3, 0), (1, 1)])


def test_complement_examples(nonprincipal_arrangement):
    # at the norm-3 prime the count vanishes: t^2 - 3t at t = 3
    assert oracle.brute_count_complement(nonprincipal_arrangement, Q5) == 0
    # the one-point space lies on every hyperplane
    unit = rg.Ideal.unit(Z5)
    assert oracle.brute_count_complement(nonprincipal_arrangement, unit) == 0
    # H2 at the ramified prime of norm 5: (5-1)(5-4) = 4
    h2 = rootsys.builtin("H2").arrangement
    sqrt5 = rg.Ideal.principal(ZT, (-1, 2))
    assert sqrt5.norm == 5
    assert oracle.brute_count_complement(h2, sqrt5) == 4


def test_kernel_examples():
    col = ms.CoeffMatrix(Z5, [[(2, 0)], [(1, -1)]])
    assert oracle.brute_count_kernel(col, P5) == 4

    eye = ms.CoeffMatrix(ZI, [[(1, 0), (0, 0)], [(0, 0), (1, 0)]])
    for a in [rg.Ideal.principal(ZI, (2, 0)),
              rg.Ideal.principal(ZI, (3, 0)),
              rg.Ideal.from_generators(ZI, [(1, 1)])]:
        assert oracle.brute_count_kernel(eye, a) == 1

    c = ms.CoeffMatrix(ZI, [[(1, 0), (1, 0)], [(1, 0), (-1, 0)]])
    two = rg.Ideal.principal(ZI, (2, 0))
    assert oracle.brute_count_kernel(c, two) == 4


def test_budget_exceeded():
    h2 = rootsys.builtin("H2").arrangement
    big = rg.Ideal.principal(ZT, (101, 0))
    with pytest.raises(BudgetExceeded):
        oracle.brute_count_complement(h2, big, budget=10 ** 4)


def test_inclusion_exclusion_sanity():
    rng = random.Random(41)
    for ring in (Z, ZI, Z5, ZT):
        for _ in range(10):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=3)
            a = rg.Ideal.principal(ring, ring.from_int(rng.randint(2, 4)))
            if a.norm ** A.ell > 10 ** 5:
                continue
            total = a.norm ** A.ell
            acc = total
            for size in range(1, A.n + 1):
                for J in combinations(range(A.n), size):
                    C = A.coeff_matrix(J)
                    acc += (-1) ** size * oracle.brute_count_kernel(C, a)
            assert acc == oracle.brute_count_complement(A, a)


def test_count_report():
    A = cq.Arrangement(Z5, [[(2, 0), (1, -1)], [(1, 1), (3, 0)]])
    rep = oracle.count_report(A, P5, subsets=[(0,), (1,), (0, 1)])
    assert rep.norm == 2
    assert rep.complement_count == 0
    assert rep.kernel_counts[(0,)] == 4  # N(p+p) * N(p)^(2-1)
    assert rep.kernel_counts[(0, 1)] == 2  # N(p+<1>) * N(p)^(2-1)
