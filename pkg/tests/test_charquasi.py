import random
from itertools import combinations

import pytest

from dedarr import charquasi as cq
from dedarr import modstruct as ms
from dedarr import oracle
from dedarr import ring as rg
from dedarr import rootsys
from dedarr.errors import (
    InvalidArrangement,
    PathInfeasible,
    ZeroInMultiplicativeSet,
)

from conftest import rand_small_arrangement

Z = rg.rational_integers()
ZI = rg.quadratic(-1)
Z5 = rg.quadratic(-5)
ZT = rg.quadratic(5)

P5 = rg.Ideal.from_generators(Z5, [(2, 0), (1, -1)])
Q5 = rg.Ideal.from_generators(Z5, [(3, 0), (1, 1)])
PQ = rg.Ideal.principal(Z5, (1, 1))


def test_arrangement_validation():
    with pytest.raises(InvalidArrangement):
        cq.Arrangement(Z5, [[(0, 0), (0, 0)]])
    with pytest.raises(InvalidArrangement):
        cq.Arrangement(Z, [[(1,)], [(1,), (2,)]])
    # duplicates and proportional columns are allowed
    A = cq.Arrangement(Z, [[(1,), (2,)], [(1,), (2,)], [(2,), (4,)]])
    assert A.n == 3


def test_subset_data_nonprincipal(nonprincipal_arrangement):
    data = cq.subset_data(nonprincipal_arrangement)
    assert data[frozenset({0})].factors == (P5,)
    assert data[frozenset({1})].factors == (Q5,)
    both = data[frozenset({0, 1})]
    assert both.rank == 1 and both.factors[0].is_unit_ideal()


def test_subset_data_single_unimodular():
    A = cq.Arrangement(Z, [[(1,), (3,)]])
    data = cq.subset_data(A)
    assert data[frozenset({0})].factors[0].is_unit_ideal()


def test_subset_data_gaussian(gaussian_arrangement):
    data = cq.subset_data(gaussian_arrangement)
    p = rg.Ideal.from_generators(ZI, [(1, 1)])
    two = rg.Ideal.principal(ZI, (2, 0))
    pair_lasts = sorted(
        data[frozenset(J)].factors[-1].norm
        for J in combinations(range(4), 2))
    assert pair_lasts == [2, 2, 2, 2, 4, 4]
    lasts = {data[frozenset(J)].factors[-1]
             for J in combinations(range(4), 2)}
    assert lasts == {p, two}


def test_lcm_period_examples(gaussian_arrangement, nonprincipal_arrangement):
    assert cq.lcm_period(gaussian_arrangement) == \
        rg.Ideal.principal(ZI, (2, 0))
    assert cq.lcm_period(nonprincipal_arrangement) == PQ
    h2 = rootsys.builtin("H2").arrangement
    assert cq.lcm_period(h2).is_unit_ideal()
    h3 = rootsys.builtin("H3").arrangement
    assert cq.lcm_period(h3) == rg.Ideal.principal(ZT, (2, 0))


def test_lcm_period_equals_full_range_lcm():
    # against the definition: lcm over every J in the size bound
    rng = random.Random(51)
    for ring in (Z, ZI, Z5, ZT):
        for _ in range(15):
            A = rand_small_arrangement(rng, ring, ell_max=3, n_max=4)
            rho = cq.lcm_period(A)
            full = rg.Ideal.unit(ring)
            for inv in cq.subset_data(A).values():
                last = inv.last_factor()
                if last is not None and not last.contains_ideal(full):
                    full = full.intersect(last)
            assert rho == full, A.columns


def test_constituents_gaussian(gaussian_arrangement):
    q = cq.constituents(gaussian_arrangement, path="subset")
    p = rg.Ideal.from_generators(ZI, [(1, 1)])
    two = rg.Ideal.principal(ZI, (2, 0))
    unit = rg.Ideal.unit(ZI)
    assert q.constituents[unit] == (3, -4, 1)
    assert q.constituents[p] == (6, -4, 1)
    assert q.constituents[two] == (10, -4, 1)


def test_constituents_nonprincipal(nonprincipal_arrangement):
    q = cq.constituents(nonprincipal_arrangement, path="subset")
    assert q.period == PQ
    assert q.constituents[rg.Ideal.unit(Z5)] == (0, -1, 1)
    assert q.constituents[P5] == (0, -2, 1)
    assert q.constituents[Q5] == (0, -3, 1)
    assert q.constituents[PQ] == (0, -4, 1)


def test_constituents_h3_both_paths():
    h3 = rootsys.builtin("H3").arrangement
    q_subset = cq.constituents(h3, path="subset")
    q_layers = cq.constituents(h3, path="layers")
    assert q_subset.period == q_layers.period
    assert q_subset.constituents == q_layers.constituents
    unit = rg.Ideal.unit(ZT)
    two = rg.Ideal.principal(ZT, (2, 0))
    assert q_subset.constituents[unit] == (-45, 59, -15, 1)
    assert q_subset.constituents[two] == (-60, 59, -15, 1)


def test_path_equivalence_random():
    rng = random.Random(52)
    for ring in (Z, ZI, Z5, ZT):
        for _ in range(8):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=3,
                                       bound=2)
            if cq.lcm_period(A).norm > 400:
                continue
            qs = cq.constituents(A, path="subset")
            ql = cq.constituents(A, path="layers")
            assert qs.period == ql.period and \
                qs.constituents == ql.constituents, A.columns


def test_subset_path_bound():
    cols = [[(1,), (k,)] for k in range(1, 25)]
    A = cq.Arrangement(Z, cols)
    with pytest.raises(PathInfeasible):
        cq.constituents(A, path="subset")


def test_empty_arrangement():
    A = cq.Arrangement.empty(Z5, 2)
    q = cq.constituents(A)
    assert q.period.is_unit_ideal()
    assert q.constituents[rg.Ideal.unit(Z5)] == (0, 0, 1)


def test_m_value_examples():
    inv = ms.SubsetInvariants(1, (P5,))
    assert cq.m_value(inv, PQ) == 2
    assert cq.m_value(inv, rg.Ideal.unit(Z5)) == 1
    two = rg.Ideal.principal(ZI, (2, 0))
    inv2 = ms.SubsetInvariants(2, (rg.Ideal.unit(ZI), two))
    assert cq.m_value(inv2, two) == 4


def test_evaluate_examples(gaussian_arrangement, nonprincipal_arrangement):
    h2 = rootsys.builtin("H2").arrangement
    two = rg.Ideal.principal(ZT, (2, 0))
    assert two.norm == 4
    q = cq.constituents(h2)
    assert q.evaluate(two) == 0  # (4-1)(4-4)
    qn = cq.constituents(nonprincipal_arrangement)
    assert qn.evaluate(P5) == 0
    qg = cq.constituents(gaussian_arrangement)
    p = rg.Ideal.from_generators(ZI, [(1, 1)])
    assert qg.evaluate(p) == 2
    assert oracle.brute_count_complement(gaussian_arrangement, p) == 2


def test_oracle_agreement_random():
    rng = random.Random(53)
    checked = 0
    for ring in (Z, ZI, Z5, ZT, rg.quadratic(-3), rg.quadratic(2)):
        for _ in range(12):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=4,
                                       bound=2)
            q = cq.constituents(A)
            for a in rg.ideals_of_norm_up_to(ring, 16):
                if a.norm ** A.ell > 10 ** 4:
                    continue
                assert q.evaluate(a) == \
                    oracle.brute_count_complement(A, a), (A.columns, a)
                checked += 1
    assert checked >= 200


def test_degree_bound_for_agreeing_divisors():
    # when two divisors agree against every singleton's invariant factor,
    # the constituents differ only below degree ell - 1
    for name in ("H3",):
        data = rootsys.builtin(name)
        A = data.arrangement
        singles = [ms.invariant_factors(A.coeff_matrix((j,)))
                   for j in range(A.n)]
        assert all(inv.factors[-1].is_unit_ideal() for inv in singles)
        q = cq.constituents(A, path="layers")
        divs = q.divisors()
        for k1, k2 in combinations(divs, 2):
            diff = [a - b for a, b in
                    zip(q.constituents[k1], q.constituents[k2])]
            for idx in range(A.ell - 1, A.ell + 1):
                assert diff[idx] == 0


def test_minimality_certificate(nonprincipal_arrangement):
    cert = cq.minimality_certificate(nonprincipal_arrangement)
    assert cert.period == PQ and cert.minimum == PQ
    assert set(cert.witnesses) == {P5, Q5}
    for p, (k1, k2) in cert.witnesses.items():
        reduced = (PQ * p.inverse()).to_integral()
        assert (k1 + reduced) == (k2 + reduced)

    empty = cq.Arrangement.empty(Z5, 2)
    cert = cq.minimality_certificate(empty)
    assert cert.period.is_unit_ideal() and not cert.witnesses


def test_localize_h3():
    h3 = rootsys.builtin("H3").arrangement
    q = cq.constituents(h3, path="layers")
    view, local = cq.localize(h3, [(2, 0)], qp=q)
    assert local.period.is_unit_ideal()
    assert len(local.constituents) == 1
    assert local.constituents[rg.Ideal.unit(ZT)] == \
        q.constituents[rg.Ideal.unit(ZT)]
    # inverting a unit changes nothing
    view2, local2 = cq.localize(h3, [(0, 1)], qp=q)  # tau is a unit
    assert local2.period == q.period
    assert local2.constituents == q.constituents
    with pytest.raises(ZeroInMultiplicativeSet):
        cq.localize(h3, [(0, 0)], qp=q)


def test_localize_nonprincipal(nonprincipal_arrangement):
    q = cq.constituents(nonprincipal_arrangement)
    view, local = cq.localize(nonprincipal_arrangement, [(2, 0)], qp=q)
    # inverting 2 kills the norm-2 prime; only the norm-3 prime survives
    assert local.period == Q5
    assert set(local.constituents) == {rg.Ideal.unit(Z5), Q5}
    assert local.constituents[Q5] == q.constituents[Q5]


def test_arrangement_json_roundtrip(nonprincipal_arrangement):
    data = cq.arrangement_to_json(nonprincipal_arrangement)
    back = cq.arrangement_from_json(data)
    assert back.columns == nonprincipal_arrangement.columns
    assert back.ring == nonprincipal_arrangement.ring

    A = cq.Arrangement(Z, [[(1,), (2,)], [(0,), (5,)]])
    back = cq.arrangement_from_json(cq.arrangement_to_json(A))
    assert back.columns == A.columns

    empty = cq.Arrangement.empty(ZI, 3)
    back = cq.arrangement_from_json(cq.arrangement_to_json(empty))
    assert back.n == 0 and back.ell == 3


def test_arrangement_json_errors():
    with pytest.raises(InvalidArrangement):
        cq.arrangement_from_json({"columns": []})
    with pytest.raises(InvalidArrangement):
        cq.arrangement_from_json({"ring": {"type": "Z"}, "columns": [[0.5]]})
    with pytest.raises(InvalidArrangement):
        cq.arrangement_from_json(
            {"ring": {"type": "quadratic", "d": -5}, "columns": [[3]]})
