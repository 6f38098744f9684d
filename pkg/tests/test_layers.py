import random
from itertools import combinations

import pytest

from dedarr import charquasi as cq
from dedarr import layers as ly
from dedarr import modstruct as ms
from dedarr import ring as rg
from dedarr import rootsys

from conftest import rand_small_arrangement

Z = rg.rational_integers()
ZI = rg.quadratic(-1)
Z5 = rg.quadratic(-5)
ZT = rg.quadratic(5)

P5 = rg.Ideal.from_generators(Z5, [(2, 0), (1, -1)])
Q5 = rg.Ideal.from_generators(Z5, [(3, 0), (1, 1)])
PQ = rg.Ideal.principal(Z5, (1, 1))


def test_intersection_lattice_examples(gaussian_arrangement,
                                       nonprincipal_arrangement):
    lat = ly.intersection_lattice(nonprincipal_arrangement)
    assert len(lat.flats) == 2  # ambient plus one line: equal hyperplanes

    lat = ly.intersection_lattice(gaussian_arrangement)
    assert len(lat.flats) == 6  # ambient, four lines, origin
    dims = sorted(f.dim for f in lat.flats)
    assert dims == [0, 1, 1, 1, 1, 2]
    origin = [f for f in lat.flats if f.dim == 0][0]
    assert origin.J == frozenset({0, 1, 2, 3})

    generic = cq.Arrangement(Z, [[(1,), (0,)], [(0,), (1,)]])
    assert len(ly.intersection_lattice(generic).flats) == 4


def test_whitney_polynomial_matches_first_constituent():
    rng = random.Random(61)
    checked = 0
    for ring in (Z, ZI, Z5, ZT):
        for _ in range(15):
            A = rand_small_arrangement(rng, ring, ell_max=3, n_max=4)
            q = cq.constituents(A, path="subset")
            whitney = ly.whitney_characteristic_polynomial(A)
            assert q.constituents[rg.Ideal.unit(ring)] == whitney, A.columns
            checked += 1
    assert checked >= 50


def test_layer_poset_nonprincipal(nonprincipal_arrangement):
    P = ly.layer_poset(nonprincipal_arrangement)
    assert P.m == 6
    assert len(P.layers) == 5
    line_layers = [z for z in P.layers if z.dim == 1]
    assert len(line_layers) == 4
    taus = sorted(z.tau.norm for z in line_layers)
    assert taus == [1, 2, 3, 3]
    assert all(z.mu == -1 for z in line_layers)
    top = [z for z in P.layers if z.dim == 2][0]
    assert top.mu == 1 and top.tau.is_unit_ideal()


def test_layer_poset_gaussian(gaussian_arrangement):
    P = ly.layer_poset(gaussian_arrangement)
    dims = {}
    for z in P.layers:
        dims[z.dim] = dims.get(z.dim, 0) + 1
    assert dims == {2: 1, 1: 4, 0: 6}
    # the identity point lies on all four subgroups and has mu = 3
    zero_layers = [z for z in P.layers if z.dim == 0 and not any(z.y)]
    assert len(zero_layers) == 1 and zero_layers[0].mu == 3
    assert zero_layers[0].J == frozenset({0, 1, 2, 3})
    mus = sorted(z.mu for z in P.layers if z.dim == 0)
    assert mus == [1, 1, 1, 1, 3, 3]


def test_layer_poset_empty():
    A = cq.Arrangement.empty(Z5, 2)
    P = ly.layer_poset(A)
    assert len(P.layers) == 1
    assert P.layers[0].mu == 1 and P.layers[0].dim == 2


def test_layer_counts_match_torsion_sizes(gaussian_arrangement,
                                          nonprincipal_arrangement):
    # per flat, layers lying inside every subgroup of the flat's full
    # index set form the torsion group of that subset's cokernel
    for A in (gaussian_arrangement, nonprincipal_arrangement):
        P = ly.layer_poset(A)
        rho = P.period
        for flat in P.lattice.flats:
            if flat.codim == 0:
                continue
            inv = ms.invariant_factors(A.coeff_matrix(sorted(flat.J)))
            at_flat = [z for z in P.layers
                       if z.flat_id == flat.id and z.J == flat.J]
            for kappa in rho.divisors():
                expected = cq.m_value(inv, kappa)
                got = sum(1 for z in at_flat
                          if z.tau.contains_ideal(kappa + rho))
                assert got == expected, (flat, kappa)


def test_layer_counts_random():
    rng = random.Random(62)
    for ring in (ZI, Z5, ZT):
        for _ in range(6):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=3,
                                       bound=2)
            rho = cq.lcm_period(A)
            if rho.norm > 200:
                continue
            P = ly.layer_poset(A)
            for size in range(1, A.n + 1):
                for J in combinations(range(A.n), size):
                    inv = ms.invariant_factors(A.coeff_matrix(J))
                    members = [z for z in P.layers
                               if set(J) <= z.J
                               and P.lattice.flats[z.flat_id].codim
                               == inv.rank]
                    for kappa in rho.divisors():
                        expected = cq.m_value(inv, kappa)
                        got = sum(1 for z in members
                                  if z.tau.contains_ideal(kappa + rho))
                        assert got == expected, (A.columns, J, kappa)


def test_mobius_methods_agree(gaussian_arrangement,
                              nonprincipal_arrangement):
    for A in (gaussian_arrangement, nonprincipal_arrangement,
              rootsys.builtin("H3").arrangement):
        P1 = ly.layer_poset(A, mobius="recursion")
        P2 = ly.layer_poset(A, mobius="localization")
        k1 = {(z.flat_id, z.y): z.mu for z in P1.layers}
        k2 = {(z.flat_id, z.y): z.mu for z in P2.layers}
        assert k1 == k2


def test_mobius_sign_alternation():
    rng = random.Random(63)
    for ring in (Z, ZI, Z5, ZT):
        for _ in range(8):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=3,
                                       bound=2)
            if cq.lcm_period(A).norm > 200:
                continue
            P = ly.layer_poset(A)
            for z in P.layers:
                codim = A.ell - z.dim
                assert (-1) ** codim * z.mu > 0


def test_kappa_subposet_examples(nonprincipal_arrangement):
    P = ly.layer_poset(nonprincipal_arrangement)
    sub = P.kappa_subposet(P5)
    assert len(sub) == 3
    taus = sorted(P.layers[i].tau.norm for i in sub)
    assert taus == [1, 1, 2]

    unit_sub = P.kappa_subposet(rg.Ideal.unit(Z5))
    assert len(unit_sub) == len(P.lattice.flats)

    assert len(P.kappa_subposet(PQ)) == len(P.layers)
    # reduction modulo the period: any ideal with the same gcd works
    seven = rg.Ideal.principal(Z5, (7, 0))
    assert P.kappa_subposet(P5 * seven) == P.kappa_subposet(P5)


def test_kappa_subposet_is_order_ideal():
    rng = random.Random(64)
    for ring in (ZI, Z5):
        for _ in range(6):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=3,
                                       bound=2)
            rho = cq.lcm_period(A)
            if rho.norm > 200:
                continue
            P = ly.layer_poset(A)
            for kappa in rho.divisors():
                chosen = set(P.kappa_subposet(kappa))
                for i in chosen:
                    z = P.layers[i]
                    for g in P.lattice.flats_above(P.lattice.flats[z.flat_id]):
                        w = P.project(z, g.id)
                        if w is not None:
                            assert w.index in chosen


def test_kappa_characteristic_polynomials(gaussian_arrangement,
                                          nonprincipal_arrangement):
    P = ly.layer_poset(gaussian_arrangement)
    p = rg.Ideal.from_generators(ZI, [(1, 1)])
    assert P.kappa_characteristic_polynomial(p) == (6, -4, 1)

    P2 = ly.layer_poset(nonprincipal_arrangement)
    assert P2.kappa_characteristic_polynomial(Q5) == (0, -3, 1)
    unit = rg.Ideal.unit(Z5)
    assert P2.kappa_characteristic_polynomial(unit) == \
        P2.lattice.characteristic_polynomial()


def test_localization_recursion_consistency():
    # recursion-free check of the Moebius values: mu equals the signed
    # count of spanning subsets of the layer's own index set
    rng = random.Random(65)
    for ring in (ZI, Z5):
        for _ in range(4):
            A = rand_small_arrangement(rng, ring, ell_max=2, n_max=3,
                                       bound=2)
            if cq.lcm_period(A).norm > 100:
                continue
            P = ly.layer_poset(A)
            for z in P.layers:
                flat = P.lattice.flats[z.flat_id]
                if flat.codim == 0:
                    continue
                total = 0
                for size in range(0, len(z.J) + 1):
                    for J in combinations(sorted(z.J), size):
                        if not J:
                            continue
                        C = A.coeff_matrix(J)
                        if ms.rank_over_K(C) == flat.codim:
                            total += (-1) ** len(J)
                assert z.mu == total, (A.columns, z)


def test_hasse_dot(gaussian_arrangement, nonprincipal_arrangement):
    P = ly.layer_poset(nonprincipal_arrangement)
    dot = P.hasse_dot()
    nodes = [ln for ln in dot.splitlines() if "label=" in ln]
    edges = [ln for ln in dot.splitlines() if "->" in ln]
    assert len(nodes) == 5 and len(edges) == 4

    P2 = ly.layer_poset(gaussian_arrangement)
    dot2 = P2.hasse_dot()
    nodes2 = [ln for ln in dot2.splitlines() if "label=" in ln]
    edges2 = [ln for ln in dot2.splitlines() if "->" in ln]
    assert len(nodes2) == 11 and len(edges2) == 20

    A = cq.Arrangement.empty(Z5, 2)
    dot3 = ly.layer_poset(A).hasse_dot()
    nodes3 = [ln for ln in dot3.splitlines() if "label=" in ln]
    edges3 = [ln for ln in dot3.splitlines() if "->" in ln]
    assert len(nodes3) == 1 and not edges3

    assert dot == P.hasse_dot()  # deterministic


def test_localized_poset_matches_torsion_subposet():
    h3 = rootsys.builtin("H3").arrangement
    P = ly.layer_poset(h3)
    local = ly.localized_layer_poset(h3, [(2, 0)])
    # inverting 2 strips the whole period of H3: the poset collapses to
    # the identity layers, i.e. the unit-ideal torsion subposet
    chosen = P.kappa_subposet(rg.Ideal.unit(ZT))
    expect = sorted((P.layers[i].dim, P.layers[i].mu,
                     P.layers[i].tau.hnf) for i in chosen)
    got = sorted((z.dim, z.mu, z.tau.hnf) for z in local.layers)
    assert expect == got
    # covering relations agree with the flat lattice
    pairs_local = set()
    for a in local.layers:
        for b in local.layers:
            if a is not b and local.leq(a, b):
                pairs_local.add((a.flat_id, b.flat_id))
    pairs_flat = set()
    for f in local.lattice.flats:
        for g in local.lattice.flats:
            if f.id != g.id and f.Jbits & g.Jbits == f.Jbits:
                pairs_flat.add((f.id, g.id))
    assert pairs_local == pairs_flat


def test_layer_budget(gaussian_arrangement):
    from dedarr.errors import ExponentTooLarge
    with pytest.raises(ExponentTooLarge):
        ly.layer_poset(gaussian_arrangement, budget=3)


def test_localized_poset_partial_strip(nonprincipal_arrangement):
    P = ly.layer_poset(nonprincipal_arrangement)
    local = ly.localized_layer_poset(nonprincipal_arrangement, [(2, 0)])
    chosen = P.kappa_subposet(Q5)
    expect = sorted((P.layers[i].dim, P.layers[i].mu,
                     P.layers[i].tau.hnf) for i in chosen)
    got = sorted((z.dim, z.mu, z.tau.hnf) for z in local.layers)
    assert expect == got
    assert len(local.layers) == 4  # ambient, identity, two norm-3 layers
