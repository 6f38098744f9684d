"""The torsion-translate arrangement and its poset of layers.

Working inside (K/O)^ell, each hyperplane contributes the subgroup of
points x with x*c_j integral.  A layer is a translate of the image of a
flat subspace; the poset of all layers (ordered by reverse inclusion)
refines the intersection lattice of the hyperplane arrangement and its
Moebius values assemble the constituents of the characteristic
quasi-polynomial.

Every layer is rho-torsion for the lcm period rho, so every layer has a
representative in the 1/m grid, m being the least positive rational
integer in rho.  All computations below are therefore finite integer
linear algebra modulo the full-rank lattices  L_X + m Z^D  attached to
the flats X (restriction of scalars, D = degree * ell).
"""

import math
from fractions import Fraction

from . import zlinalg as zl
from .errors import ExponentTooLarge
from .quasipoly import QuasiPolynomial
from .ring import Ideal, format_factored

LAYER_BUDGET = 5 * 10 ** 6


class Flat:
    """An intersection subspace of the hyperplane arrangement."""

    __slots__ = ("id", "lat", "pivots", "J", "Jbits", "dim", "codim",
                 "below", "above")

    def __init__(self, fid, lat, pivots, J, Jbits, dim, codim):
        self.id = fid
        self.lat = lat          # saturated lattice H_X int Z^D, HNF rows
        self.pivots = pivots
        self.J = J              # frozenset of hyperplane indices containing X
        self.Jbits = Jbits
        self.dim = dim          # dimension over the fraction field
        self.codim = codim
        self.below = []         # flats covered by X (one dimension up)
        self.above = []         # flats covering X (one dimension down)

    def __repr__(self):
        return f"Flat(id={self.id}, dim={self.dim}, J={sorted(self.J)})"


class FlatLattice:
    """The intersection lattice of the arrangement over the fraction field."""

    def __init__(self, arrangement):
        A = arrangement
        ring = A.ring
        deg = ring.degree
        D = deg * A.ell
        self.arrangement = A
        self.D = D
        self.colmats = [A.column_restriction(j) for j in range(A.n)]
        self.flats = []
        self._by_key = {}
        self.child = {}  # (flat id, hyperplane j) -> flat id of intersection

        ambient = zl.identity(D)
        self._add_flat(ambient, list(range(D)))
        frontier = [0]
        while frontier:
            new_ids = []
            for fid in sorted(frontier,
                              key=lambda i: self.flats[i].lat):
                flat = self.flats[fid]
                if flat.dim == 0:
                    continue
                base = [list(r) for r in flat.lat]
                for j in range(A.n):
                    if j in flat.J:
                        continue
                    # cut the flat by hyperplane j inside the flat's own
                    # coordinates: the saturation carries over because the
                    # flat's basis is itself saturated
                    small = zl.left_kernel(zl.mat_mul(base, self.colmats[j]))
                    inter = zl.mat_mul(small, base) if small else []
                    basis, pivots = zl.hnf(inter)
                    key = tuple(tuple(r) for r in basis)
                    got = self._by_key.get(key)
                    if got is None:
                        got = self._add_flat(basis, pivots)
                        new_ids.append(got)
                    self.child[(fid, j)] = got
            frontier = new_ids
        self._fill_covers()
        self.mobius = self._fill_mobius()

    def _add_flat(self, basis, pivots):
        A = self.arrangement
        deg = A.ring.degree
        key = tuple(tuple(r) for r in basis)
        J = set()
        for j in range(A.n):
            cm = self.colmats[j]
            if all(all(sum(row[t] * cm[t][s] for t in range(self.D)) == 0
                       for s in range(deg)) for row in basis):
                J.add(j)
        bits = 0
        for j in J:
            bits |= 1 << j
        dim = len(basis) // deg
        fid = len(self.flats)
        flat = Flat(fid, key, list(pivots), frozenset(J), bits, dim,
                    A.ell - dim)
        self.flats.append(flat)
        self._by_key[key] = fid
        return fid

    def _fill_covers(self):
        by_codim = {}
        for f in self.flats:
            by_codim.setdefault(f.codim, []).append(f)
        for f in self.flats:
            uppers = by_codim.get(f.codim + 1, [])
            for g in uppers:
                if f.Jbits & g.Jbits == f.Jbits:
                    f.above.append(g.id)
                    g.below.append(f.id)

    def _fill_mobius(self):
        mob = [0] * len(self.flats)
        order = sorted(self.flats, key=lambda f: f.codim)
        for f in order:
            if f.codim == 0:
                mob[f.id] = 1
                continue
            s = 0
            for g in self.flats:
                if g.id != f.id and g.Jbits & f.Jbits == g.Jbits \
                        and g.codim < f.codim:
                    s += mob[g.id]
            mob[f.id] = -s
        return mob

    def characteristic_polynomial(self):
        """Whitney-sum characteristic polynomial of the hyperplane poset."""
        coeffs = [0] * (self.arrangement.ell + 1)
        for f in self.flats:
            coeffs[f.dim] += self.mobius[f.id]
        return tuple(coeffs)

    def flats_above(self, flat):
        """Flats whose subspace strictly contains the given flat's."""
        return [g for g in self.flats
                if g.id != flat.id and g.Jbits & flat.Jbits == g.Jbits]

    def sub_top_mobius(self, sub_bits):
        """Moebius value at the top of the sub-arrangement on these columns.

        The flats of a column-subset arrangement are main-lattice flats,
        reachable through the cached intersection map, so no new linear
        algebra happens here.
        """
        if not hasattr(self, "_sub_mobius_cache"):
            self._sub_mobius_cache = {}
        cached = self._sub_mobius_cache.get(sub_bits)
        if cached is not None:
            return cached
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for fid in frontier:
                flat = self.flats[fid]
                if flat.dim == 0:
                    continue
                bits = sub_bits & ~flat.Jbits
                while bits:
                    low = bits & -bits
                    bits ^= low
                    child = self.child[(fid, low.bit_length() - 1)]
                    if child not in reached:
                        reached.add(child)
                        nxt.append(child)
            frontier = nxt
        members = sorted(reached, key=lambda i: self.flats[i].codim)
        mob = {}
        for fid in members:
            flat = self.flats[fid]
            if flat.codim == 0:
                mob[fid] = 1
                continue
            s = 0
            for gid in members:
                if gid != fid and \
                        self.flats[gid].Jbits & flat.Jbits == \
                        self.flats[gid].Jbits:
                    s += mob[gid]
            mob[fid] = -s
        value = mob[members[-1]]  # the unique deepest flat is the top
        self._sub_mobius_cache[sub_bits] = value
        return value


def intersection_lattice(A):
    """All flats of the arrangement, ambient first, by increasing codim."""
    return FlatLattice(A)


def whitney_characteristic_polynomial(A):
    return FlatLattice(A).characteristic_polynomial()


class Layer:
    """A translate of a flat inside the torsion space (K/O)^ell."""

    __slots__ = ("index", "flat_id", "y", "J", "Jbits", "tau", "dim", "mu")

    def __init__(self, index, flat_id, y, J, Jbits, tau, dim):
        self.index = index
        self.flat_id = flat_id
        self.y = y          # canonical representative of m*x in Z^D
        self.J = J          # hyperplanes whose subgroup contains the layer
        self.Jbits = Jbits
        self.tau = tau      # annihilator ideal relative to the identity layer
        self.dim = dim
        self.mu = None

    def __repr__(self):
        return (f"Layer(flat={self.flat_id}, y={self.y}, "
                f"tau={self.tau!r}, mu={self.mu})")


class _Refinement:
    """Solver data for intersecting layers of one flat with one subgroup."""

    __slots__ = ("child", "lam_child", "pivots_child", "basis", "colmat",
                 "V", "U", "diag", "steps", "reps", "m")

    def __init__(self, lam_basis, lam_child, pivots_child, colmat, m, child):
        D = len(lam_basis)
        deg = len(colmat[0])
        self.child = child
        self.lam_child = lam_child
        self.pivots_child = pivots_child
        self.basis = lam_basis
        self.colmat = colmat
        self.m = m
        M = zl.mat_mul(lam_basis, colmat)
        diag, U, V, _ = zl.snf_transforms(M)
        self.U = U
        self.V = V
        self.diag = [diag[i] if i < len(diag) else 0 for i in range(deg)]
        self.steps = [m // math.gcd(d, m) for d in self.diag]
        # the homogeneous solutions form a lattice between the child
        # lattice and the parent one; its index in the child lattice is
        # read off determinants, so the common single-coset case needs no
        # normal form at all
        det_parent = 1
        det_child = 1
        for i in range(D):
            det_parent *= lam_basis[i][i]
            det_child *= lam_child[i][i]
        for s in self.steps:
            det_parent *= s
        if det_parent == det_child:
            self.reps = [[0] * D]
        else:
            hom = []
            for i in range(D):
                if i < deg:
                    row = [self.steps[i] * u for u in U[i]]
                else:
                    row = list(U[i])
                hom.append(row)
            hom_y = zl.mat_mul(hom, lam_basis)
            sol_basis, _ = zl.hnf(hom_y)
            self.reps = zl.coset_reps([list(r) for r in lam_child],
                                      sol_basis)

    def solve(self, y):
        """Components of (layer y + parent lattice) meeting the subgroup.

        Returns canonical child representatives, or an empty list.
        """
        m = self.m
        deg = len(self.colmat[0])
        if any(y):
            t = [0] * deg
            for i, yi in enumerate(y):
                if yi:
                    row = self.colmat[i]
                    for s in range(deg):
                        t[s] -= yi * row[s]
            rhs = [0] * deg
            for i in range(deg):
                ti = t[i] % m
                if ti:
                    row = self.V[i]
                    for s in range(deg):
                        rhs[s] += ti * row[s]
            s_part = [0] * len(y)
            nonzero = False
            for i in range(deg):
                d = self.diag[i]
                g = math.gcd(d, m)
                r = rhs[i] % m
                if r % g:
                    return []
                mm = m // g
                if mm > 1:
                    val = (r // g) * pow((d // g) % mm, -1, mm) % mm
                    if val:
                        s_part[i] = val
                        nonzero = True
            if nonzero:
                base = list(y)
                basis = self.basis
                for i in range(deg):
                    si = s_part[i]
                    if si:
                        urow = self.U[i]
                        for t2 in range(len(y)):
                            u = urow[t2]
                            if u:
                                brow = basis[t2]
                                su = si * u
                                for c in range(len(y)):
                                    base[c] += su * brow[c]
            else:
                base = list(y)
        else:
            base = list(y)
        out = []
        for rep in self.reps:
            v = [base[i] + rep[i] for i in range(len(base))]
            out.append(tuple(zl.reduce_mod(v, self.lam_child,
                                           self.pivots_child)))
        return out


class LayerPoset:
    """All layers, grouped by flat, with annihilators and Moebius values."""

    def __init__(self, arrangement, period, lattice, m, layers, index,
                 torsion_bound):
        self.arrangement = arrangement
        self.period = period
        self.lattice = lattice
        self.m = m
        self.layers = layers
        self.index = index  # (flat id, y tuple) -> layer index
        self.torsion_bound = torsion_bound
        self._lam = {}

    # -- plumbing --

    def flat(self, layer):
        return self.lattice.flats[layer.flat_id]

    def lam(self, flat_id):
        if flat_id not in self._lam:
            flat = self.lattice.flats[flat_id]
            D = self.lattice.D
            rows = [list(r) for r in flat.lat] + \
                [[self.m if c == r else 0 for c in range(D)]
                 for r in range(D)]
            self._lam[flat_id] = zl.hnf(rows)
        return self._lam[flat_id]

    def canon(self, flat_id, y):
        basis, pivots = self.lam(flat_id)
        return tuple(zl.reduce_mod(list(y), basis, pivots))

    def project(self, layer, flat_id):
        """The layer of the coarser flat containing this one, if any."""
        key = (flat_id, self.canon(flat_id, layer.y))
        idx = self.index.get(key)
        return None if idx is None else self.layers[idx]

    def leq(self, a, b):
        """a <= b in the poset, i.e. the layer a contains the layer b."""
        fa, fb = self.flat(a), self.flat(b)
        if fa.Jbits & fb.Jbits != fa.Jbits:
            return False
        return self.canon(a.flat_id, b.y) == a.y

    def layers_at(self, flat_id):
        return [z for z in self.layers if z.flat_id == flat_id]

    def identity_layer(self, flat_id):
        zero = (0,) * self.lattice.D
        return self.layers[self.index[(flat_id, zero)]]

    # -- Moebius values --

    def fill_mobius(self, method="auto"):
        if method == "auto":
            small = len(self.layers) * len(self.lattice.flats) <= 200000
            method = "recursion" if small else "localization"
        if method == "recursion":
            self._mobius_recursion()
        elif method == "localization":
            self._mobius_localization()
        else:
            raise ValueError(f"unknown method {method!r}")
        return self

    def _mobius_recursion(self):
        order = sorted(self.layers, key=lambda z: self.flat(z).codim)
        for z in order:
            flat = self.flat(z)
            if flat.codim == 0:
                z.mu = 1
                continue
            s = 0
            for g in self.lattice.flats_above(flat):
                w = self.project(z, g.id)
                if w is not None:
                    s += w.mu
            z.mu = -s

    def _mobius_localization(self):
        # mu of a layer equals the top Moebius value of the intersection
        # lattice of the columns whose subgroups contain it
        for z in self.layers:
            flat = self.flat(z)
            if flat.codim == 0:
                z.mu = 1
            elif z.Jbits == flat.Jbits:
                # the sub-arrangement realizes the whole interval below
                # the flat, whose Moebius value is already known
                z.mu = self.lattice.mobius[flat.id]
            else:
                z.mu = self.lattice.sub_top_mobius(z.Jbits)

    # -- torsion subposets and constituents --

    def kappa_subposet(self, kappa):
        """Indices of the layers annihilated by kappa (an order ideal)."""
        kappa = kappa + self.period
        return [i for i, z in enumerate(self.layers)
                if z.tau.contains_ideal(kappa)]

    def kappa_characteristic_polynomial(self, kappa):
        coeffs = [0] * (self.arrangement.ell + 1)
        for i in self.kappa_subposet(kappa):
            z = self.layers[i]
            coeffs[z.dim] += z.mu
        return tuple(coeffs)

    def quasi_polynomial(self):
        consts = {k: self.kappa_characteristic_polynomial(k)
                  for k in self.period.divisors()}
        return QuasiPolynomial(self.arrangement.ring, self.period, consts)

    # -- presentation --

    def representative_string(self, z):
        ring = self.arrangement.ring
        deg = ring.degree
        coords = []
        for i in range(self.arrangement.ell):
            block = z.y[deg * i: deg * (i + 1)]
            fracs = [Fraction(c, self.m) for c in block]
            den = 1
            for f in fracs:
                den = den * f.denominator // math.gcd(den, f.denominator)
            nums = [f.numerator * (den // f.denominator) for f in fracs]
            elem = ring.format_element(tuple(nums))
            if den == 1:
                coords.append(elem)
            else:
                compound = "+" in elem or "-" in elem.lstrip("-")
                core = f"({elem})" if compound else elem
                coords.append(f"{core}/{den}")
        return "(" + ", ".join(coords) + ")"

    def hasse_dot(self, kappa=None):
        """Deterministic DOT digraph of the (restricted) poset."""
        if kappa is None:
            chosen = list(range(len(self.layers)))
        else:
            chosen = self.kappa_subposet(kappa)
        nodes = sorted(
            chosen,
            key=lambda i: (-self.layers[i].dim,
                           self.representative_string(self.layers[i])))
        lines = ["digraph layers {"]
        labels = {}
        for order, i in enumerate(nodes):
            z = self.layers[i]
            name = f"n{order}"
            labels[i] = name
            rep = self.representative_string(z)
            tau = format_factored(z.tau)
            lines.append(
                f'  {name} [label="{rep} | {tau} | {z.mu}"];')
        chosen_set = set(chosen)
        for i in nodes:
            for k in nodes:
                if i == k:
                    continue
                zi, zk = self.layers[i], self.layers[k]
                if zi.dim <= zk.dim or not self.leq(zi, zk):
                    continue
                # covering relation: no chosen layer strictly between
                is_cover = True
                for t in chosen_set:
                    zt = self.layers[t]
                    if t in (i, k) or zt.dim >= zi.dim or zt.dim <= zk.dim:
                        continue
                    if self.leq(zi, zt) and self.leq(zt, zk):
                        is_cover = False
                        break
                if is_cover:
                    lines.append(f"  {labels[i]} -> {labels[k]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def layer_poset(A, period=None, mobius="auto", budget=LAYER_BUDGET):
    """Build the poset of layers, keeping the period-torsion layers.

    When ``period`` is the lcm period (the default) this is the full
    poset; a proper divisor of it builds the corresponding torsion
    subposet, which is the poset of the arrangement over the localized
    ring whose dead primes were stripped from the period.
    """
    from .charquasi import lcm_period
    ring = A.ring
    if period is None:
        period = lcm_period(A)
    m = period.least_integer()
    lattice = FlatLattice(A)
    D = lattice.D
    deg = ring.degree
    poset = LayerPoset(A, period, lattice, m, [], {}, budget)

    omega_rows = None
    if deg == 2:
        t, nn = ring.omega_trace, ring.omega_norm
        omega_rows = (t, nn)

    def omega_apply(y):
        out = [0] * D
        for i in range(0, D, 2):
            a, b = y[i], y[i + 1]
            out[i] = -omega_rows[1] * b
            out[i + 1] = a + omega_rows[0] * b
        return out

    def tau_of(flat_id, y):
        basis, _ = poset.lam(flat_id)
        rows = [list(y)]
        if deg == 2:
            rows.append(omega_apply(y))
        stacked = rows + [list(r) for r in basis]
        ker = zl.left_kernel(stacked)
        proj = [k[:deg] for k in ker]
        hb, _ = zl.hnf(proj)
        if len(hb) < deg:
            raise AssertionError("annihilator lattice is rank deficient")
        return Ideal(ring, hb)

    def add_layer(flat_id, y):
        key = (flat_id, y)
        if key in poset.index:
            return None
        tau = tau_of(flat_id, y)
        if not tau.contains_ideal(period):
            return None  # not period-torsion: outside this poset
        flat = lattice.flats[flat_id]
        jset = set()
        for j in sorted(flat.J):
            cm = lattice.colmats[j]
            if all(sum(y[i] * cm[i][s] for i in range(D)) % m == 0
                   for s in range(deg)):
                jset.add(j)
        bits = 0
        for j in jset:
            bits |= 1 << j
        z = Layer(len(poset.layers), flat_id, y, frozenset(jset), bits,
                  tau, flat.dim)
        poset.layers.append(z)
        poset.index[key] = z.index
        if len(poset.layers) > budget:
            raise ExponentTooLarge(
                f"layer count exceeded the budget of {budget}")
        return z

    zero = (0,) * D
    add_layer(0, zero)
    by_flat = {0: [zero]}
    refinements = {}
    for codim in range(A.ell):
        level_flats = [f for f in lattice.flats if f.codim == codim]
        next_by_flat = {}
        for flat in level_flats:
            ys = by_flat.get(flat.id)
            if not ys:
                continue
            for j in range(A.n):
                if j in flat.J:
                    continue
                child = lattice.child[(flat.id, j)]
                rkey = (flat.id, j)
                if rkey not in refinements:
                    lam_basis, _ = poset.lam(flat.id)
                    lam_child, pivots_child = poset.lam(child)
                    refinements[rkey] = _Refinement(
                        lam_basis, lam_child, pivots_child,
                        lattice.colmats[j], m, child)
                refine = refinements[rkey]
                for y in ys:
                    for y_new in refine.solve(list(y)):
                        z = add_layer(child, y_new)
                        if z is not None:
                            next_by_flat.setdefault(child, []).append(y_new)
        by_flat = next_by_flat
    poset.fill_mobius(mobius)
    return poset


def mobius_values(P, method="auto"):
    return P.fill_mobius(method)


def kappa_torsion_subposet(P, kappa):
    return P.kappa_subposet(kappa)


def kappa_characteristic_polynomial(P, kappa):
    return P.kappa_characteristic_polynomial(kappa)


def hasse_dot(P, kappa=None):
    return P.hasse_dot(kappa)


def localized_layer_poset(A, s_gens, mobius="auto"):
    """Layer poset of the arrangement over the localization at s_gens.

    Inverting elements strips their primes from the period; the layers
    that survive are exactly those annihilated by the stripped period,
    so the construction runs with the smaller modulus directly.
    """
    from .charquasi import lcm_period, localize
    # localize() needs some quasi-polynomial carrier for the period only
    rho = lcm_period(A)
    carrier = QuasiPolynomial(
        A.ring, rho, {k: (0,) * (A.ell + 1) for k in rho.divisors()})
    view, _ = localize(A, s_gens, qp=carrier)
    return layer_poset(A, period=view.period, mobius=mobius)
