"""Module structure of cokernels over the base ring.

For a coefficient matrix C over the ring, the cokernel of x -> x*C
decomposes as a direct sum of cyclic torsion pieces O/d_1 + ... + O/d_r
(d_i dividing d_{i+1}) plus a projective part that never enters any
counting formula.  The d_i are recovered from the determinantal ideals
E_i

    E_i = ideal generated by all i x i minors of C,     d_i = E_i * E_{i-1}^{-1}

which is valid because both sides localize to the Smith normal form
identity over every discrete valuation ring.  The explicit torsion module
is computed independently by restricting scalars to Z and taking Smith
normal form, and the two routes cross-check each other in the tests.
"""

from itertools import combinations

from . import zlinalg as zl
from .errors import ElementNotInModule, NonIntegralQuotient, RingMismatch
from .ring import FractionalIdeal, Ideal


class CoeffMatrix:
    """An ell x k matrix of ring elements (columns are the c_j)."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(ring.element(x) for x in row) for row in rows)
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must be nonempty")
        if len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged rows")

    @classmethod
    def from_columns(cls, ring, columns):
        ell = len(columns[0])
        rows = [[columns[j][i] for j in range(len(columns))]
                for i in range(ell)]
        return cls(ring, rows)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def restriction_rows(self):
        """Integer matrix of x -> x*C after restricting scalars to Z.

        Rows are indexed by (basis element of O^ell), columns by the Z-basis
        of O^k; the row lattice is the image of the map.
        """
        ring = self.ring
        deg = ring.degree
        out = []
        for i in range(self.nrows):
            basis_elts = [ring.one]
            if deg == 2:
                basis_elts.append((0, 1))
            for b in basis_elts:
                row = []
                for j in range(self.ncols):
                    prod = ring.mul(b, self.rows[i][j])
                    row.extend(prod)
                out.append(row)
        return out


class SubsetInvariants:
    """Rank over the fraction field plus the torsion invariant factors."""

    __slots__ = ("rank", "factors")

    def __init__(self, rank, factors):
        self.rank = rank
        self.factors = tuple(factors)

    def __repr__(self):
        return f"SubsetInvariants(rank={self.rank}, factors={self.factors!r})"

    def __eq__(self, other):
        return (isinstance(other, SubsetInvariants)
                and self.rank == other.rank and self.factors == other.factors)

    def __hash__(self):
        return hash((self.rank, self.factors))

    def last_factor(self):
        return self.factors[-1] if self.factors else None

    def torsion_size(self):
        size = 1
        for d in self.factors:
            size *= d.norm
        return size


def rank_over_K(C):
    """Rank of C over the fraction field."""
    deg = C.ring.degree
    r = zl.rank(C.restriction_rows())
    assert r % deg == 0
    return r // deg


def _minor_table(C, max_size):
    """All minors of sizes 1..max_size as {(rows, cols): value}."""
    ring = C.ring
    table = {}
    for i in range(C.nrows):
        for j in range(C.ncols):
            table[((i,), (j,))] = C.rows[i][j]
    for size in range(2, max_size + 1):
        for rows in combinations(range(C.nrows), size):
            for cols in combinations(range(C.ncols), size):
                acc = ring.zero
                last = cols[-1]
                subcols = cols[:-1]
                for t, r in enumerate(rows):
                    sub = table[(rows[:t] + rows[t + 1:], subcols)]
                    term = ring.mul(C.rows[r][last], sub)
                    acc = ring.add(acc, term) if (t + size) % 2 else \
                        ring.sub(acc, term)
                table[(rows, cols)] = acc
    return table


def determinantal_ideals(C):
    """E_1, ..., E_r with E_i generated by the i x i minors."""
    ring = C.ring
    r = rank_over_K(C)
    if r == 0:
        return []
    table = _minor_table(C, r)
    ideals = []
    for size in range(1, r + 1):
        gens = [v for (rows, cols), v in table.items()
                if len(rows) == size and not ring.is_zero(v)]
        ideals.append(Ideal.from_generators(ring, gens))
    return ideals


def invariant_factors(C):
    """The torsion invariant factors of coker(x -> x*C)."""
    ring = C.ring
    ideals = determinantal_ideals(C)
    factors = []
    prev = Ideal.unit(ring)
    for e in ideals:
        frac = FractionalIdeal(e, 1) * prev.inverse()
        if not frac.is_integral():
            raise NonIntegralQuotient(
                "determinantal ideal quotient is not integral")
        d = frac.to_integral()
        if factors and not factors[-1].divides(d):
            raise NonIntegralQuotient("invariant factors fail to chain")
        factors.append(d)
        prev = e
    return SubsetInvariants(len(ideals), factors)


class TorsionModule:
    """The torsion part of coker(x -> x*C) as an explicit finite group.

    Elements are tuples of coordinates, one per cyclic factor; the
    multiplication-by-w action is stored as an integer matrix on the
    Smith coordinates.
    """

    __slots__ = ("ring", "invariants", "gens_ambient", "rel_basis",
                 "rel_pivots", "omega_action", "_ambient_dim")

    def __init__(self, ring, invariants, gens_ambient, rel_rows,
                 omega_action, ambient_dim):
        self.ring = ring
        self.invariants = tuple(invariants)
        self.gens_ambient = gens_ambient
        basis, pivots = zl.hnf(rel_rows) if rel_rows else ([], [])
        self.rel_basis = basis
        self.rel_pivots = pivots
        self.omega_action = omega_action
        self._ambient_dim = ambient_dim

    def __len__(self):
        size = 1
        for d in self.invariants:
            size *= d
        return size

    def elements(self):
        elts = [()]
        for d in self.invariants:
            elts = [e + (t,) for e in elts for t in range(d)]
        return [tuple(e) for e in elts]

    def canonical(self, coords):
        if len(coords) != len(self.invariants):
            raise ElementNotInModule("wrong coordinate length")
        return tuple(c % d for c, d in zip(coords, self.invariants))

    def act_omega(self, coords):
        out = zl.vec_mat(list(coords), self.omega_action) \
            if self.omega_action else list(coords)
        return self.canonical(out)

    def act(self, x, coords):
        """Multiply the element by the ring element x."""
        a = list(self.canonical(coords))
        result = [c * x[0] for c in a]
        if self.ring.degree == 2 and x[1]:
            wpart = self.act_omega(a)
            result = [r + x[1] * w for r, w in zip(result, wpart)]
        return self.canonical(result)

    def annihilator(self, coords):
        """The ideal {a in O : a * element = 0}."""
        ring = self.ring
        coords = self.canonical(coords)
        deg = ring.degree
        if not self.invariants:
            return Ideal.unit(ring)
        rows = [list(coords)]
        if deg == 2:
            rows.append(list(self.act_omega(coords)))
        # a = (a0, a1) kills the element iff a0*v + a1*(w v) = 0 modulo the
        # cyclic orders
        rel = [[self.invariants[i] if j == i else 0
                for j in range(len(self.invariants))]
               for i in range(len(self.invariants))]
        stacked = rows + rel
        ker = zl.left_kernel(stacked)
        proj = [k[:deg] for k in ker]
        basis, _ = zl.hnf(proj)
        if len(basis) < deg:
            raise AssertionError("annihilator lattice is rank deficient")
        return Ideal(ring, basis)

    def abelian_invariants(self):
        return self.invariants


def torsion_cokernel(C):
    """Explicit torsion part of the cokernel, via Smith normal form over Z."""
    ring = C.ring
    deg = ring.degree
    n = deg * C.ncols
    rel = C.restriction_rows()
    basis, _ = zl.hnf(rel)
    if not basis:
        return TorsionModule(ring, (), [], [], [], n)
    diag, U, V, Vinv = zl.snf_transforms(basis)
    # Z^n / L in coordinates z = y * V: z_i taken mod diag_i (i < rank),
    # free otherwise.  The torsion part keeps the coordinates with d > 1.
    tors_idx = [i for i, d in enumerate(diag) if d > 1]
    invariants = [diag[i] for i in tors_idx]
    # multiplication by w on ambient coordinates
    if deg == 2:
        w_amb = [[0] * n for _ in range(n)]
        for j in range(C.ncols):
            t, nn = ring.omega_trace, ring.omega_norm
            # (a + b w) * w = -nn*b + (a + t*b) w
            w_amb[2 * j][2 * j + 1] = 1
            w_amb[2 * j + 1][2 * j] = -nn
            w_amb[2 * j + 1][2 * j + 1] = t
    else:
        w_amb = zl.identity(n)
    # action on z-coordinates: z -> z V^{-1} W V, restricted to torsion coords
    conj = zl.mat_mul(zl.mat_mul(Vinv, w_amb), V)
    action = [[conj[i][j] for j in tors_idx] for i in tors_idx]
    gens_ambient = [zl.vec_mat([1 if t == i else 0
                                for t in range(n)], Vinv)
                    for i in tors_idx]
    module = TorsionModule(ring, invariants, gens_ambient, basis, action, n)
    return module


def annihilator(M, coords):
    return M.annihilator(coords)
