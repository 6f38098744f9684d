"""Exact integer matrix routines: HNF, SNF, kernels, saturation, cosets.

Matrices are lists (or tuples) of rows of Python ints, so everything is
arbitrary precision.  Row convention throughout: a lattice is the set of
integer combinations of the rows of its basis matrix.
"""

from fractions import Fraction


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def hnf(rows):
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Returns (basis, pivots): ``basis`` is a list of the nonzero echelon rows
    with positive pivots and entries above each pivot reduced into
    [0, pivot); ``pivots`` is the list of pivot column indices.  The result
    is the canonical basis of the row lattice.
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return [], []
    ncols = len(work[0])
    basis = []
    pivots = []
    for col in range(ncols):
        carrier = None
        rest = []
        for r in work:
            if r[col] != 0:
                if carrier is None:
                    carrier = r
                else:
                    # combine so that carrier[col] becomes gcd, r[col] zero
                    a, b = carrier[col], r[col]
                    if b % a == 0:
                        q = b // a
                        for j in range(col, ncols):
                            r[j] -= q * carrier[j]
                    else:
                        g, x, y = xgcd(a, b)
                        fa, fb = a // g, b // g
                        for j in range(col, ncols):
                            u, v = carrier[j], r[j]
                            carrier[j] = x * u + y * v
                            r[j] = -fb * u + fa * v
                    if any(r[col:]):
                        rest.append(r)
            else:
                if any(r[col:]):
                    rest.append(r)
        if carrier is not None:
            if carrier[col] < 0:
                for j in range(col, ncols):
                    carrier[j] = -carrier[j]
            basis.append(carrier)
            pivots.append(col)
            work = rest
        if not work:
            break
    # reduce entries above each pivot, in increasing pivot order so that
    # earlier reductions are never disturbed
    for i in range(len(basis)):
        p = pivots[i]
        piv = basis[i][p]
        for k in range(i):
            q = basis[k][p] // piv
            if q:
                row = basis[k]
                brow = basis[i]
                for j in range(p, len(row)):
                    row[j] -= q * brow[j]
    return basis, pivots


def rank(rows):
    return len(hnf(rows)[0])


def in_lattice(vec, basis, pivots):
    """Membership of ``vec`` in the row lattice given by HNF (basis, pivots)."""
    v = list(vec)
    for row, p in zip(basis, pivots):
        if v[p] % row[p] != 0:
            return False
        q = v[p] // row[p]
        if q:
            for j in range(p, len(v)):
                v[j] -= q * row[j]
    return not any(v)


def reduce_mod(vec, basis, pivots):
    """Canonical representative of ``vec`` modulo the row lattice.

    Pivot coordinates are reduced into [0, pivot); the representative is
    unique when the lattice has full rank.
    """
    v = list(vec)
    for row, p in zip(basis, pivots):
        q = v[p] // row[p]
        if q:
            for j in range(p, len(v)):
                v[j] -= q * row[j]
    return v


def coords_in_lattice(vec, basis, pivots):
    """Integer coordinates of ``vec`` in the HNF basis, or None."""
    v = list(vec)
    coords = [0] * len(basis)
    for i, (row, p) in enumerate(zip(basis, pivots)):
        if v[p] % row[p] != 0:
            return None
        q = v[p] // row[p]
        coords[i] = q
        if q:
            for j in range(p, len(v)):
                v[j] -= q * row[j]
    if any(v):
        return None
    return coords


def left_kernel(rows):
    """Basis of {x : x * A = 0} for the matrix A given by ``rows``.

    The result spans a saturated lattice (it is the full integer kernel).
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(m)]
           for i in range(m)]
    basis, pivots = hnf(aug)
    # rows of the HNF whose A-part is zero form a basis of the kernel
    return [row[n:] for row, p in zip(basis, pivots) if p >= n]


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def right_kernel(rows):
    """Basis (as rows) of {x : A * x^T = 0}."""
    return left_kernel(transpose(rows))


def saturate(rows):
    """Saturation of the row lattice: (Q-span of rows) intersect Z^n."""
    if not rows or not any(any(r) for r in rows):
        return []
    rk = right_kernel(rows)
    if not rk:
        n = len(rows[0])
        return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    sat = left_kernel(transpose(rk))
    return hnf(sat)[0]


def intersect(rows_a, rows_b):
    """Basis of the intersection of two row lattices."""
    a = hnf(rows_a)[0]
    b = hnf(rows_b)[0]
    if not a or not b:
        return []
    stacked = [list(r) for r in a] + [[-x for x in r] for r in b]
    ker = left_kernel(stacked)
    la = len(a)
    gens = []
    for k in ker:
        vec = [0] * len(a[0])
        for i in range(la):
            if k[i]:
                for j in range(len(vec)):
                    vec[j] += k[i] * a[i][j]
        gens.append(vec)
    return hnf(gens)[0]


def _snf_work(rows, want_transforms):
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    if want_transforms:
        U = identity(m)
        V = identity(n)
        Vinv = identity(n)
    else:
        U = V = Vinv = None

    def row_combine(i, k, x, y, fa, fb):
        # (row_i, row_k) <- (x*row_i + y*row_k, -fb*row_i + fa*row_k)
        mats = (a, U) if want_transforms else (a,)
        for mat in mats:
            ri, rk = mat[i], mat[k]
            for j in range(len(ri)):
                u, v = ri[j], rk[j]
                ri[j] = x * u + y * v
                rk[j] = -fb * u + fa * v

    def row_sub(i, k, f):
        # row_k -= f * row_i
        mats = (a, U) if want_transforms else (a,)
        for mat in mats:
            ri, rk = mat[i], mat[k]
            for j in range(len(ri)):
                rk[j] -= f * ri[j]

    def col_combine(j, k, x, y, fa, fb):
        # (col_j, col_k) <- (x*col_j + y*col_k, -fb*col_j + fa*col_k)
        for row in a:
            u, v = row[j], row[k]
            row[j] = x * u + y * v
            row[k] = -fb * u + fa * v
        if want_transforms:
            for row in V:
                u, v = row[j], row[k]
                row[j] = x * u + y * v
                row[k] = -fb * u + fa * v
            # inverse elementary matrix acts on Vinv rows
            rj, rk = Vinv[j], Vinv[k]
            for t in range(n):
                u, v = rj[t], rk[t]
                rj[t] = fa * u + fb * v
                rk[t] = -y * u + x * v

    def col_sub(j, k, f):
        # col_k -= f * col_j ;  inverse: row_j of Vinv += f * row_k
        for row in a:
            row[k] -= f * row[j]
        if want_transforms:
            for row in V:
                row[k] -= f * row[j]
            rj, rk = Vinv[j], Vinv[k]
            for t in range(n):
                rj[t] += f * rk[t]

    def neg_row(i):
        for j in range(n):
            a[i][j] = -a[i][j]
        if want_transforms:
            for j in range(m):
                U[i][j] = -U[i][j]

    def clear_block(t):
        # make row t and column t zero outside a[t][t]
        while True:
            for i in range(t + 1, m):
                if a[i][t]:
                    p, q = a[t][t], a[i][t]
                    if p and q % p == 0:
                        row_sub(t, i, q // p)
                    else:
                        g, x, y = xgcd(p, q)
                        row_combine(t, i, x, y, p // g, q // g)
            dirty = False
            for j in range(t + 1, n):
                if a[t][j]:
                    p, q = a[t][t], a[t][j]
                    if p and q % p == 0:
                        col_sub(t, j, q // p)
                    else:
                        g, x, y = xgcd(p, q)
                        col_combine(t, j, x, y, p // g, q // g)
                        dirty = True
            if not dirty and all(a[i][t] == 0 for i in range(t + 1, m)):
                break
        if a[t][t] < 0:
            neg_row(t)

    r = min(m, n)
    r_eff = 0
    for t in range(r):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            if want_transforms:
                U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            if want_transforms:
                for row in V:
                    row[t], row[j0] = row[j0], row[t]
                Vinv[t], Vinv[j0] = Vinv[j0], Vinv[t]
        clear_block(t)
        r_eff = t + 1
    # enforce the divisibility chain d_t | d_{t+1}
    changed = True
    while changed:
        changed = False
        for t in range(r_eff - 1):
            p, q = a[t][t], a[t + 1][t + 1]
            if q % p != 0:
                changed = True
                col_sub(t + 1, t, -1)  # col_t += col_{t+1}
                clear_block(t)
                clear_block(t + 1)
    diag = [a[i][i] for i in range(r_eff)]
    if want_transforms:
        return diag, a, U, V, Vinv
    return diag, a, None, None, None


def snf_diagonal(rows):
    """Invariant factors d_1 | d_2 | ... of the matrix (nonzero only)."""
    if not rows:
        return []
    return _snf_work(rows, False)[0]


def snf_transforms(rows):
    """Return (diag, U, V, Vinv) with U*A*V diagonal, U, V unimodular."""
    diag, _, U, V, Vinv = _snf_work(rows, True)
    return diag, U, V, Vinv


def mat_mul(a, b):
    ncols = len(b[0])
    out = []
    for row in a:
        acc = [0] * ncols
        for x, brow in zip(row, b):
            if x:
                for j in range(ncols):
                    acc[j] += x * brow[j]
        out.append(acc)
    return out


def vec_mat(v, b):
    acc = [0] * len(b[0])
    for x, row in zip(v, b):
        if x:
            for j in range(len(acc)):
                acc[j] += x * row[j]
    return acc


def identity(n):
    return [[1 if j == i else 0 for j in range(n)] for i in range(n)]


def coset_reps(sub_rows, sup_rows):
    """Representatives of L_sup / L_sub for full-index sublattice pairs.

    Both arguments are bases (rows).  Requires L_sub <= L_sup with finite
    index.  Returns a list of integer vectors in ambient coordinates, one
    per coset, with the zero coset first.
    """
    sup, sup_piv = hnf(sup_rows)
    sub, _ = hnf(sub_rows)
    coords = []
    for row in sub:
        c = coords_in_lattice(row, sup, sup_piv)
        if c is None:
            raise ValueError("sub lattice is not contained in sup lattice")
        coords.append(c)
    diag, U, V, Vinv = snf_transforms(coords)
    if len(diag) < len(sup):
        raise ValueError("quotient is infinite")
    new_basis = mat_mul(Vinv, sup)
    reps = [[0] * len(sup[0])]
    for i, d in enumerate(diag):
        if d <= 1:
            continue
        grown = []
        for t in range(d):
            for r in reps:
                grown.append([x + t * y for x, y in zip(r, new_basis[i])]
                             if t else list(r))
        reps = grown
    return reps


def quotient_invariants(rel_rows, n):
    """Abelian invariants (>1 entries) of Z^n modulo the row lattice."""
    if not rel_rows:
        return []
    diag = snf_diagonal(rel_rows)
    return [d for d in diag if d > 1]


def rational_solve(rows, target):
    """One rational solution x of x * A = target, or None.

    ``rows`` is A given by rows; x has one entry per row.
    """
    m = len(rows)
    if m == 0:
        return None if any(target) else []
    n = len(rows[0])
    # Gaussian elimination over Q on the transposed system
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(target[j])]
           for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = None
        for i in range(r, n):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][m]
    return x
