"""Brute-force ground truth: point counts over (O/a)^ell.

Enumerates the full residue grid (streamed in chunks) and counts points
off every reduced hyperplane, or in the kernel of a coefficient matrix.
Everything is int64 numpy; coordinate values stay far below overflow for
any norm the budget admits.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10 ** 7
CHUNK = 1 << 17


@dataclass
class CountReport:
    ideal: object
    norm: int
    complement_count: int
    kernel_counts: dict = field(default_factory=dict)
    elapsed_s: float = 0.0


def _residue_arrays(a):
    """Residue representatives as one int64 array per coordinate of O."""
    ring = a.ring
    reps = a.residues()
    arr = np.array(reps, dtype=np.int64)
    return [arr[:, i] for i in range(ring.degree)]


def _membership_mask(ring, a, coords):
    """Vectorized test for (tuple of coordinate arrays) lying in the ideal."""
    if ring.degree == 1:
        return coords[0] % a.hnf[0][0] == 0
    h = a.hnf
    u, v = coords
    q = u // h[0][0]
    return (u % h[0][0] == 0) & ((v - q * h[0][1]) % h[1][1] == 0)


def _mul_arrays(ring, x, col):
    """x (tuple of arrays) times the constant element col."""
    if ring.degree == 1:
        return (x[0] * col[0],)
    a, b = x
    e, f = col
    t, n = ring.omega_trace, ring.omega_norm
    return (a * e - n * (b * f), a * f + b * e + t * (b * f))


def _grid_chunks(a, ell, budget):
    """Yield tuples of coordinate arrays covering (O/a)^ell."""
    norm = a.norm
    total = norm ** ell
    if total > budget:
        raise BudgetExceeded(
            f"{total} residue vectors exceed the budget of {budget}")
    per_coord = _residue_arrays(a)
    deg = len(per_coord)
    for start in range(0, total, CHUNK):
        stop = min(start + CHUNK, total)
        flat = np.arange(start, stop, dtype=np.int64)
        coords = []
        for i in range(ell):
            idx = (flat // (norm ** i)) % norm
            coords.append(tuple(per_coord[c][idx] for c in range(deg)))
        yield coords


def brute_count_complement(arrangement, a, budget=DEFAULT_BUDGET):
    """Number of residue vectors avoiding every hyperplane of the arrangement."""
    ring = arrangement.ring
    count = 0
    for coords in _grid_chunks(a, arrangement.ell, budget):
        alive = np.ones(len(coords[0][0]), dtype=bool)
        for col in arrangement.columns:
            acc = None
            for i in range(arrangement.ell):
                term = _mul_arrays(ring, coords[i], col[i])
                acc = term if acc is None else tuple(
                    x + y for x, y in zip(acc, term))
            alive &= ~_membership_mask(ring, a, acc)
            if not alive.any():
                break
        count += int(alive.sum())
    return count


def brute_count_kernel(C, a, budget=DEFAULT_BUDGET):
    """Number of residue vectors x with x*C = 0 modulo the ideal."""
    ring = C.ring
    count = 0
    for coords in _grid_chunks(a, C.nrows, budget):
        alive = np.ones(len(coords[0][0]), dtype=bool)
        for j in range(C.ncols):
            acc = None
            for i in range(C.nrows):
                term = _mul_arrays(ring, coords[i], C.rows[i][j])
                acc = term if acc is None else tuple(
                    x + y for x, y in zip(acc, term))
            alive &= _membership_mask(ring, a, acc)
            if not alive.any():
                break
        count += int(alive.sum())
    return count


def count_report(arrangement, a, subsets=(), budget=DEFAULT_BUDGET):
    """Complement count plus kernel counts for the requested column subsets."""
    from .modstruct import CoeffMatrix
    start = time.monotonic()
    complement = brute_count_complement(arrangement, a, budget)
    kernels = {}
    for subset in subsets:
        cols = [arrangement.columns[j] for j in subset]
        C = CoeffMatrix.from_columns(arrangement.ring, cols)
        kernels[tuple(subset)] = brute_count_kernel(C, a, budget)
    return CountReport(ideal=a, norm=a.norm, complement_count=complement,
                       kernel_counts=kernels,
                       elapsed_s=time.monotonic() - start)
