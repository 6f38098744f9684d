"""Characteristic quasi-polynomials of integral arrangements.

The engine sweeps column subsets J, extracts the torsion invariant
factors of the cokernel of x -> x*C_J, and assembles

    f^kappa(t) = sum over J of (-1)^|J| * m(J, kappa) * t^(ell - r(J)),

where m(J, kappa) is the product of N(kappa + d_{J,i}).  Two routes are
implemented: the inclusion-exclusion sum above over all 2^n subsets (with
an exact cancellation prune), and the layer-poset route that reads the
same constituents off Moebius values of the torsion-translate poset.
"""

import json
from dataclasses import dataclass
from itertools import combinations

from . import modstruct as ms
from .errors import (
    CertificateFailure,
    InvalidArrangement,
    PathInfeasible,
    ZeroInMultiplicativeSet,
)
from .quasipoly import QuasiPolynomial, ring_from_json, ring_to_json
from .ring import Ideal

SUBSET_PATH_MAX_N = 22
AUTO_SUBSET_MAX_N = 12


class Arrangement:
    """A finite list of nonzero coefficient columns in O^ell."""

    __slots__ = ("ring", "ell", "columns", "name")

    def __init__(self, ring, columns, name=None):
        cols = []
        for idx, col in enumerate(columns):
            elements = tuple(ring.element(x) for x in col)
            if all(ring.is_zero(x) for x in elements):
                raise InvalidArrangement(f"column {idx} is zero")
            cols.append(elements)
        if not cols:
            raise InvalidArrangement(
                "an arrangement without columns needs an explicit ambient "
                "rank; use Arrangement.empty")
        lengths = {len(c) for c in cols}
        if len(lengths) != 1:
            raise InvalidArrangement("columns of mixed dimension")
        self.ring = ring
        self.ell = lengths.pop()
        self.columns = tuple(cols)
        self.name = name

    @classmethod
    def empty(cls, ring, ell, name=None):
        self = object.__new__(cls)
        self.ring = ring
        self.ell = ell
        self.columns = ()
        self.name = name
        return self

    @property
    def n(self):
        return len(self.columns)

    def coeff_matrix(self, subset):
        cols = [self.columns[j] for j in subset]
        return ms.CoeffMatrix.from_columns(self.ring, cols)

    def column_restriction(self, j):
        """Integer rows of multiplication by column j on Z^(deg*ell)."""
        ring = self.ring
        deg = ring.degree
        rows = []
        for i in range(self.ell):
            for s in range(deg):
                b = ring.one if s == 0 else (0, 1)
                rows.append(list(ring.mul(b, self.columns[j][i])))
        return rows

    def __repr__(self):
        label = self.name or f"{self.n} columns"
        return f"Arrangement({label}, ell={self.ell}, {self.ring!r})"


def arrangement_to_json(A):
    data = {"ring": ring_to_json(A.ring), "columns": []}
    if A.name:
        data["name"] = A.name
    for col in A.columns:
        if A.ring.degree == 1:
            data["columns"].append([x[0] for x in col])
        else:
            data["columns"].append([list(x) for x in col])
    if not A.columns:
        data["ell"] = A.ell
    return data


def arrangement_from_json(data):
    if not isinstance(data, dict):
        raise InvalidArrangement("arrangement file must be a JSON object")
    if "ring" not in data or "columns" not in data:
        raise InvalidArrangement('missing "ring" or "columns"')
    try:
        ring = ring_from_json(data["ring"])
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidArrangement(f"bad ring literal: {exc}") from None
    raw_cols = data["columns"]
    if not isinstance(raw_cols, list):
        raise InvalidArrangement('"columns" must be a list')
    columns = []
    for ci, col in enumerate(raw_cols):
        if not isinstance(col, list):
            raise InvalidArrangement(f"columns[{ci}] must be a list")
        parsed = []
        for ei, x in enumerate(col):
            if ring.degree == 1:
                if not isinstance(x, int):
                    raise InvalidArrangement(
                        f"columns[{ci}][{ei}]: expected an integer")
                parsed.append((x,))
            else:
                if (not isinstance(x, list) or len(x) != 2
                        or not all(isinstance(v, int) for v in x)):
                    raise InvalidArrangement(
                        f"columns[{ci}][{ei}]: expected [a, b]")
                parsed.append(tuple(x))
        columns.append(tuple(parsed))
    name = data.get("name")
    if not columns:
        ell = data.get("ell")
        if not isinstance(ell, int) or ell < 1:
            raise InvalidArrangement('empty arrangement needs integer "ell"')
        return Arrangement.empty(ring, ell, name=name)
    return Arrangement(ring, columns, name=name)


def parse_element_list(ring, text):
    """Parse a JSON list of element literals into coordinate tuples."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArrangement(f"bad element list: {exc}") from None
    if not isinstance(data, list) or not data:
        raise InvalidArrangement("expected a nonempty JSON list of elements")
    out = []
    for i, x in enumerate(data):
        if ring.degree == 1:
            if not isinstance(x, int):
                raise InvalidArrangement(f"element {i}: expected an integer")
            out.append((x,))
        else:
            if isinstance(x, int):
                out.append((x, 0))
            elif (isinstance(x, list) and len(x) == 2
                  and all(isinstance(v, int) for v in x)):
                out.append(tuple(x))
            else:
                raise InvalidArrangement(f"element {i}: expected [a, b]")
    return out


# ---------------------------------------------------------------------------
# subset data and the LCM-period


def subset_data(A):
    """Invariant factors for every J with 1 <= |J| <= min(ell, n)."""
    out = {}
    bound = min(A.ell, A.n)
    for size in range(1, bound + 1):
        for J in combinations(range(A.n), size):
            out[frozenset(J)] = ms.invariant_factors(A.coeff_matrix(J))
    return out


class _MinorSweep:
    """Shared minor cache for column-subset DFS walks."""

    def __init__(self, A):
        self.A = A
        self.ring = A.ring
        self.ell = A.ell
        self.minors = {}
        for i in range(A.ell):
            for j in range(A.n):
                self.minors[((i,), (j,))] = A.columns[j][i]

    def push_column(self, cols_old, j, sizes):
        """Add minors of the given sizes using column j.

        Sizes beyond 1 must come with their building blocks cached, i.e.
        the (size-1)-minors of ``cols_old`` must already be present.
        Returns (added keys, values per size).
        """
        ring = self.ring
        minors = self.minors
        column = self.A.columns[j]
        quadratic = ring.degree == 2
        wt, wn = ring.omega_trace, ring.omega_norm
        added = []
        new_by_size = {1: [minors[((i,), (j,))] for i in range(self.ell)]}
        for size in sizes:
            if size < 2 or size > self.ell:
                continue
            vals = []
            col_subs = list(combinations(cols_old, size - 1))
            for rows in combinations(range(self.ell), size):
                for sub in col_subs:
                    key = (rows, sub + (j,))
                    if quadratic:
                        # Laplace expansion along the new column, with the
                        # quadratic product (a+bw)(e+fw) inlined
                        acc0 = acc1 = 0
                        for t in range(size):
                            rsub = rows[:t] + rows[t + 1:]
                            e, f = minors[(rsub, sub)]
                            a, b = column[rows[t]]
                            bf = b * f
                            if (t + size) % 2:
                                acc0 += a * e - wn * bf
                                acc1 += a * f + b * e + wt * bf
                            else:
                                acc0 -= a * e - wn * bf
                                acc1 -= a * f + b * e + wt * bf
                        acc = (acc0, acc1)
                    else:
                        acc0 = 0
                        for t in range(size):
                            rsub = rows[:t] + rows[t + 1:]
                            term = column[rows[t]][0] * minors[(rsub, sub)][0]
                            acc0 += term if (t + size) % 2 else -term
                        acc = (acc0,)
                    minors[key] = acc
                    added.append(key)
                    vals.append(acc)
            new_by_size[size] = vals
        return added, new_by_size

    def pop(self, added):
        for key in added:
            del self.minors[key]


def _accumulate_ideal(ring, ideal, values):
    """Ideal sum of `ideal` (possibly None) with the nonzero `values`."""
    for g in values:
        if ring.is_zero(g):
            continue
        if ideal is None:
            ideal = Ideal.from_generators(ring, [g])
        elif not (ideal.is_unit_ideal() or ideal.contains(g)):
            ideal = ideal + Ideal.from_generators(ring, [g])
    return ideal


def lcm_period(A, rank_buckets=None):
    """The lcm of the last invariant factors, over independent subsets.

    Dropping columns of a dependent subset at equal rank only grows the
    last invariant factor, so independent subsets already realize the lcm;
    this keeps the walk inside the size bound min(ell, n).

    When ``rank_buckets`` is a dict it collects, per subset size k, the lcm
    of the factors coming from independent subsets of that size.
    """
    ring = A.ring
    unit = Ideal.unit(ring)
    if A.n == 0:
        return unit
    sweep = _MinorSweep(A)
    acc = [unit]
    bound = min(A.ell, A.n)

    def note(k, e_top, e_prev):
        # d = E_k * E_{k-1}^(-1); update acc[0] = lcm(acc[0], d)
        if e_top.is_unit_ideal():
            return
        if rank_buckets is None and e_top.contains_ideal(acc[0] * e_prev):
            return  # d already divides the accumulated lcm
        d = (e_top * e_prev.inverse()).to_integral()
        if not d.contains_ideal(acc[0]):
            acc[0] = acc[0].intersect(d)
        if rank_buckets is not None:
            old = rank_buckets.get(k, unit)
            rank_buckets[k] = old if d.contains_ideal(old) \
                else old.intersect(d)

    def walk(cols, e_top_parent, start):
        # e_top_parent is E_k of the current independent subset; children
        # only ever consume the two top determinantal ideals, and nodes
        # without descendants skip the smaller minors entirely
        k = len(cols)
        recurse = k + 1 < bound
        sizes = range(2, k + 2) if recurse else (k, k + 1)
        for j in range(start, A.n):
            added, new_by_size = sweep.push_column(cols, j, sizes)
            top_vals = new_by_size[k + 1]
            if any(not ring.is_zero(v) for v in top_vals):
                e_top = _accumulate_ideal(ring, None, top_vals)
                if k >= 1:
                    e_prev = _accumulate_ideal(ring, e_top_parent,
                                               new_by_size[k])
                else:
                    e_prev = unit
                note(k + 1, e_top, e_prev)
                if recurse:
                    walk(cols + (j,), e_top, j + 1)
            sweep.pop(added)

    walk((), unit, 0)
    return acc[0]


# ---------------------------------------------------------------------------
# constituents, subset-sum path


class _PrimeValuator:
    """ord at a fixed prime ideal, with cached powers."""

    def __init__(self, prime):
        self.prime = prime
        self.ring = prime.ring
        self._powers = [Ideal.unit(prime.ring), prime]
        self._inert_p = None
        if prime.ring.degree == 2:
            import math
            n = prime.norm
            r = math.isqrt(n)
            if r * r == n and prime == Ideal.principal(
                    prime.ring, prime.ring.from_int(r)):
                self._inert_p = r
        elif prime.ring.degree == 1:
            self._inert_p = prime.hnf[0][0]

    def ord_element(self, x):
        if self._inert_p is not None:
            p = self._inert_p
            v = 0
            coords = list(x)
            while all(c % p == 0 for c in coords):
                v += 1
                coords = [c // p for c in coords]
            return v
        v = 0
        while True:
            power = self._power(v + 1)
            if power.contains(x):
                v += 1
            else:
                return v

    def ord_ideal(self, a):
        v = 0
        while self._power(v + 1).contains_ideal(a):
            v += 1
        return v

    def _power(self, e):
        while len(self._powers) <= e:
            self._powers.append(self._powers[-1] * self.prime)
        return self._powers[e]


def _constituents_subset_sum(A, rho):
    ring = A.ring
    ell = A.ell
    n = A.n
    primes = [p for p, _ in rho.factor()]
    vals = [_PrimeValuator(p) for p in primes]
    np_ = len(primes)
    INF = 10 ** 9
    counts = {}
    sweep = _MinorSweep(A)

    def record(size, rank, evals):
        key = (rank, evals)
        counts[key] = counts.get(key, 0) + (1 if size % 2 == 0 else -1)

    record(0, 0, ())

    def walk(cols, rank, evals, start):
        size = len(cols)
        for j in range(start, n):
            added, new_by_size = sweep.push_column(
                cols, j, range(2, min(size + 1, ell) + 1))
            # child rank
            child_rank = rank
            if rank < ell and size + 1 > rank:
                top = new_by_size.get(rank + 1, ())
                if any(not ring.is_zero(v) for v in top):
                    child_rank = rank + 1
            # child valuations of E_1..E_child_rank (per size, per prime)
            child_evals = []
            for s in range(1, child_rank + 1):
                if s <= rank:
                    base = list(evals[s - 1])
                else:
                    base = [INF] * np_
                news = new_by_size.get(s, ())
                for pi in range(np_):
                    if base[pi] == 0:
                        continue
                    for g in news:
                        if ring.is_zero(g):
                            continue
                        v = vals[pi].ord_element(g)
                        if v < base[pi]:
                            base[pi] = v
                            if v == 0:
                                break
                child_evals.append(tuple(base))
            child_evals = tuple(child_evals)
            rem = n - j - 1
            flat = (child_rank == ell
                    and all(v == 0 for es in child_evals for v in es))
            if flat:
                # every extension keeps rank ell and m = 1, so the signed
                # subtree sum telescopes to zero unless this is a leaf
                if rem == 0:
                    record(size + 1, child_rank, child_evals)
            else:
                record(size + 1, child_rank, child_evals)
                walk(cols + (j,), child_rank, child_evals, j + 1)
            sweep.pop(added)

    walk((), 0, (), 0)

    divisors = rho.divisors()
    kappa_vals = {k: tuple(v.ord_ideal(k) for v in vals) for k in divisors}
    norms = [p.norm for p in primes]
    consts = {}
    for kappa in divisors:
        kv = kappa_vals[kappa]
        coeffs = [0] * (ell + 1)
        for (rank, evals), c in counts.items():
            m = 1
            prev = (0,) * np_
            for es in evals:
                for pi in range(np_):
                    d_ord = es[pi] - prev[pi]
                    e = min(kv[pi], d_ord)
                    if e:
                        m *= norms[pi] ** e
                prev = es
            coeffs[ell - rank] += c * m
        consts[kappa] = tuple(coeffs)
    return QuasiPolynomial(ring, rho, consts)


def constituents(A, path="auto"):
    """The characteristic quasi-polynomial of the arrangement."""
    rho = lcm_period(A)
    if path not in ("auto", "subset", "layers"):
        raise ValueError(f"unknown path {path!r}")
    if path == "subset" and A.n > SUBSET_PATH_MAX_N:
        raise PathInfeasible(
            f"subset-sum path needs n <= {SUBSET_PATH_MAX_N}, got {A.n}")
    if path == "auto":
        path = "subset" if A.n <= AUTO_SUBSET_MAX_N else "layers"
    if path == "subset":
        q = _constituents_subset_sum(A, rho)
    else:
        from .layers import layer_poset
        poset = layer_poset(A, period=rho)
        q = poset.quasi_polynomial()
    for kappa in q.divisors():
        coeffs = q.constituents[kappa]
        if len(coeffs) != A.ell + 1 or coeffs[-1] != 1:
            raise CertificateFailure("constituent is not monic of degree ell")
    return q


def m_value(inv, kappa):
    """|torsion of the kappa-reduced cokernel| = prod N(kappa + d_i)."""
    m = 1
    for d in inv.factors:
        m *= (kappa + d).norm
    return m


def evaluate(A, a, qp=None):
    """Value of the characteristic quasi-polynomial at the ideal a."""
    if qp is None:
        qp = constituents(A)
    return qp.evaluate(a)


# ---------------------------------------------------------------------------
# minimality certificate


@dataclass
class MinimalityCertificate:
    period: Ideal
    minimum: Ideal
    per_dimension: list  # (dim r, lcm of annihilators of the r-dim layers)
    witnesses: dict      # prime -> (kappa1, kappa2) with distinct constituents


def minimality_certificate(A, qp=None, poset=None):
    """Certify that the computed period is the minimum period."""
    if qp is None:
        qp = constituents(A)
    rho = qp.period
    if poset is None:
        from .layers import layer_poset
        poset = layer_poset(A, period=rho)
    unit = Ideal.unit(A.ring)
    per_dim = {r: unit for r in range(A.ell)}
    for layer in poset.layers:
        if layer.dim < A.ell:
            cur = per_dim[layer.dim]
            if not layer.tau.contains_ideal(cur):
                per_dim[layer.dim] = cur.intersect(layer.tau)
    total = unit
    for r, ideal in per_dim.items():
        total = total.intersect(ideal)
    if total != rho:
        raise CertificateFailure(
            "per-dimension annihilator lcms do not reproduce the period")
    minimum, _ = qp.minimum_period()
    if minimum != rho:
        raise CertificateFailure("period reduced below the lcm period")
    witnesses = {}
    divisors = rho.divisors()
    for p, _ in rho.factor():
        reduced = (rho * p.inverse()).to_integral()
        found = None
        for k1, k2 in combinations(divisors, 2):
            if (k1 + reduced) == (k2 + reduced) and \
                    qp.constituents[k1] != qp.constituents[k2]:
                found = (k1, k2)
                break
        if found is None:
            raise CertificateFailure(
                f"no witness pair for prime {p!r}")
        witnesses[p] = found
    per_dimension = sorted(per_dim.items())
    return MinimalityCertificate(rho, minimum, per_dimension, witnesses)


# ---------------------------------------------------------------------------
# localization


@dataclass
class LocalizedArrangement:
    base: Arrangement
    inverted: tuple          # generators of the multiplicative set
    inverted_primes: tuple   # primes of the period that become units
    period: Ideal            # the period with those primes stripped


def localize(A, s_gens, qp=None):
    """Invert the elements of s_gens: strip their primes from the period.

    Residue rings away from the inverted primes are unchanged, so the
    localized quasi-polynomial is the restriction of the original to the
    divisors coprime to every generator.
    """
    ring = A.ring
    gens = [ring.element(g) for g in s_gens]
    for g in gens:
        if ring.is_zero(g):
            raise ZeroInMultiplicativeSet("cannot invert zero")
    if qp is None:
        qp = constituents(A)
    rho = qp.period
    gen_ideals = [Ideal.principal(ring, g) for g in gens]
    stripped = Ideal.unit(ring)
    dead = []
    for p, e in rho.factor():
        if any(p.contains_ideal(gi) for gi in gen_ideals):
            dead.append(p)
        else:
            stripped = stripped * p.pow(e)
    consts = {k: qp.constituents[k] for k in stripped.divisors()}
    local_qp = QuasiPolynomial(ring, stripped, consts)
    view = LocalizedArrangement(A, tuple(gens), tuple(dead), stripped)
    return view, local_qp
