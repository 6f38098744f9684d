"""Built-in arrangements: positive roots of H2, H3, H4 over Z[tau].

tau = (1+sqrt(5))/2 is the fundamental unit of the maximal order of
Q(sqrt 5); in the ring encoding an entry a + b*tau is the pair (a, b).
The matrices are transcriptions of the positive-root coefficient tables;
``generated_positive_roots`` recomputes them from the simple roots by
reflection closure, which the test suite uses to guard the data entry.
"""

from dataclasses import dataclass

from .charquasi import Arrangement
from .errors import UnknownName
from .ring import quadratic

_Z_TAU = quadratic(5)

# entry shorthand: (a, b) means a + b*tau
_0 = (0, 0)
_1 = (1, 0)
_2 = (2, 0)
_T = (0, 1)       # tau
_T1 = (1, 1)      # tau + 1 (= tau^2)
_T2 = (2, 1)      # tau + 2
_2T = (0, 2)      # 2 tau
_2T1 = (1, 2)
_2T2 = (2, 2)
_3T1 = (1, 3)
_3T2 = (2, 3)
_3T3 = (3, 3)
_4T2 = (2, 4)

_H2_ROWS = [
    [_1, _0, _T, _1, _T],
    [_0, _1, _1, _T, _T],
]

_H3_ROWS = [
    [_1, _0, _T, _1, _T, _0, _0, _T, _T, _T1, _1, _T, _T, _T1, _T1],
    [_0, _1, _1, _T, _T, _0, _1, _1, _T1, _T1, _T, _T, _T1, _T1, _2T],
    [_0, _0, _0, _0, _0, _1, _1, _1, _1, _1, _T, _T, _T, _T, _T],
]

_H4_ROWS = [
    # columns 1-10
    [_1, _0, _1, _T, _T, _0, _0, _T, _T, _T1,
     # columns 11-20
     _1, _T, _T, _T1, _T1, _0, _0, _0, _T, _T,
     # columns 21-30
     _T1, _T, _T1, _T1, _2T1, _2T1, _2T1, _1, _T, _T,
     # columns 31-40
     _T1, _T1, _T, _T1, _T1, _2T1, _2T1, _T1, _T1, _2T1,
     # columns 41-50
     _2T1, _2T2, _2T1, _2T1, _2T2, _3T1, _2T2, _2T1, _2T1, _2T1,
     # columns 51-60
     _2T2, _2T2, _3T1, _2T2, _3T1, _3T1, _3T2, _3T2, _3T2, _3T2],
    [_0, _1, _T, _1, _T, _0, _1, _1, _T1, _T1,
     _T, _T, _T1, _T1, _2T, _0, _0, _1, _1, _T1,
     _T1, _T1, _T1, _2T1, _2T1, _2T2, _2T2, _T, _T, _T1,
     _T1, _2T, _T1, _T1, _2T1, _2T1, _2T2, _2T, _2T1, _2T1,
     _3T1, _3T1, _2T2, _3T1, _3T1, _3T2, _3T2, _2T2, _2T2, _3T1,
     _3T1, _3T2, _3T2, _3T2, _3T2, _3T3, _3T3, _4T2, _4T2, _4T2],
    [_0, _0, _0, _0, _0, _1, _1, _1, _1, _1,
     _T, _T, _T, _T, _T, _0, _1, _1, _1, _1,
     _1, _T1, _T1, _T1, _T1, _T1, _T2, _T, _T, _T,
     _T, _T, _T1, _T1, _T1, _T1, _T1, _2T, _2T, _2T,
     _2T, _2T, _2T1, _2T1, _2T1, _2T1, _2T1, _T2, _2T1, _2T1,
     _2T1, _2T1, _2T1, _2T2, _2T2, _2T2, _2T2, _2T2, _3T1, _3T1],
    [_0, _0, _0, _0, _0, _0, _0, _0, _0, _0,
     _0, _0, _0, _0, _0, _1, _1, _1, _1, _1,
     _1, _1, _1, _1, _1, _1, _1, _T, _T, _T,
     _T, _T, _T, _T, _T, _T, _T, _T, _T, _T,
     _T, _T, _T, _T, _T, _T, _T, _T1, _T1, _T1,
     _T1, _T1, _T1, _T1, _T1, _T1, _T1, _T1, _T1, _2T],
]

_DATA = {
    "H2": (_H2_ROWS, 2, 5, 5),
    "H3": (_H3_ROWS, 3, 15, 10),
    "H4": (_H4_ROWS, 4, 60, 30),
}

# Coxeter graph: consecutive nodes bonded, the first bond is a 5
_BONDS = {"H2": {(0, 1): 5},
          "H3": {(0, 1): 5, (1, 2): 3},
          "H4": {(0, 1): 5, (1, 2): 3, (2, 3): 3}}


@dataclass
class RootSystemData:
    name: str
    arrangement: Arrangement
    coxeter_number: int
    rank: int
    n_positive: int


def builtin(name):
    """The positive-root coefficient arrangement of H2, H3 or H4."""
    key = name.upper()
    if key not in _DATA:
        raise UnknownName(f"unknown root system {name!r} (H2, H3, H4)")
    rows, rank, n, h = _DATA[key]
    columns = [tuple(rows[i][j] for i in range(rank)) for j in range(n)]
    A = Arrangement(_Z_TAU, columns, name=key)
    assert A.ell == rank and A.n == n
    return RootSystemData(key, A, h, rank, n)


def _gram_twice(name):
    """The matrix 2<alpha_i, alpha_j> for unit-length simple roots."""
    rank = _DATA[name][1]
    B = [[_0 for _ in range(rank)] for _ in range(rank)]
    for i in range(rank):
        B[i][i] = _2
    for (i, j), bond in _BONDS[name].items():
        val = (0, -1) if bond == 5 else (-1, 0)  # -2cos(pi/5) = -tau
        B[i][j] = val
        B[j][i] = val
    return B


def _real_sign(x):
    """Sign of a + b*tau as a real number."""
    a, b = x
    u = 2 * a + b      # a + b*tau = (u + b*sqrt(5)) / 2
    w = b
    if u == 0 and w == 0:
        return 0
    if u >= 0 and w >= 0:
        return 1
    if u <= 0 and w <= 0:
        return -1
    if u > 0:
        return 1 if u * u > 5 * w * w else -1
    return 1 if 5 * w * w > u * u else -1


def generated_positive_roots(name):
    """Positive roots regenerated by reflection closure of the simple roots."""
    key = name.upper()
    if key not in _DATA:
        raise UnknownName(f"unknown root system {name!r}")
    rank = _DATA[key][1]
    ring = _Z_TAU
    B = _gram_twice(key)
    simple = [tuple(_1 if i == j else _0 for i in range(rank))
              for j in range(rank)]

    def reflect(v, j):
        coeff = ring.zero
        for i in range(rank):
            coeff = ring.add(coeff, ring.mul(v[i], B[i][j]))
        out = list(v)
        out[j] = ring.sub(out[j], coeff)
        return tuple(out)

    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for j in range(rank):
                w = reflect(v, j)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    positive = [v for v in roots
                if all(_real_sign(c) >= 0 for c in v)]
    return sorted(positive)


def verify_transcription(name):
    """Check the stored matrix against the reflection-generated roots."""
    data = builtin(name)
    generated = generated_positive_roots(name)
    stored = sorted(data.arrangement.columns)
    if len(generated) != data.n_positive:
        return False
    return stored == generated
