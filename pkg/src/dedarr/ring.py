"""Base rings (Z and maximal quadratic orders) and their ideal arithmetic.

Elements are plain integer tuples: ``(a,)`` over Z, ``(a, b)`` meaning
a + b*w over a quadratic order, where w = (1+sqrt(d))/2 when d = 1 mod 4
and w = sqrt(d) otherwise.  Ideals are full-rank integer row lattices in
the basis {1, w}, held in Hermite normal form, which makes equality,
membership, norms and intersections exact and canonical.
"""

import math
from dataclasses import dataclass

from . import zlinalg as zl
from .errors import (
    AllGeneratorsZero,
    BudgetExceeded,
    NormFactorizationTooLarge,
    NotPrime,
    RingMismatch,
)

TRIAL_DIVISION_BOUND = 10 ** 6
FACTOR_BUDGET = 2 ** 63
RESIDUE_BUDGET = 10 ** 7


def _is_squarefree(d):
    n = abs(d)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        while n % f == 0:
            n //= f
        f += 1
    return True


@dataclass(frozen=True)
class Ring:
    """The base domain: the rational integers or a maximal quadratic order."""

    kind: str  # "Z" or "quadratic"
    d: int = 0

    def __post_init__(self):
        if self.kind == "Z":
            object.__setattr__(self, "d", 0)
        elif self.kind == "quadratic":
            if self.d in (0, 1) or not _is_squarefree(self.d):
                raise ValueError(f"d must be squarefree and != 0, 1: {self.d}")
        else:
            raise ValueError(f"unknown ring kind: {self.kind}")
        # cached constants; w satisfies w^2 = t*w - n
        deg = 1 if self.kind == "Z" else 2
        object.__setattr__(self, "degree", deg)
        object.__setattr__(self, "omega_trace",
                           1 if self.d % 4 == 1 else 0)
        object.__setattr__(self, "omega_norm",
                           (1 - self.d) // 4 if self.d % 4 == 1 else -self.d)
        object.__setattr__(self, "zero", (0,) * deg)
        object.__setattr__(self, "one", (1,) + (0,) * (deg - 1))

    def symbol(self):
        return "w"

    # -- element arithmetic (tuples of length `degree`) --

    def from_int(self, a):
        return (a,) + (0,) * (self.degree - 1)

    def element(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.degree:
            if self.degree == 1 and len(coords) == 2 and coords[1] == 0:
                return (coords[0],)
            raise ValueError(f"expected {self.degree} coordinates: {coords}")
        return coords

    def add(self, x, y):
        return tuple(u + v for u, v in zip(x, y))

    def sub(self, x, y):
        return tuple(u - v for u, v in zip(x, y))

    def neg(self, x):
        return tuple(-u for u in x)

    def mul(self, x, y):
        if self.degree == 1:
            return (x[0] * y[0],)
        a, b = x
        e, f = y
        t, n = self.omega_trace, self.omega_norm
        bf = b * f
        return (a * e - n * bf, a * f + b * e + t * bf)

    def omega_mul(self, x):
        """w * x."""
        if self.degree == 1:
            return x
        a, b = x
        t, n = self.omega_trace, self.omega_norm
        return (-n * b, a + t * b)

    def conj(self, x):
        if self.degree == 1:
            return x
        a, b = x
        return (a + self.omega_trace * b, -b)

    def norm(self, x):
        """Field norm down to Z (can be negative for real quadratic)."""
        if self.degree == 1:
            return x[0]
        a, b = x
        return a * a + self.omega_trace * a * b + self.omega_norm * b * b

    def is_zero(self, x):
        return not any(x)

    def mul_rows(self, x):
        """Rows of the multiplication-by-x map on Z^degree coordinates."""
        if self.degree == 1:
            return [[x[0]]]
        return [list(x), list(self.omega_mul(x))]

    def format_element(self, x):
        if self.degree == 1:
            return str(x[0])
        a, b = x
        w = self.symbol()
        if b == 0:
            return str(a)
        wterm = w if b == 1 else (f"-{w}" if b == -1 else f"{b}{w}")
        if a == 0:
            return wterm
        return f"{a}+{wterm}" if not wterm.startswith("-") else f"{a}{wterm}"

    def __repr__(self):
        return "Z" if self.kind == "Z" else f"Z[w], w=(1+sqrt({self.d}))/2" \
            if self.d % 4 == 1 else f"Z[sqrt({self.d})]"


def rational_integers():
    return Ring("Z")


def quadratic(d):
    return Ring("quadratic", d)


def _check_same_ring(a, b):
    if a.ring != b.ring:
        raise RingMismatch(f"different rings: {a.ring!r} vs {b.ring!r}")


class Ideal:
    """A nonzero ideal of the ring, as an HNF integer lattice."""

    __slots__ = ("ring", "hnf", "_pivots", "_norm")

    def __init__(self, ring, hnf_rows):
        self.ring = ring
        self.hnf = tuple(tuple(r) for r in hnf_rows)
        self._pivots = list(range(ring.degree))
        self._norm = 1
        for i in range(ring.degree):
            self._norm *= self.hnf[i][i]

    # -- construction --

    @classmethod
    def from_generators(cls, ring, gens):
        gens = [ring.element(g) for g in gens]
        gens = [g for g in gens if not ring.is_zero(g)]
        if not gens:
            raise AllGeneratorsZero("an ideal needs a nonzero generator")
        rows = []
        for g in gens:
            rows.append(list(g))
            if ring.degree == 2:
                rows.append(list(ring.omega_mul(g)))
        basis, pivots = zl.hnf(rows)
        if len(basis) < ring.degree:
            raise AllGeneratorsZero("generators span a rank-deficient lattice")
        return cls(ring, basis)

    @classmethod
    def principal(cls, ring, g):
        return cls.from_generators(ring, [g])

    @classmethod
    def unit(cls, ring):
        return cls(ring, zl.identity(ring.degree))

    # -- basics --

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and self.hnf == other.hnf)

    def __hash__(self):
        return hash((self.ring, self.hnf))

    def __repr__(self):
        gens = ", ".join(self.ring.format_element(g) for g in self.basis())
        return f"<{gens}>"

    def sort_key(self):
        return (self._norm, self.hnf)

    def basis(self):
        return [tuple(r) for r in self.hnf]

    @property
    def norm(self):
        return self._norm

    def is_unit_ideal(self):
        return self._norm == 1

    def contains(self, x):
        return zl.in_lattice(list(x), [list(r) for r in self.hnf],
                             self._pivots)

    def contains_ideal(self, other):
        _check_same_ring(self, other)
        return all(self.contains(r) for r in other.hnf)

    def divides(self, other):
        """a | b  iff  a contains b."""
        return self.contains_ideal(other)

    def least_integer(self):
        """The least positive rational integer contained in the ideal."""
        if self.ring.degree == 1:
            return self.hnf[0][0]
        a, b = self.hnf[0][0], self.hnf[0][1]
        c = self.hnf[1][1]
        return a * c // math.gcd(b, c)

    def smallest_generators(self):
        """A short, deterministic generating set (the HNF basis rows)."""
        return self.basis()

    # -- arithmetic --

    def __add__(self, other):
        _check_same_ring(self, other)
        basis, _ = zl.hnf([list(r) for r in self.hnf]
                          + [list(r) for r in other.hnf])
        return Ideal(self.ring, basis)

    def __mul__(self, other):
        if isinstance(other, FractionalIdeal):
            return FractionalIdeal(self, 1) * other
        _check_same_ring(self, other)
        ring = self.ring
        rows = []
        for x in self.hnf:
            for y in other.hnf:
                rows.append(list(ring.mul(x, y)))
        basis, _ = zl.hnf(rows)
        return Ideal(ring, basis)

    def intersect(self, other):
        _check_same_ring(self, other)
        rows = zl.intersect([list(r) for r in self.hnf],
                            [list(r) for r in other.hnf])
        return Ideal(self.ring, rows)

    def conj(self):
        ring = self.ring
        rows = [list(ring.conj(r)) for r in self.hnf]
        basis, _ = zl.hnf(rows)
        return Ideal(ring, basis)

    def inverse(self):
        """The fractional-ideal inverse."""
        if self.ring.degree == 1:
            return FractionalIdeal(Ideal.unit(self.ring),
                                   self.hnf[0][0]).reduced()
        # in a maximal quadratic order, a * conj(a) = <N(a)>
        return FractionalIdeal(self.conj(), self._norm).reduced()

    def colon(self, k):
        """(self : k) = {x : x*k inside self}, an integral ideal."""
        _check_same_ring(self, k)
        frac = FractionalIdeal(self, 1) * (k + self).inverse()
        return frac.to_integral()

    def pow(self, e):
        result = Ideal.unit(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- residues --

    def reduce_element(self, x):
        """Canonical coset representative of x modulo the ideal."""
        return tuple(zl.reduce_mod(list(x), [list(r) for r in self.hnf],
                                   self._pivots))

    def residues(self, budget=RESIDUE_BUDGET):
        """All residue classes, canonically reduced."""
        if self._norm > budget:
            raise BudgetExceeded(
                f"residue system of size {self._norm} exceeds {budget}")
        if self.ring.degree == 1:
            return [(u,) for u in range(self.hnf[0][0])]
        a = self.hnf[0][0]
        c = self.hnf[1][1]
        return [(u, v) for u in range(a) for v in range(c)]

    # -- primality and factorization --

    def is_prime(self):
        n = self._norm
        if n == 1:
            return False
        if _is_prime_int(n):
            if self.ring.degree == 1:
                return True
            # norm-p ideals of a maximal order are prime
            return True
        if self.ring.degree == 2:
            r = _int_sqrt(n)
            if r * r == n and _is_prime_int(r):
                if self != Ideal.principal(self.ring, self.ring.from_int(r)):
                    return False
                # <r> is prime exactly when r is inert, i.e. the minimal
                # polynomial of w has no root mod r
                t, nn = self.ring.omega_trace, self.ring.omega_norm
                return all((x * x - t * x + nn) % r for x in range(r))
        return False

    def factor(self):
        """Prime factorization, deterministically ordered."""
        ring = self.ring
        if self.is_unit_ideal():
            return PrimeFactorization(ring, ())
        factors = {}
        for p, _ in sorted(_factor_int(self._norm).items()):
            for prime in _primes_above(ring, p):
                e = ord_p(self, prime)
                if e:
                    factors[prime] = e
        items = sorted(factors.items(), key=lambda kv: kv[0].sort_key())
        fact = PrimeFactorization(ring, tuple(items))
        if fact.product() != self:
            raise AssertionError("factorization failed to reassemble")
        return fact

    def divisors(self):
        """All divisors, sorted by (norm, HNF)."""
        fact = self.factor()
        divs = [Ideal.unit(self.ring)]
        for p, e in fact.factors:
            powers = [p.pow(i) for i in range(e + 1)]
            divs = [d * q for d in divs for q in powers]
        return sorted(divs, key=Ideal.sort_key)


class FractionalIdeal:
    """An integral ideal scaled by 1/denominator."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator):
        if denominator <= 0:
            raise ValueError("denominator must be positive")
        self.numerator = numerator
        self.denominator = denominator

    def reduced(self):
        g = self.denominator
        for row in self.numerator.hnf:
            for x in row:
                g = math.gcd(g, x)
        if g == 1:
            return self
        rows = [[x // g for x in row] for row in self.numerator.hnf]
        return FractionalIdeal(Ideal(self.numerator.ring, rows),
                               self.denominator // g)

    def is_integral(self):
        return self.reduced().denominator == 1

    def to_integral(self):
        red = self.reduced()
        if red.denominator != 1:
            raise ValueError("fractional ideal is not integral")
        return red.numerator

    def __mul__(self, other):
        if isinstance(other, Ideal):
            other = FractionalIdeal(other, 1)
        return FractionalIdeal(self.numerator * other.numerator,
                               self.denominator * other.denominator).reduced()

    def __eq__(self, other):
        a, b = self.reduced(), other.reduced()
        return a.numerator == b.numerator and a.denominator == b.denominator

    def __hash__(self):
        red = self.reduced()
        return hash((red.numerator, red.denominator))

    def __repr__(self):
        return f"{self.numerator!r}/{self.denominator}"


class PrimeFactorization:
    """Sorted list of (prime ideal, exponent) pairs."""

    __slots__ = ("ring", "factors")

    def __init__(self, ring, factors):
        self.ring = ring
        self.factors = factors

    def product(self):
        result = Ideal.unit(self.ring)
        for p, e in self.factors:
            result = result * p.pow(e)
        return result

    def primes(self):
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __repr__(self):
        if not self.factors:
            return "<1>"
        return " * ".join(f"{p!r}^{e}" if e > 1 else repr(p)
                          for p, e in self.factors)


# -- module-level operation names --

def ideal_from_generators(ring, gens):
    return Ideal.from_generators(ring, gens)


def ideal_sum(a, b):
    return a + b


def ideal_product(a, b):
    return a * b


def ideal_intersection(a, b):
    return a.intersect(b)


def ideal_norm(a):
    return a.norm


def ideal_colon(a, k):
    return a.colon(k)


def factor_ideal(a):
    return a.factor()


def divisors(a):
    return a.divisors()


def residues(a, budget=RESIDUE_BUDGET):
    return a.residues(budget)


def ord_p(a, p):
    """Largest e with p^e dividing a."""
    if not p.is_prime():
        raise NotPrime(f"{p!r} is not prime")
    e = 0
    power = p
    while power.divides(a):
        e += 1
        power = power * p
    return e


# -- integer factorization helpers --

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def _is_prime_int(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_sqrt(n):
    return math.isqrt(n)


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    x, c = 2, 1
    while True:
        y = x
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1
        x = c


def _factor_int(n):
    """Factor a positive integer; raises past the configured budget."""
    if n > FACTOR_BUDGET:
        raise NormFactorizationTooLarge(f"{n} exceeds 2^63 budget")
    factors = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    f = 7
    while f * f <= n and f <= TRIAL_DIVISION_BOUND:
        while n % f == 0:
            factors[f] = factors.get(f, 0) + 1
            n //= f
        f += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime_int(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


def _primes_above(ring, p):
    """The prime ideals of the ring above the rational prime p, sorted."""
    if ring.degree == 1:
        return [Ideal.principal(ring, (p,))]
    t, n = ring.omega_trace, ring.omega_norm
    roots = [r for r in range(p) if (r * r - t * r + n) % p == 0]
    if not roots:
        return [Ideal.principal(ring, ring.from_int(p))]
    primes = {Ideal.from_generators(ring, [ring.from_int(p), (-r, 1)])
              for r in roots}
    return sorted(primes, key=Ideal.sort_key)


def primes_above(ring, p):
    return _primes_above(ring, p)


def ideals_of_norm_up_to(ring, bound):
    """All nonzero ideals of norm <= bound, sorted by (norm, HNF)."""
    primes = []
    for p in range(2, bound + 1):
        if _is_prime_int(p):
            for prime in _primes_above(ring, p):
                if prime.norm <= bound:
                    primes.append(prime)
    result = [Ideal.unit(ring)]
    for prime in primes:
        extra = []
        for ideal in result:
            power = ideal
            while True:
                power = power * prime
                if power.norm > bound:
                    break
                extra.append(power)
        result.extend(extra)
    return sorted(result, key=Ideal.sort_key)


def format_factored(ideal_or_fact):
    """Deterministic factored form like "p2^1*q3^2" (primes by norm)."""
    fact = (ideal_or_fact if isinstance(ideal_or_fact, PrimeFactorization)
            else ideal_or_fact.factor())
    if not fact.factors:
        return "1"
    letters = "pqrstuvabcdefghijklmno"
    parts = []
    for i, (prime, e) in enumerate(fact.factors):
        letter = letters[i % len(letters)]
        parts.append(f"{letter}{prime.norm}^{e}")
    return "*".join(parts)
