"""Quasi-polynomials on the nonzero ideals of the base ring.

A quasi-polynomial is a period ideal rho together with one integer
polynomial per divisor kappa of rho; its value at an ideal a is the
kappa-constituent evaluated at the absolute norm N(a), where
kappa = a + rho.  Values therefore depend only on gcd(a, rho), which is
the generalized GCD property.
"""

from .errors import RingMismatch
from .ring import Ideal


def poly_eval(coeffs, t):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def poly_add(p, q):
    n = max(len(p), len(q))
    return tuple((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                 for i in range(n))


def poly_to_str(coeffs, var="t"):
    """Deterministic human-readable form, highest degree first."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            body = str(abs(c))
        else:
            tpart = var if i == 1 else f"{var}^{i}"
            body = tpart if abs(c) == 1 else f"{abs(c)}*{tpart}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class QuasiPolynomial:
    """Period ideal plus one constituent polynomial per divisor."""

    __slots__ = ("ring", "period", "constituents", "_divisors")

    def __init__(self, ring, period, constituents):
        self.ring = ring
        self.period = period
        divisors = period.divisors()
        if set(constituents) != set(divisors):
            raise ValueError("constituents must cover the period divisors")
        self.constituents = {k: tuple(constituents[k]) for k in divisors}
        self._divisors = divisors

    @classmethod
    def constant_zero(cls, ring):
        return cls(ring, Ideal.unit(ring), {Ideal.unit(ring): (0,)})

    def divisors(self):
        return list(self._divisors)

    def constituent(self, kappa):
        """The constituent for any ideal: kappa is reduced to gcd(kappa, rho)."""
        key = kappa + self.period
        return self.constituents[key]

    def evaluate(self, a):
        if a.ring != self.ring:
            raise RingMismatch("ideal from a different ring")
        return poly_eval(self.constituent(a), a.norm)

    def __add__(self, other):
        if self.ring != other.ring:
            raise RingMismatch("cannot add across rings")
        period = self.period.intersect(other.period)
        consts = {}
        for kappa in period.divisors():
            consts[kappa] = poly_add(self.constituent(kappa),
                                     other.constituent(kappa))
        return QuasiPolynomial(self.ring, period, consts)

    def __eq__(self, other):
        return (isinstance(other, QuasiPolynomial)
                and self.ring == other.ring and self.period == other.period
                and self.constituents == other.constituents)

    def with_period(self, period):
        """Reindex to a multiple of the current period."""
        if not self.period.divides(period):
            raise ValueError("new period must be a multiple")
        consts = {k: self.constituent(k) for k in period.divisors()}
        return QuasiPolynomial(self.ring, period, consts)

    def minimum_period(self):
        """Return (minimal period, reindexed quasi-polynomial).

        Greedy per-prime reduction: since the periods of a quasi-polynomial
        are exactly the multiples of the minimum period, rho/p is a period
        iff the minimum still divides it, so stripping one prime at a time
        reaches the minimum.
        """
        period = self.period
        consts = dict(self.constituents)
        changed = True
        while changed:
            changed = False
            for p, _ in period.factor():
                candidate = (period * p.inverse()).to_integral()
                cand_divs = candidate.divisors()
                # rho/p is a period iff constituents agree on fibers of
                # kappa -> kappa + rho/p
                ok = True
                for kappa, coeffs in consts.items():
                    rep = kappa + candidate
                    if consts[_find(consts, rep)] != coeffs:
                        ok = False
                        break
                if ok:
                    period = candidate
                    consts = {k: consts[_find(consts, k)] for k in cand_divs}
                    changed = True
                    break
        return period, QuasiPolynomial(self.ring, period, consts)

    def to_json_dict(self):
        from .ring import format_factored
        return {
            "ring": ring_to_json(self.ring),
            "period": {
                "generators": [list(g) for g in self.period.basis()],
                "hnf": [list(r) for r in self.period.hnf],
                "factored": format_factored(self.period),
            },
            "constituents": [
                {
                    "kappa": [list(g) for g in k.basis()],
                    "kappa_hnf": [list(r) for r in k.hnf],
                    "kappa_factored": format_factored(k),
                    "coeffs": list(self.constituents[k]),
                }
                for k in self._divisors
            ],
        }

    @classmethod
    def from_json_dict(cls, data):
        ring = ring_from_json(data["ring"])
        period = Ideal.from_generators(
            ring, [tuple(g) for g in data["period"]["generators"]])
        consts = {}
        for entry in data["constituents"]:
            k = Ideal.from_generators(
                ring, [tuple(g) for g in entry["kappa"]])
            consts[k] = tuple(entry["coeffs"])
        return cls(ring, period, consts)

    def __repr__(self):
        parts = ", ".join(
            f"{k!r}: {poly_to_str(v)}" for k, v in self.constituents.items())
        return f"QuasiPolynomial(period={self.period!r}, {{{parts}}})"


def _find(consts, ideal):
    # dict keys are canonical Ideal objects; direct hit expected
    if ideal in consts:
        return ideal
    raise KeyError(f"no constituent for {ideal!r}")


def qp_evaluate(q, a):
    return q.evaluate(a)


def qp_sum(q1, q2):
    return q1 + q2


def qp_minimum_period(q):
    return q.minimum_period()


def ring_to_json(ring):
    if ring.kind == "Z":
        return {"type": "Z"}
    return {"type": "quadratic", "d": ring.d}


def ring_from_json(data):
    from .ring import Ring
    if data.get("type") == "Z":
        return Ring("Z")
    if data.get("type") == "quadratic":
        return Ring("quadratic", int(data["d"]))
    raise ValueError(f"unknown ring literal: {data!r}")
