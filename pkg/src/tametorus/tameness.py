"""Tameness deciders for affine self-maps of the d-torus, with certificates.

A semicascade (iteration semigroup) of x -> Ax + b is tame exactly when
the power semigroup {A^n} is finite, i.e. A^p = A^q for some p < q; a
cascade (iteration group, requiring |det A| = 1) is tame exactly when
A^m = I for some m >= 1. Both conditions are decided here without any
polynomial factorization:

  1. compute the minimal polynomial mu of A and split mu = x^k * g,
  2. g must be squarefree (gcd(g, g') constant), otherwise untame,
  3. g must divide x^s - 1 for some s, i.e. x must have finite
     multiplicative order modulo g; the order, if it exists, is at most
     s_max(d), computed from the degrees of cyclotomic polynomials,

which yields the least pair (k, k+s) respectively the least order m = s.
An independent brute-force oracle (exact power enumeration) and a
certificate re-checker make every verdict self-validating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DeterminantNotUnitError
from .exactalg import IntMatrix, RatPoly, mat_mul, min_poly, poly_gcd, strip_x_factor

__all__ = [
    "TAME",
    "UNTAME",
    "SEMICASCADE",
    "CASCADE",
    "NON_SQUAREFREE",
    "ORDER_BOUND_EXHAUSTED",
    "ZERO_EIGENVALUE",
    "UntameWitness",
    "TamenessCertificate",
    "OrderBoundTable",
    "euler_phi",
    "inverse_phi",
    "order_bound",
    "order_of_x_mod",
    "decide_semicascade",
    "decide_cascade",
    "oracle_semicascade",
    "certificate_check",
]

TAME = "TAME"
UNTAME = "UNTAME"
SEMICASCADE = "SEMICASCADE"
CASCADE = "CASCADE"

NON_SQUAREFREE = "NON_SQUAREFREE"
ORDER_BOUND_EXHAUSTED = "ORDER_BOUND_EXHAUSTED"
ZERO_EIGENVALUE = "ZERO_EIGENVALUE"


@dataclass(frozen=True)
class UntameWitness:
    """Proof data for an UNTAME verdict.

    reason NON_SQUAREFREE: the x-stripped minimal polynomial g has a
    repeated factor, which is impossible for a divisor of the squarefree
    x^s - 1. reason ORDER_BOUND_EXHAUSTED: x^s mod g != 1 for every
    1 <= s <= s_max, and no larger s can work because the order of x
    modulo a degree-<=d divisor of x^s - 1 is at most s_max(d).
    """

    reason: str
    stripped_min_poly: RatPoly
    s_max: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {
            "reason": self.reason,
            "stripped_min_poly": [int(c) for c in self.stripped_min_poly.int_coeffs()],
        }
        if self.s_max is not None:
            out["s_max"] = self.s_max
        if self.detail:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "UntameWitness":
        return cls(
            reason=data["reason"],
            stripped_min_poly=RatPoly(data["stripped_min_poly"]),
            s_max=data.get("s_max"),
            detail=data.get("detail", ""),
        )


@dataclass(frozen=True)
class TamenessCertificate:
    """Verdict plus the data needed to re-verify it from scratch."""

    verdict: str
    kind: str
    index_k: int | None = None
    period_s: int | None = None
    minimal_pair: tuple[int, int] | None = None
    minimal_order_m: int | None = None
    witness: UntameWitness | None = None

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "kind": self.kind}
        if self.index_k is not None:
            out["index_k"] = self.index_k
        if self.period_s is not None:
            out["period_s"] = self.period_s
        if self.minimal_pair is not None:
            out["minimal_pair"] = list(self.minimal_pair)
        if self.minimal_order_m is not None:
            out["minimal_order_m"] = self.minimal_order_m
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TamenessCertificate":
        pair = data.get("minimal_pair")
        witness = data.get("witness")
        return cls(
            verdict=data["verdict"],
            kind=data["kind"],
            index_k=data.get("index_k"),
            period_s=data.get("period_s"),
            minimal_pair=tuple(pair) if pair is not None else None,
            minimal_order_m=data.get("minimal_order_m"),
            witness=UntameWitness.from_dict(witness) if witness is not None else None,
        )


@dataclass(frozen=True)
class OrderBoundTable:
    """Finite search bound for root-of-unity orders in dimension d.

    admissible_orders holds every n with euler_phi(n) <= d; s_max is the
    largest lcm over subsets of distinct admissible orders whose phi
    values sum to at most d. Any squarefree monic integer divisor g of
    some x^s - 1 with deg g <= d is a product of distinct cyclotomic
    polynomials whose degrees phi(n_i) sum to deg g, so the order of x
    modulo g (the lcm of the n_i) is at most s_max.
    """

    d: int
    admissible_orders: frozenset[int]
    s_max: int


def euler_phi(n: int) -> int:
    """Euler's totient by trial-division factorization."""
    if n < 1:
        raise ValueError("totient requires n >= 1")
    result = n
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if n > 1:
        result -= result // n
    return result


def inverse_phi(m: int) -> set[int]:
    """All n with euler_phi(n) = m.

    phi(n) >= sqrt(n/2) for every n >= 1, so phi(n) = m forces
    n <= 2*m*m; an exhaustive scan of that range is complete.
    """
    if m < 1:
        raise ValueError("totient values are positive")
    return {n for n in range(1, 2 * m * m + 1) if euler_phi(n) == m}


@lru_cache(maxsize=None)
def order_bound(d: int) -> OrderBoundTable:
    """Bound table for dimension d, by exhaustive subset enumeration.

    The depth-first walk below visits exactly the subsets of distinct
    admissible orders whose phi values fit in the remaining budget, so it
    is an exhaustive enumeration with infeasible branches skipped.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    admissible = sorted(n for m in range(1, d + 1) for n in inverse_phi(m))
    phis = [euler_phi(n) for n in admissible]

    best = 1

    def walk(start: int, budget: int, acc_lcm: int) -> None:
        nonlocal best
        if acc_lcm > best:
            best = acc_lcm
        for i in range(start, len(admissible)):
            if phis[i] <= budget:
                walk(i + 1, budget - phis[i], math.lcm(acc_lcm, admissible[i]))

    walk(0, d, 1)
    return OrderBoundTable(d=d, admissible_orders=frozenset(admissible), s_max=best)


def order_of_x_mod(g: RatPoly, s_max: int):
    """Least s <= s_max with x^s = 1 in Q[x]/(g), or None.

    g must be nonzero with nonzero constant term; it is normalized to be
    monic. Works by repeated multiplication by x with reduction modulo g,
    so the first s found is the least one.
    """
    if g.is_zero:
        raise ValueError("modulus polynomial must be nonzero")
    g = g.monic()
    if g.coeffs[0] == 0:
        raise ValueError("modulus polynomial must have nonzero constant term")
    deg = g.degree
    if deg == 0:
        # Quotient ring is trivial; every power of x equals 1 there.
        return 1
    # residue[i] is the coefficient of x^i of x^s mod g
    residue = [Fraction(0)] * deg
    one = [Fraction(0)] * deg
    one[0] = Fraction(1)
    residue[0] = Fraction(1)
    for s in range(1, s_max + 1):
        lead = residue[-1]
        residue = [Fraction(0)] + residue[:-1]
        if lead != 0:
            for i in range(deg):
                residue[i] -= lead * g.coeffs[i]
        if residue == one:
            return s
    return None


def _semicascade_certificate(a: IntMatrix) -> TamenessCertificate:
    mu = min_poly(a)
    k, g = strip_x_factor(mu)
    table = order_bound(a.d)
    if g.degree == 0:
        # Nilpotent linear part: A^k = A^{k+1} = 0; period 1 by convention.
        return TamenessCertificate(
            verdict=TAME,
            kind=SEMICASCADE,
            index_k=k,
            period_s=1,
            minimal_pair=(k, k + 1),
        )
    if poly_gcd(g, g.derivative()).degree != 0:
        witness = UntameWitness(
            reason=NON_SQUAREFREE,
            stripped_min_poly=g,
            detail="x-stripped minimal polynomial %s has a repeated factor; "
            "a divisor of the squarefree x^s - 1 cannot" % g,
        )
        return TamenessCertificate(verdict=UNTAME, kind=SEMICASCADE, witness=witness)
    s = order_of_x_mod(g, table.s_max)
    if s is None:
        witness = UntameWitness(
            reason=ORDER_BOUND_EXHAUSTED,
            stripped_min_poly=g,
            s_max=table.s_max,
            detail="x^s mod %s != 1 for all 1 <= s <= %d, the complete order "
            "bound for dimension %d" % (g, table.s_max, a.d),
        )
        return TamenessCertificate(verdict=UNTAME, kind=SEMICASCADE, witness=witness)
    return TamenessCertificate(
        verdict=TAME,
        kind=SEMICASCADE,
        index_k=k,
        period_s=s,
        minimal_pair=(k, k + s),
    )


def decide_semicascade(a: IntMatrix) -> TamenessCertificate:
    """Decide tameness of the iteration semigroup of x -> Ax + b.

    The translation part plays no role: tameness depends only on whether
    the powers of A form a finite semigroup. TAME certificates carry the
    least pair (p, q) = (k, k+s) with A^p = A^q, where k is the
    multiplicity of x in the minimal polynomial and s the order of x
    modulo the x-stripped part; they are re-verified against exact matrix
    powers before being returned.
    """
    cert = _semicascade_certificate(a)
    if cert.verdict == TAME and not certificate_check(a, cert):
        raise AssertionError("internal error: certificate failed self-check: %r" % (cert,))
    return cert


def decide_cascade(a: IntMatrix) -> TamenessCertificate:
    """Decide tameness of the iteration group of an invertible affine map.

    Requires |det A| = 1 (otherwise the inverse is not an integer matrix
    and the cascade is undefined). TAME certificates carry the least
    m >= 1 with A^m = I.
    """
    if abs(a.det()) != 1:
        raise DeterminantNotUnitError(
            "cascade undefined: |det A| = %d, need 1" % abs(a.det())
        )
    semi = _semicascade_certificate(a)
    if semi.verdict == UNTAME:
        return TamenessCertificate(verdict=UNTAME, kind=CASCADE, witness=semi.witness)
    if semi.index_k != 0:
        # Unreachable when |det A| = 1 (0 cannot be an eigenvalue); kept
        # as a defensive check on the pipeline above.
        witness = UntameWitness(
            reason=ZERO_EIGENVALUE,
            stripped_min_poly=strip_x_factor(min_poly(a))[1],
            detail="minimal polynomial is divisible by x",
        )
        return TamenessCertificate(verdict=UNTAME, kind=CASCADE, witness=witness)
    cert = TamenessCertificate(
        verdict=TAME,
        kind=CASCADE,
        period_s=semi.period_s,
        minimal_order_m=semi.period_s,
    )
    if not certificate_check(a, cert):
        raise AssertionError("internal error: certificate failed self-check: %r" % (cert,))
    return cert


def oracle_semicascade(a: IntMatrix):
    """Brute-force tameness check by exact power enumeration.

    Enumerates A^0, A^1, ..., A^Q with Q = d + s_max(d) and reports the
    first repetition. The bound is complete: a finite power semigroup has
    index at most d (the x-multiplicity of the minimal polynomial) and
    period at most s_max(d), so a repetition, if any, occurs by A^{d+s_max}.
    Returns (verdict, minimal_pair or None).
    """
    limit = a.d + order_bound(a.d).s_max
    seen: dict[tuple, int] = {}
    power = IntMatrix.identity(a.d)
    for n in range(limit + 1):
        key = power.entries
        if key in seen:
            return TAME, (seen[key], n)
        seen[key] = n
        power = mat_mul(power, a)
    return UNTAME, None


def _powers_up_to(a: IntMatrix, q: int) -> list[IntMatrix]:
    powers = [IntMatrix.identity(a.d)]
    for _ in range(q):
        powers.append(mat_mul(powers[-1], a))
    return powers


def certificate_check(a: IntMatrix, cert: TamenessCertificate) -> bool:
    """Re-verify every claim in a certificate by exact computation.

    TAME claims are checked directly against matrix powers, including
    minimality (all smaller pairs / orders are scanned). UNTAME verdicts
    are re-checked by the exhaustive power enumeration oracle, and the
    witness data is re-derived from the minimal polynomial.
    """
    if cert.verdict == TAME and cert.kind == SEMICASCADE:
        if cert.minimal_pair is None or cert.witness is not None:
            return False
        if cert.minimal_order_m is not None:
            return False
        p, q = cert.minimal_pair
        if not (0 <= p < q):
            return False
        if cert.index_k != p or cert.period_s != q - p:
            return False
        powers = _powers_up_to(a, q)
        if powers[p] != powers[q]:
            return False
        # Minimality in the lexicographic (q, p) order.
        for q2 in range(1, q):
            for p2 in range(q2):
                if powers[p2] == powers[q2]:
                    return False
        for p2 in range(p):
            if powers[p2] == powers[q]:
                return False
        return True

    if cert.verdict == TAME and cert.kind == CASCADE:
        m = cert.minimal_order_m
        if m is None or m < 1 or cert.period_s != m:
            return False
        if cert.minimal_pair is not None or cert.index_k not in (None, 0):
            return False
        powers = _powers_up_to(a, m)
        if powers[m] != powers[0]:
            return False
        return all(powers[m2] != powers[0] for m2 in range(1, m))

    if cert.verdict == UNTAME:
        if cert.witness is None:
            return False
        verdict, _ = oracle_semicascade(a)
        if cert.kind == SEMICASCADE:
            if verdict != UNTAME:
                return False
        else:
            # Cascade untameness: no power up to the complete bound is I.
            s_max = order_bound(a.d).s_max
            powers = _powers_up_to(a, s_max)
            if any(powers[m] == powers[0] for m in range(1, s_max + 1)):
                return False
        return _witness_check(a, cert.witness)

    return False


def _witness_check(a: IntMatrix, witness: UntameWitness) -> bool:
    k, g = strip_x_factor(min_poly(a))
    if witness.reason == ZERO_EIGENVALUE:
        return k > 0
    if witness.stripped_min_poly != g:
        return False
    if witness.reason == NON_SQUAREFREE:
        return poly_gcd(g, g.derivative()).degree != 0
    if witness.reason == ORDER_BOUND_EXHAUSTED:
        table = order_bound(a.d)
        if witness.s_max != table.s_max:
            return False
        return order_of_x_mod(g, table.s_max) is None
    return False
