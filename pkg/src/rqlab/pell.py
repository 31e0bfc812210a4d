"""Continued fractions, fundamental units and the x +/- 1 splitting of norm-one units."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import factorize, is_prime, is_square, is_squarefree, sqrt_exact

__all__ = [
    "FundamentalUnit",
    "UnitDecomposition",
    "continued_fraction_sqrt",
    "fundamental_unit",
    "canonical_integral_unit",
    "decompose_norm_one",
    "sqrt_product_in_K1_test",
    "convergents_sqrt",
]


@dataclass(frozen=True)
class FundamentalUnit:
    """A unit x + y*sqrt(d) > 1 of the maximal order of Q(sqrt(d)).

    ``power`` is 1 for the fundamental unit itself; :func:`canonical_integral_unit`
    may return its cube, flagged with ``power=3``.
    """

    d: int
    x: Fraction
    y: Fraction
    norm: int
    power: int = 1

    @property
    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def __mul__(self, other: "FundamentalUnit") -> "FundamentalUnit":
        if other.d != self.d:
            raise ValueError("units live in different fields")
        return FundamentalUnit(
            self.d,
            self.x * other.x + self.d * self.y * other.y,
            self.x * other.y + self.y * other.x,
            self.norm * other.norm,
            self.power + other.power,
        )

    def __pow__(self, n: int) -> "FundamentalUnit":
        if n < 1:
            raise ValueError("only positive powers are supported")
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def pell_value(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def __str__(self):
        return f"{_fmt(self.x)} + {_fmt(self.y)}*sqrt({self.d})"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class UnitDecomposition:
    """Splitting of (x-1)(x+1) = d*y^2 for a norm +1 unit x + y*sqrt(d).

    ``d1`` always goes with x + 1 and ``d2`` with x - 1::

        halved:      x + 1 = 2*d1*y1**2,  x - 1 = 2*d2*y2**2
        not halved:  x + 1 = d1*y1**2,    x - 1 = d2*y2**2
    """

    d1: int
    y1: int
    d2: int
    y2: int
    halved: bool

    def plus_value(self) -> int:
        return (2 if self.halved else 1) * self.d1 * self.y1**2

    def minus_value(self) -> int:
        return (2 if self.halved else 1) * self.d2 * self.y2**2


def continued_fraction_sqrt(n: int) -> tuple[int, list[int]]:
    """(a0, period) of the continued fraction of sqrt(n)."""
    if n <= 1:
        raise ValueError(f"need n > 1, got {n}")
    a0 = math.isqrt(n)
    if a0 * a0 == n:
        raise ValueError(f"{n} is a perfect square")
    m, q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        m = a * q - m
        q = (n - m * m) // q
        a = (a0 + m) // q
        period.append(a)
    return a0, period


def convergents_sqrt(n: int, count: int):
    """Yield the first ``count`` convergents (p, q) of sqrt(n)."""
    a0, period = continued_fraction_sqrt(n)
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    yield p, q
    for k in range(count - 1):
        a = period[k % len(period)]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def _floor_quotient(P: int, Q: int, d: int, s: int) -> int:
    # floor((P + sqrt(d)) / Q), s = isqrt(d), d not a square
    if Q > 0:
        return (P + s) // Q
    return (-P - s - 1) // (-Q)


def _pqa_unit(d: int, P0: int, Q0: int) -> tuple[int, int, int]:
    """First (G, B, sign) with G^2 - d*B^2 = sign*Q0^2 along the expansion of (P0 + sqrt d)/Q0."""
    s = math.isqrt(d)
    A2, A1 = 0, 1
    B2, B1 = 1, 0
    P, Q = P0, Q0
    i = 0
    while True:
        a = _floor_quotient(P, Q, d, s)
        A2, A1 = A1, a * A1 + A2
        B2, B1 = B1, a * B1 + B2
        P = a * Q - P
        Q = (d - P * P) // Q
        if Q == Q0:
            G = Q0 * A1 - P0 * B1
            sign = -1 if i % 2 == 0 else 1
            return G, B1, sign
        i += 1


@lru_cache(maxsize=4096)
def fundamental_unit(d: int) -> FundamentalUnit:
    """Fundamental unit of the maximal order of Q(sqrt(d)), d squarefree > 1."""
    if d <= 1 or not is_squarefree(d):
        raise ValueError(f"d must be squarefree and > 1, got {d}")
    if d % 4 == 1:
        G, B, sign = _pqa_unit(d, 1, 2)
        x, y = Fraction(G, 2), Fraction(B, 2)
    else:
        G, B, sign = _pqa_unit(d, 0, 1)
        x, y = Fraction(G), Fraction(B)
    unit = FundamentalUnit(d, x, y, sign)
    if unit.pell_value() != sign or x <= 0 or y <= 0:
        raise AssertionError(f"bad unit for d={d}: {unit}")
    return unit


def canonical_integral_unit(u: FundamentalUnit) -> FundamentalUnit:
    """u itself if it has integer coordinates, else u**3 (always integral)."""
    if u.is_integral:
        return u
    cube = u**3
    if not cube.is_integral:
        raise AssertionError(f"cube of {u} is not integral")
    return cube


def decompose_norm_one(x: int, y: int, d: int) -> UnitDecomposition:
    """Split x +/- 1 for an integral unit x + y*sqrt(d) of norm +1."""
    x, y = int(x), int(y)
    value = x * x - d * y * y
    if value == -1:
        raise ValueError("norm -1 unit has no x +/- 1 decomposition")
    if value != 1:
        raise ValueError(f"{x} + {y}*sqrt({d}) is not a unit")
    if x % 2:
        plus, minus, halved = (x + 1) // 2, (x - 1) // 2, True
    else:
        plus, minus, halved = x + 1, x - 1, False
    # plus and minus are coprime with product d*(y/2)^2 or d*y^2, so the
    # squarefree part of each is its gcd with d
    d1, d2 = math.gcd(plus, d), math.gcd(minus, d)
    y1, y2 = sqrt_exact(plus // d1), sqrt_exact(minus // d2)
    if y1 is None or y2 is None or d1 * d2 != d or plus % d1 or minus % d2:
        raise AssertionError(f"decomposition failed for {x} + {y}*sqrt({d})")
    return UnitDecomposition(d1, y1, d2, y2, halved)


def sqrt_product_in_K1_test(D: int, p: int) -> bool:
    """Whether p*(r + 1) is a perfect square, where eps_{2D} = r + s*sqrt(2D).

    For D = p*q1*q2 in the second family this decides sqrt(eps_D*eps_2D) in Q(sqrt 2, sqrt D).
    """
    if not is_squarefree(D) or D <= 1:
        raise ValueError(f"D must be squarefree and > 1, got {D}")
    if D % p or not is_prime(p):
        raise ValueError(f"{p} is not a prime divisor of {D}")
    eps = fundamental_unit(2 * D)
    r = int(eps.x)
    return is_square(p * (r + 1))


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))
