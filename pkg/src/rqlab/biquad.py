"""Exact arithmetic in K1 = Q(sqrt 2, sqrt D) and the unit index of K1.

Elements are 4-tuples of Fractions on the basis 1, sqrt2, sqrtD, sqrt(2D).
The three quadratic subfields are labelled

    L1 = Q(sqrt D),  L2 = Q(sqrt 2D),  L3 = Q(sqrt 2)

and their fundamental units eps_D, eps_2D, eps_2 play the roles of
eps_1, eps_2, eps_3 in Kubota's list of unit systems.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import is_squarefree
from .pell import FundamentalUnit, fundamental_unit
from .qforms import two_sylow

__all__ = [
    "K1Element",
    "FsuClassification",
    "KubotaError",
    "sqrt_rational",
    "sqrt_quadratic",
    "is_square_in_K1",
    "unit_in_K1",
    "unit_product",
    "fsu_classify",
    "kubota_kuroda_A1",
    "SUBFIELD_UNITS",
]

SUBFIELD_UNITS = ("eps_D", "eps_2D", "eps_2")


class KubotaError(ArithmeticError):
    """Squareness data that no case of Kubota's list allows."""


def _check_D(D: int):
    if D <= 1 or D % 2 == 0 or not is_squarefree(D):
        raise ValueError(f"K1 needs D odd, squarefree and > 1, got {D}")


@dataclass(frozen=True)
class K1Element:
    D: int
    c: tuple[Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def of(cls, D: int, c0=0, c1=0, c2=0, c3=0) -> "K1Element":
        return cls(D, (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)))

    def _same(self, other) -> "K1Element":
        if isinstance(other, (int, Fraction)):
            return K1Element.of(self.D, other)
        if other.D != self.D:
            raise ValueError(f"different fields: D={self.D} and D={other.D}")
        return other

    def __add__(self, other):
        o = self._same(other)
        return K1Element(self.D, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return K1Element(self.D, tuple(-a for a in self.c))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __mul__(self, other):
        o = self._same(other)
        D = self.D
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        return K1Element(
            D,
            (
                a0 * b0 + 2 * a1 * b1 + D * a2 * b2 + 2 * D * a3 * b3,
                a0 * b1 + a1 * b0 + D * (a2 * b3 + a3 * b2),
                a0 * b2 + a2 * b0 + 2 * (a1 * b3 + a3 * b1),
                a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
            ),
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = K1Element.of(self.D, 1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return any(self.c)

    def conj(self, which: str) -> "K1Element":
        """Image under sigma (sqrt2 -> -sqrt2), tau (sqrtD -> -sqrtD) or sigma*tau."""
        c0, c1, c2, c3 = self.c
        if which == "sigma":
            return K1Element(self.D, (c0, -c1, c2, -c3))
        if which == "tau":
            return K1Element(self.D, (c0, c1, -c2, -c3))
        if which == "sigmatau":
            return K1Element(self.D, (c0, -c1, -c2, c3))
        raise ValueError(f"unknown automorphism {which!r}")

    def norm_to(self, subfield: str) -> "K1Element":
        """Relative norm to Q(sqrt 2), Q(sqrt D), Q(sqrt 2D) or Q."""
        if subfield == "Q(sqrt2)":
            return self * self.conj("tau")
        if subfield == "Q(sqrtD)":
            return self * self.conj("sigma")
        if subfield == "Q(sqrt2D)":
            return self * self.conj("sigmatau")
        if subfield == "Q":
            return self.norm_to("Q(sqrt2)").norm_to("Q(sqrtD)")
        raise ValueError(f"unknown subfield {subfield!r}")

    def norm(self) -> Fraction:
        return self.norm_to("Q").c[0]

    def inverse(self) -> "K1Element":
        if not self:
            raise ZeroDivisionError("inverse of 0 in K1")
        # x * sigma(x) * tau(x) * sigmatau(x) is rational
        others = self.conj("sigma") * self.conj("tau") * self.conj("sigmatau")
        n = (self * others).c[0]
        return K1Element(self.D, tuple(a / n for a in others.c))

    def char_poly(self) -> tuple[Fraction, ...]:
        """Coefficients (1, e1, e2, e3, e4) of prod (X - g(x)) over the Galois group."""
        coeffs = [K1Element.of(self.D, 1)]
        for which in (None, "sigma", "tau", "sigmatau"):
            root = self if which is None else self.conj(which)
            shifted = coeffs + [K1Element.of(self.D, 0)]
            for i in range(len(coeffs), 0, -1):
                shifted[i] = shifted[i] - root * coeffs[i - 1]
            coeffs = shifted
        if any(any(c.c[1:]) for c in coeffs):
            raise AssertionError("characteristic polynomial is not rational")
        return tuple(c.c[0] for c in coeffs)

    def is_integral(self) -> bool:
        """Algebraic integrality (the ring of integers is larger than Z[sqrt2, sqrtD])."""
        return all(x.denominator == 1 for x in self.char_poly())

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def embeddings(self) -> tuple[float, float, float, float]:
        """Real embeddings as floats (identity, sigma, tau, sigmatau); for cross-checks only."""
        r2, rD = math.sqrt(2), math.sqrt(self.D)
        out = []
        for s2, sD in ((1, 1), (-1, 1), (1, -1), (-1, -1)):
            c0, c1, c2, c3 = self.c
            out.append(float(c0) + s2 * float(c1) * r2 + sD * float(c2) * rD + s2 * sD * float(c3) * r2 * rD)
        return tuple(out)

    def is_totally_positive(self) -> bool:
        """Exact sign test of all four real embeddings."""
        for which in (None, "sigma", "tau", "sigmatau"):
            x = self if which is None else self.conj(which)
            c0, c1, c2, c3 = x.c
            if _sign_tower((c0, c1), (c2, c3), self.D) <= 0:
                return False
        return True

    def __str__(self):
        names = ("", "*sqrt2", f"*sqrt{self.D}", f"*sqrt{2 * self.D}")
        parts = [f"{x}{n}" for x, n in zip(self.c, names) if x]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# signs and square roots in Q(sqrt m)


def _sign_quad(a: Fraction, b: Fraction, m: int) -> int:
    """Sign of a + b*sqrt(m) in the real embedding with sqrt(m) > 0."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    # opposite signs: compare a^2 with m*b^2
    diff = a * a - m * b * b
    return sa if diff > 0 else (sb if diff < 0 else 0)


def _sign_tower(u0, u1, D: int) -> int:
    """Sign of u0 + u1*sqrt(D) with u0, u1 in Q(sqrt 2) given as pairs."""
    s0 = _sign_quad(u0[0], u0[1], 2)
    s1 = _sign_quad(u1[0], u1[1], 2)
    if s0 == s1 or s1 == 0:
        return s0
    if s0 == 0:
        return s1
    a, b = _mul2(u0, u0)
    c, d = _mul2(u1, u1)
    diff = _sign_quad(a - D * c, b - D * d, 2)
    return s0 if diff > 0 else (s1 if diff < 0 else 0)


def sqrt_rational(x: Fraction) -> Fraction | None:
    """Nonnegative rational square root of x, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def sqrt_quadratic(a, b, m: int) -> list[tuple[Fraction, Fraction]]:
    """All (x, y) with (x + y*sqrt m)^2 = a + b*sqrt m, m > 1 squarefree.

    Returns an empty list when a + b*sqrt(m) is not a square in Q(sqrt m).
    """
    a, b = Fraction(a), Fraction(b)
    roots = []
    if b == 0:
        r = sqrt_rational(a)
        if r is not None:
            roots.append((r, Fraction(0)))
        r = sqrt_rational(a / m)
        if r is not None:
            roots.append((Fraction(0), r))
    else:
        c = sqrt_rational(a * a - m * b * b)
        if c is not None:
            for half in ((a + c) / 2, (a - c) / 2):
                x = sqrt_rational(half)
                if x:
                    roots.append((x, b / (2 * x)))
    out = []
    for x, y in roots:
        if (x * x + m * y * y, 2 * x * y) == (a, b):
            out += [(x, y), (-x, -y)]
    return list(dict.fromkeys(out))


def _mul2(u, v):
    return (u[0] * v[0] + 2 * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _div2(u, v):
    n = v[0] * v[0] - 2 * v[1] * v[1]
    w = _mul2(u, (v[0], -v[1]))
    return (w[0] / n, w[1] / n)


def is_square_in_K1(u: K1Element) -> tuple[bool, K1Element | None]:
    """Decide whether u is a square in K1, returning a verified root if so.

    Write u = u0 + u1*sqrtD with u0, u1 in Q(sqrt 2).  A root t = al + be*sqrtD
    has al^2 + D*be^2 = u0 and 2*al*be = u1, so al^2 = (u0 +/- nu)/2 where
    nu^2 = u0^2 - D*u1^2.
    """
    if not u:
        raise ValueError("0 is excluded")
    D = u.D
    c0, c1, c2, c3 = u.c
    u0, u1 = (c0, c1), (c2, c3)
    candidates: list[tuple[tuple, tuple]] = []
    if u1 == (0, 0):
        for r in sqrt_quadratic(u0[0], u0[1], 2):
            candidates.append((r, (Fraction(0), Fraction(0))))
        for r in sqrt_quadratic(u0[0] / D, u0[1] / D, 2):
            candidates.append(((Fraction(0), Fraction(0)), r))
    else:
        sq0, sq1 = _mul2(u0, u0), _mul2(u1, u1)
        n = (sq0[0] - D * sq1[0], sq0[1] - D * sq1[1])
        for nu in sqrt_quadratic(n[0], n[1], 2):
            half = ((u0[0] + nu[0]) / 2, (u0[1] + nu[1]) / 2)
            for al in sqrt_quadratic(half[0], half[1], 2):
                if al == (0, 0):
                    continue
                be = _div2(u1, (2 * al[0], 2 * al[1]))
                candidates.append((al, be))
    for al, be in candidates:
        t = K1Element(D, (al[0], al[1], be[0], be[1]))
        if t * t == u:
            if not u.is_totally_positive():
                raise AssertionError(f"square {u} has a negative embedding")
            return True, t
    return False, None


# ---------------------------------------------------------------------------
# units of K1 and Kubota's classification


def unit_in_K1(D: int, unit: FundamentalUnit) -> K1Element:
    """Embed a unit of Q(sqrt 2), Q(sqrt D) or Q(sqrt 2D) into K1."""
    if unit.d == 2:
        return K1Element.of(D, unit.x, unit.y)
    if unit.d == D:
        return K1Element.of(D, unit.x, 0, unit.y)
    if unit.d == 2 * D:
        return K1Element.of(D, unit.x, 0, 0, unit.y)
    raise ValueError(f"Q(sqrt {unit.d}) is not a subfield of Q(sqrt 2, sqrt {D})")


def subfield_units(D: int) -> tuple[FundamentalUnit, FundamentalUnit, FundamentalUnit]:
    """(eps_D, eps_2D, eps_2)."""
    return fundamental_unit(D), fundamental_unit(2 * D), fundamental_unit(2)


def unit_product(D: int, exps) -> K1Element:
    """eps_D^a * eps_2D^b * eps_2^c in K1 for exps = (a, b, c)."""
    out = K1Element.of(D, 1)
    for e, u in zip(exps, subfield_units(D)):
        if e:
            out = out * unit_in_K1(D, u) ** e
    return out


def _label(v) -> str:
    names = [n for n, e in zip(SUBFIELD_UNITS, v) if e]
    return "sqrt(" + "*".join(names) + ")"


@dataclass(frozen=True)
class FsuClassification:
    """A fundamental system of units of K1 and the Hasse unit index Q.

    ``square_classes`` lists the exponent vectors (a, b, c) != 0 for which
    eps_D^a eps_2D^b eps_2^c is a square in K1.
    """

    D: int
    case_id: int
    labels: tuple[str, str, str]
    generators: tuple[K1Element, K1Element, K1Element]
    exponent_matrix: tuple[tuple[Fraction, ...], ...]
    square_classes: tuple[tuple[int, int, int], ...]
    hasse_index: int


def _admissible(v, norms) -> bool:
    # units under a root have norm 1, except all three together may share a norm
    used = [n for n, e in zip(norms, v) if e]
    if len(used) == 3:
        return len(set(used)) == 1
    return all(n == 1 for n in used)


def _span(vectors) -> set:
    out = {(0, 0, 0)}
    for v in vectors:
        out |= {tuple((a + b) % 2 for a, b in zip(v, w)) for w in out}
    return out


def _kubota_case(V: list) -> int:
    dim = len(V).bit_length() - 1
    nonzero = [v for v in V if any(v)]
    singles = sum(1 for v in nonzero if sum(v) == 1)
    if dim == 0:
        return 1
    if dim == 1:
        return {1: 2, 2: 4, 3: 7}[sum(nonzero[0])]
    if dim == 2:
        return {2: 3, 1: 5, 0: 6}[singles]
    raise KubotaError(f"all of eps_D, eps_2D, eps_2 would be squares: V={V}")


def _det3(M) -> Fraction:
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


@lru_cache(maxsize=4096)
def fsu_classify(D: int) -> FsuClassification:
    """Kubota case, unit system and Hasse index Q(K1) for K1 = Q(sqrt 2, sqrt D)."""
    _check_D(D)
    units = subfield_units(D)
    norms = [u.norm for u in units]
    roots = {}
    for v in itertools.product((0, 1), repeat=3):
        if not any(v) or not _admissible(v, norms):
            continue
        ok, t = is_square_in_K1(unit_product(D, v))
        if ok:
            roots[v] = t
    V = sorted(_span(roots))
    if len(V) != len(roots) + 1:
        raise KubotaError(f"square classes {sorted(roots)} for D={D} are not closed under products")
    case_id = _kubota_case(V)

    # basis of V in lexicographic order, then complete with plain units
    basis = []
    for v in sorted(roots, key=lambda w: (sum(w), w)):
        if v not in _span(basis):
            basis.append(v)
    rows, gens, labels = [], [], []
    for v in basis:
        t = roots[v]
        if t.c[0] < 0 or (t.c[0] == 0 and not t.is_totally_positive()):
            t = -t
        rows.append(tuple(Fraction(e, 2) for e in v))
        gens.append(t)
        labels.append(_label(v))
    # eps_2D is the last one tried, so the systems read like {sqrt(..), eps_D, eps_2}
    spanned, plain = list(basis), []
    for i in (0, 2, 1):
        e = tuple(int(j == i) for j in range(3))
        if e not in _span(spanned):
            spanned.append(e)
            plain.append(i)
    for i in sorted(plain):
        rows.append(tuple(Fraction(int(j == i)) for j in range(3)))
        gens.append(unit_in_K1(D, units[i]))
        labels.append(SUBFIELD_UNITS[i])
    Q = 2 ** len(basis)
    if abs(_det3(rows)) * Q != 1:
        raise KubotaError(f"exponent matrix for D={D} has determinant {_det3(rows)}, expected 1/{Q}")
    return FsuClassification(
        D, case_id, tuple(labels), tuple(gens), tuple(rows), tuple(sorted(roots)), Q
    )


def kubota_kuroda_A1(D: int) -> int:
    """|A1| = Q(K1) * h2(D) * h2(2D) * h2(2) / 4, with h2(2) = 1."""
    fsu = fsu_classify(D)
    num = fsu.hasse_index * two_sylow(D).h2 * two_sylow(2 * D).h2
    if num % 4:
        raise KubotaError(f"Kubota-Kuroda quotient {num}/4 is not an integer for D={D}")
    return num // 4
