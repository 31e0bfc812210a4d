"""Binary quadratic forms in Gauss's convention.

``[a, b, c]`` is the form a*x^2 + 2*b*x*y + c*y^2 with determinant
D = b^2 - a*c.  Only properly primitive forms (gcd(a, 2b, c) = 1) take part in
the class group, which makes the group the narrow class group of the order
Z[sqrt D].  Its 2-part agrees with the 2-part of the narrow class group of
Q(sqrt D) (for D = 5 mod 8 the two groups may differ by a factor 3).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .arith import factorize, is_squarefree, jacobi, kronecker2

__all__ = [
    "GaussForm",
    "GenusVector",
    "TwoSylow",
    "ClassGroup",
    "principal_form",
    "reduce",
    "cycle",
    "equivalent",
    "compose",
    "ambiguous_forms",
    "genus_character_labels",
    "generic_characters",
    "represented_value",
    "in_principal_genus",
    "fundamental_discriminant",
    "prime_discriminants",
    "narrow_two_rank",
    "redei_matrix",
    "redei_four_rank",
    "class_group",
    "two_sylow",
    "represents_by_principal",
    "ideal_over_is_principal",
]

# modern discriminant 4*D for which the full class group is still enumerated
MAX_DISCRIMINANT = 8 * 10**7


@dataclass(frozen=True, order=True)
class GaussForm:
    a: int
    b: int
    c: int

    @property
    def det(self) -> int:
        return self.b * self.b - self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def is_primitive(self) -> bool:
        return math.gcd(self.a, 2 * self.b, self.c) == 1

    def inverse(self) -> "GaussForm":
        return GaussForm(self.a, -self.b, self.c)

    def is_reduced(self) -> bool:
        D = self.det
        a, b = abs(self.a), self.b
        # 0 < b < sqrt D and sqrt D - b < |a| < sqrt D + b
        return 0 < b and b * b < D and (a + b) ** 2 > D and (a <= b or (a - b) ** 2 < D)

    def rho(self) -> "GaussForm":
        D = self.det
        s = math.isqrt(D)
        c = abs(self.c)
        # small |c| (below 2*sqrt(D)): take b' in (sqrt(D) - |c|, sqrt(D))
        if c * c < 4 * D:
            b = s - (s + self.b) % c
        else:
            b = (-self.b) % c
            if 2 * b > c:
                b -= c
        return GaussForm(self.c, b, (b * b - D) // self.c)

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


def _check_det(D: int):
    if D <= 0 or math.isqrt(D) ** 2 == D:
        raise ValueError(f"determinant must be positive and nonsquare, got {D}")


def principal_form(D: int) -> GaussForm:
    return GaussForm(1, 0, -D)


def reduce(f: GaussForm) -> GaussForm:
    """A reduced form properly equivalent to f."""
    _check_det(f.det)
    if f.a == 0 or f.c == 0:
        raise ValueError(f"degenerate form {f}")
    for _ in range(10_000 + 4 * f.det.bit_length() + abs(f.a).bit_length() * 4):
        if f.is_reduced():
            return f
        f = f.rho()
    raise AssertionError(f"reduction did not terminate for {f}")


def cycle(f: GaussForm) -> list[GaussForm]:
    """The rho-cycle of reduced forms equivalent to f, starting at reduce(f)."""
    g = reduce(f)
    out = [g]
    h = g.rho()
    while h != g:
        out.append(h)
        h = h.rho()
    return out


def equivalent(f: GaussForm, g: GaussForm) -> bool:
    """Proper (SL2(Z)) equivalence, decided by cycle membership."""
    if f.det != g.det:
        raise ValueError(f"determinants differ: {f.det} vs {g.det}")
    return reduce(g) in set(cycle(f))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f: GaussForm, g: GaussForm) -> GaussForm:
    """Dirichlet composition; returns an unreduced representative of [f][g]."""
    if f.det != g.det:
        raise ValueError(f"determinants differ: {f.det} vs {g.det}")
    disc = 4 * f.det
    a1, b1, c1 = f.a, 2 * f.b, f.c
    a2, b2, c2 = g.a, 2 * g.b, g.c
    beta = (b1 + b2) // 2
    e1, u1, v1 = _xgcd(a1, a2)
    e, s, w = _xgcd(e1, beta)
    u, v = s * u1, s * v1
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // e
    B %= 2 * abs(A)
    num = B * B - disc
    if num % (4 * A):
        raise AssertionError(f"composition failed for {f} * {g}")
    return GaussForm(A, B // 2, num // (4 * A))


# ---------------------------------------------------------------------------
# ambiguous forms and genus theory


def _signed_divisors(n: int) -> list[int]:
    fac = factorize(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def ambiguous_forms(D: int) -> list[GaussForm]:
    """Simple ambiguous forms of determinant D.

    One form [a, 0, -D/a] per pair {a, -D/a}, plus [2a, |a|, (a^2 - D)/(2a)]
    per pair when D = 3 mod 4 (for other D those are not properly primitive).
    The positive member of each pair is used, except that {-1, D} gives -1.
    """
    _check_det(D)
    reps = []
    for d in _signed_divisors(D):
        reps.append(-1 if d == D else d)
    forms = [GaussForm(a, 0, -D // a) for a in reps]
    if D % 4 == 3:
        forms += [GaussForm(2 * a, abs(a), (a * a - D) // (2 * a)) for a in reps]
    return forms


def genus_character_labels(D: int) -> list[str]:
    """Labels of the assigned characters for determinant D (squarefree or 2*odd squarefree)."""
    labels = [f"({{m}}/{p})" for p in sorted(factorize(D)) if p != 2]
    if D % 4 == 3:
        labels.append("delta")
    elif D % 8 == 2:
        labels.append("epsilon")
    elif D % 8 == 6:
        labels.append("delta*epsilon")
    return labels


def _character_values(D: int, m: int) -> tuple[int, ...]:
    vals = [jacobi(m, p) for p in sorted(factorize(D)) if p != 2]
    delta = 1 if m % 4 == 1 else -1
    eps = 1 if m % 8 in (1, 7) else -1
    if D % 4 == 3:
        vals.append(delta)
    elif D % 8 == 2:
        vals.append(eps)
    elif D % 8 == 6:
        vals.append(delta * eps)
    return tuple(vals)


@dataclass(frozen=True)
class GenusVector:
    values: tuple[int, ...]
    labels: tuple[str, ...]
    witness: int

    @property
    def is_principal(self) -> bool:
        return all(v == 1 for v in self.values)


def _search_order(bound: int):
    # deterministic lexicographic order over |x|, |y| <= bound
    rng = range(-bound, bound + 1)
    return itertools.product(rng, rng)


def represented_value(f: GaussForm, bound: int = 50, max_bound: int = 6400, skip: int = 0) -> int:
    """A value m = f(x, y), gcd(x, y) = 1, coprime to 2D.

    Scans |x|, |y| <= bound and doubles the bound on failure. ``skip`` asks for
    a later witness (used to check the characters do not depend on m).
    """
    D = f.det
    seen = 0
    while bound <= max_bound:
        for x, y in _search_order(bound):
            if math.gcd(x, y) != 1:
                continue
            m = f(x, y)
            if m and math.gcd(m, 2 * D) == 1:
                if seen == skip:
                    return m
                seen += 1
        bound *= 2
        seen = 0
    raise ValueError(f"no represented value coprime to {2 * D} found for {f}")


def generic_characters(f: GaussForm, skip: int = 0) -> GenusVector:
    D = f.det
    m = represented_value(f, skip=skip)
    return GenusVector(_character_values(D, m), tuple(genus_character_labels(D)), m)


def in_principal_genus(f: GaussForm) -> bool:
    return generic_characters(f).is_principal


# ---------------------------------------------------------------------------
# Redei matrix


def fundamental_discriminant(D: int) -> int:
    if D <= 1 or not is_squarefree(D):
        raise ValueError(f"D must be squarefree and > 1, got {D}")
    return D if D % 4 == 1 else 4 * D


def prime_discriminants(D: int) -> list[tuple[int, int]]:
    """(prime, prime discriminant) factors of the field discriminant, sorted by prime."""
    dk = fundamental_discriminant(D)
    out = []
    rest = dk
    for p in sorted(factorize(D)):
        if p == 2:
            continue
        pd = p if p % 4 == 1 else -p
        out.append((p, pd))
        rest //= pd
    if rest != 1:
        out.append((2, rest))
    return sorted(out)


def narrow_two_rank(D: int) -> int:
    return len(prime_discriminants(D)) - 1


def _kronecker(d: int, p: int) -> int:
    return kronecker2(d) if p == 2 else jacobi(d, p)


def redei_matrix(D: int) -> list[list[int]]:
    """Redei matrix over F2; row i holds [(d_j/p_i) = -1] with row sums zero."""
    pds = prime_discriminants(D)
    t = len(pds)
    M = [[0] * t for _ in range(t)]
    for i, (p, _) in enumerate(pds):
        for j, (_, dj) in enumerate(pds):
            if i != j and _kronecker(dj, p) == -1:
                M[i][j] = 1
        M[i][i] = sum(M[i]) % 2
    return M


def _rank_f2(rows: list[list[int]]) -> int:
    vecs = [int("".join(map(str, r)), 2) for r in rows if any(r)]
    rank = 0
    while vecs:
        pivot = max(vecs)
        vecs.remove(pivot)
        rank += 1
        top = pivot.bit_length() - 1
        vecs = [v ^ pivot if (v >> top) & 1 else v for v in vecs]
        vecs = [v for v in vecs if v]
    return rank


def redei_four_rank(D: int) -> int:
    M = redei_matrix(D)
    return len(M) - 1 - _rank_f2(M)


# ---------------------------------------------------------------------------
# class group enumeration



@dataclass
class ClassGroup:
    """Narrow class group of properly primitive forms of determinant D."""

    D: int
    cycles: list[list[GaussForm]]
    index: dict[GaussForm, int]
    _mul: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.cycles)

    def rep(self, k: int) -> GaussForm:
        return self.cycles[k][0]

    def class_of(self, f: GaussForm) -> int:
        return self.index[reduce(f)]

    @property
    def identity(self) -> int:
        return self.class_of(principal_form(self.D))

    def mul(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        k = self._mul.get(key)
        if k is None:
            k = self.class_of(compose(self.rep(i), self.rep(j)))
            self._mul[key] = k
        return k

    def power(self, i: int, n: int) -> int:
        result, base = self.identity, i
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def element_order(self, i: int) -> int:
        e, k, n = self.identity, i, 1
        while k != e:
            k = self.mul(k, i)
            n += 1
        return n


@lru_cache(maxsize=256)
def class_group(D: int) -> ClassGroup:
    _check_det(D)
    if 4 * D > MAX_DISCRIMINANT:
        raise ValueError(f"discriminant {4 * D} beyond the enumeration limit {MAX_DISCRIMINANT}")
    s = math.isqrt(D)
    reduced = []
    for b in range(1, s + 1):
        n = D - b * b
        for a in _signed_divisors(n):
            if (a + b) ** 2 <= D:
                continue
            if a > b and (a - b) ** 2 >= D:
                break
            c = n // a
            for sgn in (1, -1):
                f = GaussForm(sgn * a, b, -sgn * c)
                if f.is_primitive():
                    reduced.append(f)
    index: dict[GaussForm, int] = {}
    cycles: list[list[GaussForm]] = []
    for f in reduced:
        if f in index:
            continue
        cyc = [f]
        g = f.rho()
        while g != f:
            cyc.append(g)
            g = g.rho()
        k = len(cycles)
        for g in cyc:
            if g in index:
                raise AssertionError(f"rho cycles overlap at {g}")
            index[g] = k
        cycles.append(sorted(cyc))
    return ClassGroup(D, cycles, index)


@dataclass(frozen=True)
class TwoSylow:
    """2-Sylow data of the narrow and ordinary form class groups of determinant D."""

    D: int
    narrow: tuple[int, ...]
    generators: tuple[GaussForm, ...]
    ordinary: tuple[int, ...]
    narrow_equals_ordinary: bool

    @property
    def h2_narrow(self) -> int:
        return math.prod(self.narrow)

    @property
    def h2(self) -> int:
        return math.prod(self.ordinary)

    @property
    def four_rank(self) -> int:
        return sum(1 for e in self.narrow if e >= 4)


def _structure(elements: list[int], in_sub, mul, identity: int) -> tuple[int, ...]:
    """Elementary divisors of an abelian 2-group modulo a subgroup.

    ``in_sub(x)`` tests membership in the subgroup being divided out.
    """
    size_sub = sum(1 for x in elements if in_sub(x))
    counts = []
    j = 0
    while True:
        j += 1
        n = 0
        for x in elements:
            y = x
            for _ in range(j):
                y = mul(y, y)
            if in_sub(y):
                n += 1
        counts.append(n // size_sub)
        if n == len(elements):
            break
    ranks = [int(math.log2(c)) for c in counts]
    # number of cyclic factors of order >= 2^j is ranks[j-1] - ranks[j-2]
    divisors = []
    prev = 0
    per_level = []
    for r in ranks:
        per_level.append(r - prev)
        prev = r
    for j, k in enumerate(per_level, start=1):
        nxt = per_level[j] if j < len(per_level) else 0
        divisors += [2**j] * (k - nxt)
    return tuple(sorted(divisors, reverse=True))


def _generators(G: ClassGroup, elements: list[int], divisors: tuple[int, ...]) -> list[int]:
    """Greedy basis: an element of maximal order in the quotient, lifted with equal order."""
    gens: list[int] = []
    sub = {G.identity}

    def close(gs):
        out = {G.identity}
        frontier = [G.identity]
        while frontier:
            x = frontier.pop()
            for g in gs:
                y = G.mul(x, g)
                if y not in out:
                    out.add(y)
                    frontier.append(y)
        return out

    for target in divisors:
        best = None
        for x in elements:
            if x in sub:
                continue
            # order of x modulo sub
            k, y = 1, x
            while y not in sub:
                y = G.mul(y, x)
                k += 1
            if k == target and G.element_order(x) == target:
                best = x
                break
        if best is None:
            raise AssertionError(f"no generator of order {target} for D={G.D}")
        gens.append(best)
        sub = close(gens)
    if len(sub) != len(elements):
        raise AssertionError(f"generators do not span the 2-Sylow for D={G.D}")
    return gens


@lru_cache(maxsize=256)
def two_sylow(D: int) -> TwoSylow:
    """2-Sylow of the narrow form class group by enumeration, plus its ordinary quotient."""
    G = class_group(D)
    h = G.order
    odd = h
    while odd % 2 == 0:
        odd //= 2
    sylow = sorted({G.power(k, odd) for k in range(h)})
    e = G.identity
    narrow = _structure(sylow, lambda x: x == e, G.mul, e)
    gens = _generators(G, sylow, narrow)
    z = G.class_of(GaussForm(-1, 0, D))
    zsub = {e, z}
    ordinary = _structure(sylow, lambda x: x in zsub, G.mul, e)
    return TwoSylow(
        D,
        narrow,
        tuple(G.rep(k) for k in gens),
        ordinary,
        z == e,
    )


# ---------------------------------------------------------------------------
# principality


@lru_cache(maxsize=1024)
def _principal_cycle(D: int) -> frozenset:
    return frozenset(cycle(principal_form(D)))


def represents_by_principal(D: int, m: int) -> bool:
    """Whether x^2 - D*y^2 = m has a solution with gcd(x, y) = 1."""
    if m == 0:
        raise ValueError("m must be nonzero")
    _check_det(D)
    pc = _principal_cycle(D)
    am = abs(m)
    for b in range(am):
        if (b * b - D) % m:
            continue
        f = GaussForm(m, b, (b * b - D) // m)
        if f.is_primitive() and reduce(f) in pc:
            return True
    return False


def ideal_over_is_principal(D: int, ell: int) -> bool:
    """Whether the prime of Q(sqrt D) over the ramified prime ell is principal."""
    if fundamental_discriminant(D) % ell:
        raise ValueError(f"{ell} does not ramify in Q(sqrt {D})")
    return represents_by_principal(D, ell) or represents_by_principal(D, -ell)
