"""Integer arithmetic, primality and residue symbols.

Everything here works on plain Python ints, which are arbitrary precision.
Rational numbers use :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

__all__ = [
    "GaussianInt",
    "jacobi",
    "legendre",
    "kronecker2",
    "quartic_symbol",
    "quartic_symbol_mod2",
    "gaussian_quadratic_symbol",
    "primary_prime_over",
    "is_prime",
    "primes_in_class",
    "primes_below",
    "factorize",
    "is_squarefree",
    "is_square",
    "sqrt_exact",
]


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi: modulus must be odd and positive, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol; `p` is assumed to be an odd prime."""
    return jacobi(a, p)


def kronecker2(d: int) -> int:
    """Kronecker symbol (d/2) for odd d."""
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


def quartic_symbol(a: int, q: int) -> int:
    """Rational quartic residue symbol (a/q)_4.

    Defined only for q prime, q = 1 mod 4, and a a nonzero quadratic residue
    mod q; anything else raises ``ValueError``.
    """
    if q % 4 != 1 or not is_prime(q):
        raise ValueError(f"quartic symbol needs a prime q = 1 mod 4, got {q}")
    if jacobi(a, q) != 1:
        raise ValueError(f"({a}/{q})_4 undefined: {a} is not a quadratic residue mod {q}")
    r = pow(a, (q - 1) // 4, q)
    if r == 1:
        return 1
    if r == q - 1:
        return -1
    raise AssertionError("unreachable for prime q")


def quartic_symbol_mod2(m: int) -> int:
    """(m/2)_4 = (-1)^((m-1)/8) for m = 1 mod 8."""
    if m % 8 != 1:
        raise ValueError(f"(m/2)_4 needs m = 1 mod 8, got {m}")
    return -1 if ((m - 1) // 8) % 2 else 1


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int = 0

    def __add__(self, other):
        other = _gi(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_gi(other))

    def __rsub__(self, other):
        return _gi(other) - self

    def __mul__(self, other):
        other = _gi(other)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re or self.im)

    def __divmod__(self, other):
        # Nearest-integer quotient, so N(remainder) <= N(other) / 2.
        other = _gi(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * other.conjugate()
        q = GaussianInt(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * other

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        return not (_gi(other) % self)

    def associates(self):
        unit = GaussianInt(0, 1)
        z = self
        out = []
        for _ in range(4):
            out.append(z)
            z = z * unit
        return out

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _gi(z) -> GaussianInt:
    if isinstance(z, GaussianInt):
        return z
    if isinstance(z, int):
        return GaussianInt(z, 0)
    raise TypeError(f"cannot coerce {z!r} to GaussianInt")


def _round_div(a: int, b: int) -> int:
    # round(a / b) for b > 0, exact on big ints
    return (2 * a + b) // (2 * b)


def gaussian_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    while b:
        a, b = b, a % b
    return a


_ONE_PLUS_I_CUBED = GaussianInt(-2, 2)


def _is_gaussian_prime(pi: GaussianInt) -> bool:
    n = pi.norm()
    if is_prime(n):
        return True
    # rational primes = 3 mod 4 stay prime in Z[i]
    r = math.isqrt(n)
    return r * r == n and r % 4 == 3 and is_prime(r) and (pi.re == 0 or pi.im == 0)


def gaussian_quadratic_symbol(a: GaussianInt, pi: GaussianInt) -> int:
    """Quadratic residue symbol (a/pi)_2 in Z[i] for a Gaussian prime pi of odd norm.

    Computed as a^((N(pi)-1)/2) in Z[i]/(pi); returns 0 when pi divides a.
    """
    a, pi = _gi(a), _gi(pi)
    n = pi.norm()
    if n % 2 == 0:
        raise ValueError(f"pi must have odd norm, got N({pi}) = {n}")
    if not _is_gaussian_prime(pi):
        raise ValueError(f"{pi} is not a Gaussian prime")
    if pi.divides(a):
        return 0
    r = _gi(1)
    base = a % pi
    e = (n - 1) // 2
    while e:
        if e & 1:
            r = (r * base) % pi
        base = (base * base) % pi
        e >>= 1
    if pi.divides(r - 1):
        return 1
    if pi.divides(r + 1):
        return -1
    raise AssertionError("Euler criterion produced a non-unit residue")


def primary_prime_over(p: int, x: int) -> GaussianInt:
    """The primary Gaussian prime above p dividing x + i.

    Primary means pi = 1 mod (1+i)^3. Requires p = 1 mod 4 prime with
    p | x^2 + 1.
    """
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"p must be a prime = 1 mod 4, got {p}")
    if (x * x + 1) % p:
        raise ValueError(f"{p} does not divide {x}^2 + 1")
    g = gaussian_gcd(GaussianInt(p), GaussianInt(x, 1))
    if g.norm() != p:
        raise AssertionError(f"gcd({p}, {x}+i) has norm {g.norm()}")
    for cand in g.associates():
        if _ONE_PLUS_I_CUBED.divides(cand - 1):
            return cand
    raise AssertionError("no primary associate found")


# ---------------------------------------------------------------------------
# primality and enumeration

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# bases 2..37 are a deterministic witness set for n < 3.3e24 (covers 2^64)
_DETERMINISTIC_LIMIT = 3317044064679887385961981
_EXTRA_ROUNDS = 40


def _miller_rabin(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24.

    Above that bound, 40 extra rounds with bases drawn from a fixed-seed
    generator are added, so answers are reproducible but probabilistic.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_miller_rabin(n, a, d, s) for a in _SMALL_PRIMES):
        return False
    if n < _DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return all(_miller_rabin(n, rng.randrange(2, n - 1), d, s) for _ in range(_EXTRA_ROUNDS))


def primes_below(limit: int) -> list[int]:
    """All primes p < limit (sieve of Eratosthenes)."""
    if limit <= 2:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_in_class(residue: int, modulus: int, limit: int) -> list[int]:
    """Primes p < limit with p = residue mod modulus, ascending."""
    residue %= modulus
    return [p for p in primes_below(limit) if p % modulus == residue]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are small)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def sqrt_exact(n: int) -> int | None:
    """Integer square root if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None
