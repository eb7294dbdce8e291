"""Prime generation, arithmetic in F_p and F_{p^2}, quadratic characters and
distinct-degree factorization patterns of integer polynomials mod p."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

import numpy as np

# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class RamifiedPrime(ValueError):
    """p divides the leading coefficient or the discriminant of a polynomial."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(bound: int) -> np.ndarray:
    """All primes <= bound in ascending order (sieve of Eratosthenes)."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for i in range(3, isqrt(bound) + 1, 2):
        if sieve[i]:
            sieve[i * i :: 2 * i] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_power_base(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p^m, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for m in range(q.bit_length(), 0, -1):
        p = round(q ** (1.0 / m))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**m == q and is_prime(cand):
                return cand, m
    raise ValueError(f"{q} is not a prime power")


def smallest_nonresidue(p: int) -> int:
    if p == 2:
        raise ValueError("no quadratic non-residue mod 2")
    r = 2
    while pow(r, (p - 1) // 2, p) != p - 1:
        r += 1
    return r


@dataclass(frozen=True)
class Fq:
    """F_p (degree 1) or F_{p^2} = F_p[w]/(w^2 - r) (degree 2).

    Elements of F_{p^2} are pairs (a, b) standing for a + b*w.
    """

    p: int
    degree: int = 1
    nonresidue: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.degree not in (1, 2):
            raise ValueError("only degrees 1 and 2 are supported")
        if self.degree == 2:
            if self.p == 2:
                raise ValueError("F_4 is not supported (odd characteristic only)")
            if self.nonresidue is None:
                object.__setattr__(self, "nonresidue", smallest_nonresidue(self.p))
            elif pow(self.nonresidue, (self.p - 1) // 2, self.p) != self.p - 1:
                raise ValueError("nonresidue must be a quadratic non-residue")
        elif self.nonresidue is not None:
            raise ValueError("nonresidue is only meaningful for degree 2")

    @property
    def order(self) -> int:
        return self.p**self.degree

    def elem(self, a):
        p = self.p
        if self.degree == 1:
            return int(a) % p
        if isinstance(a, tuple):
            return (a[0] % p, a[1] % p)
        return (int(a) % p, 0)

    def add(self, x, y):
        if self.degree == 1:
            return (x + y) % self.p
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def neg(self, x):
        if self.degree == 1:
            return -x % self.p
        return (-x[0] % self.p, -x[1] % self.p)

    def mul(self, x, y):
        p = self.p
        if self.degree == 1:
            return x * y % p
        a, b = x
        c, d = y
        return ((a * c + self.nonresidue * b * d) % p, (a * d + b * c) % p)

    def pow(self, x, e: int):
        result = self.elem(1)
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def norm(self, x) -> int:
        """Norm down to F_p: x * x^p."""
        if self.degree == 1:
            return x
        a, b = x
        return (a * a - self.nonresidue * b * b) % self.p

    def is_zero(self, x) -> bool:
        return x == 0 if self.degree == 1 else x == (0, 0)

    def elements(self):
        p = self.p
        if self.degree == 1:
            return range(p)
        return ((a, b) for a in range(p) for b in range(p))


def quadratic_character(a, q: Fq) -> int:
    """Legendre symbol of a in F_q: 0, +1 (nonzero square) or -1."""
    if q.p == 2:
        raise ValueError("quadratic character needs odd characteristic")
    x = q.elem(a)
    if q.is_zero(x):
        return 0
    e = (q.order - 1) // 2
    r = q.pow(x, e)
    if r == q.elem(1):
        return 1
    if r == q.elem(-1):
        return -1
    raise ArithmeticError(f"Euler criterion gave {r}")


def legendre_table(p: int) -> np.ndarray:
    """chi(x) for x in [0, p) as an int8 array."""
    xs = np.arange(p, dtype=np.int64)
    table = -np.ones(p, dtype=np.int8)
    table[(xs * xs) % p] = 1
    table[0] = 0
    return table


# --- integer polynomials -------------------------------------------------


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending order of degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coefficients)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c or (len(c) == 1 and c[0] == 0):
            raise ValueError("the zero polynomial has no degree")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def lc(self) -> int:
        return self.coefficients[-1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def mod(self, p: int) -> list[int]:
        return _trim([c % p for c in self.coefficients])

    def derivative(self) -> IntPoly:
        if self.degree == 0:
            raise ValueError("derivative of a constant")
        return IntPoly(tuple(i * c for i, c in enumerate(self.coefficients) if i))

    def __str__(self) -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if i == 1 else f"x^{i}")
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += sign + body
        return out


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: list[int], g: list[int], p: int) -> list[int]:
    """Remainder of f by g over F_p (g nonzero, trimmed)."""
    f = f[:]
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    while len(f) - 1 >= dg and f:
        coef = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * gc) % p
        _trim(f)
    return f


def _pmul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim([c % p for c in out])


def _pdivexact(f: list[int], g: list[int], p: int) -> list[int]:
    f = f[:]
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    q = [0] * (len(f) - dg)
    while f and len(f) - 1 >= dg:
        coef = f[-1] * inv % p
        shift = len(f) - 1 - dg
        q[shift] = coef
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * gc) % p
        _trim(f)
    if f:
        raise ArithmeticError("division is not exact")
    return q


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    a, b = _trim(f[:]), _trim(g[:])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _psub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def is_unramified(f: IntPoly, p: int) -> bool:
    """p does not divide lc(f) and f mod p is squarefree, i.e. p does not divide disc(f)."""
    if f.lc % p == 0:
        return False
    if f.degree == 0:
        return True
    fp = f.mod(p)
    dfp = f.derivative().mod(p) if f.degree > 0 else []
    if not dfp:
        return False
    return len(_pgcd(fp, dfp, p)) == 1


def ddf_pattern(f: IntPoly, p: int) -> tuple[int, ...]:
    """Sorted degrees of the irreducible factors of f mod p.

    Raises RamifiedPrime when p | lc(f) or p | disc(f).
    """
    if not is_unramified(f, p):
        raise RamifiedPrime(f"{p} is ramified or degenerate for {f}")
    g = f.mod(p)
    inv = pow(g[-1], p - 2, p)
    g = [c * inv % p for c in g]
    degrees: list[int] = []
    h = [0, 1]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppowmod(h, p, g, p)
        common = _pgcd(g, _psub(h, [0, 1], p), p)
        k = len(common) - 1
        if k > 0:
            degrees.extend([d] * (k // d))
            g = _pdivexact(g, common, p)
            h = _pmod(h, g, p)
    if len(g) - 1 > 0:
        degrees.append(len(g) - 1)
    return tuple(sorted(degrees))
