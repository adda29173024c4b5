"""Elementary number theory: symbols, sieves, factorization, continued fractions.

Everything here is a pure function of its arguments.  Square classes of
``Q*`` are carried by :class:`SquareClass`; local Hilbert symbols accept either
plain integers or square classes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

# Discriminants handled by the library stay below this cap.
DISC_CAP = 1 << 63

INF = "inf"
"""The real place of Q, as accepted by :func:`hilbert`."""

Factorization = tuple  # tuple[tuple[int, int], ...], primes strictly increasing


class ResourceBoundError(ValueError):
    """A requested computation exceeds a configured size bound."""


def check_disc_cap(D: int) -> int:
    if abs(D) >= DISC_CAP:
        raise OverflowError(f"discriminant {D} exceeds the 2^63 cap")
    return D


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n != 0."""
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v & 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi part: n odd positive
    a %= n
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
    """Legendre symbol for an odd prime p, as -1, 0 or 1."""
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _split_p(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert(a: Union[int, "SquareClass"], b: Union[int, "SquareClass"], v) -> int:
    """Local Hilbert symbol (a, b)_v at a prime v or at ``INF``."""
    a = int(a)
    b = int(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if v == INF:
        return -1 if (a < 0 and b < 0) else 1
    p = int(v)
    alpha, u = _split_p(a, p)
    beta, w = _split_p(b, p)
    if p == 2:
        eps_u = ((u - 1) // 2) & 1
        eps_w = ((w - 1) // 2) & 1
        om_u = ((u * u - 1) // 8) & 1
        om_w = ((w * w - 1) // 8) & 1
        e = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if e & 1 else 1
    s = 1
    if alpha & beta & 1 and p % 4 == 3:
        s = -s
    if beta & 1:
        s *= legendre(u, p)
    if alpha & 1:
        s *= legendre(w, p)
    return s


def hilbert_places(*args: int) -> list:
    """The places where a Hilbert symbol among ``args`` can be nontrivial."""
    primes = {2}
    for x in args:
        primes.update(p for p, _ in factorize(abs(int(x))))
    return sorted(primes) + [INF]


# ---------------------------------------------------------------------------
# primality and factorization
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin below 3.3e24; probabilistic beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


_TRIAL_PRIMES = [p for p in range(3, 1000) if all(p % q for q in range(2, int(p ** 0.5) + 1))]


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> Factorization:
    """Factor |n| >= 1 into increasing (prime, exponent) pairs."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    v = (n & -n).bit_length() - 1
    if v:
        out[2] = v
        n >>= v
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        # every prime factor left is > 997, so m < 1009^2 is prime
        if m < 1009 * 1009 or is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.extend((d, m // d))
    return tuple(sorted(out.items()))


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factorize(n))


def squarefree_kernel(n: int) -> int:
    """Signed squarefree representative of the class of n in Q*/Q*^2."""
    if n == 0:
        raise ValueError("0 has no square class")
    k = 1
    for p, e in factorize(n):
        if e & 1:
            k *= p
    return k if n > 0 else -k


# ---------------------------------------------------------------------------
# square classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SquareClass:
    """An element of Q*/(Q*)^2, stored as sign * 2^two_exponent * odd_part."""

    sign: int
    odd_part: int
    two_exponent: int

    def __post_init__(self):
        if self.sign not in (1, -1) or self.two_exponent not in (0, 1):
            raise ValueError(f"bad square class fields {self!r}")
        if self.odd_part < 1 or self.odd_part % 2 == 0:
            raise ValueError(f"odd_part must be odd positive, got {self.odd_part}")

    @classmethod
    def of(cls, n: Union[int, "SquareClass"]) -> "SquareClass":
        if isinstance(n, SquareClass):
            return n
        k = squarefree_kernel(int(n))
        sign = 1 if k > 0 else -1
        k = abs(k)
        two = k & 1 ^ 1
        return cls(sign, k >> two, two)

    @property
    def value(self) -> int:
        return self.sign * (self.odd_part << self.two_exponent)

    def __int__(self) -> int:
        return self.value

    def __mul__(self, other) -> "SquareClass":
        other = SquareClass.of(other)
        g = math.gcd(self.odd_part, other.odd_part)
        odd = (self.odd_part // g) * (other.odd_part // g)
        return SquareClass(self.sign * other.sign, odd, self.two_exponent ^ other.two_exponent)

    __rmul__ = __mul__

    def __neg__(self) -> "SquareClass":
        return SquareClass(-self.sign, self.odd_part, self.two_exponent)

    @property
    def is_trivial(self) -> bool:
        return self.value == 1

    @property
    def odd_primes(self) -> tuple[int, ...]:
        return prime_divisors(self.odd_part) if self.odd_part > 1 else ()

    @property
    def primes(self) -> tuple[int, ...]:
        return ((2,) if self.two_exponent else ()) + self.odd_primes

    @property
    def field_discriminant(self) -> int:
        """Discriminant of Q(sqrt(a)); 1 for the trivial class."""
        v = self.value
        return v if v % 4 == 1 else 4 * v

    def __repr__(self) -> str:
        return f"SquareClass({self.value})"


# ---------------------------------------------------------------------------
# modular square roots
# ---------------------------------------------------------------------------

def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo the prime p (Tonelli-Shanks)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int:
    """Square root of a unit a modulo p^k (p odd, or p = 2 with a = 1 mod 8)."""
    if p == 2:
        if a % 8 != 1:
            raise ValueError("only units = 1 mod 8 have 2-adic square roots")
        r = 1
        for j in range(3, k):
            # r^2 = a mod 2^j  ->  lift to mod 2^(j+1)
            if (r * r - a) % (1 << (j + 1)):
                r += 1 << (j - 1)
        return r % (1 << k)
    r = sqrt_mod_prime(a, p)
    if r == 0:
        raise ValueError("a must be a unit")
    pk = p
    for _ in range(1, k):
        pk *= p
        # Newton step: r <- r - (r^2 - a) / (2r)
        r = (r - (r * r - a) * pow(2 * r, -1, pk)) % pk
    return r


def sqrt_mod_squarefree(a: int, m: int) -> int:
    """A root t of t^2 = a mod m for squarefree m > 0, with |t| <= m/2."""
    if m == 1:
        return 0
    t, mod = 0, 1
    for p, e in factorize(m):
        if e != 1:
            raise ValueError("modulus must be squarefree")
        r = sqrt_mod_prime(a, p)
        # CRT combine
        t = t + mod * ((r - t) * pow(mod, -1, p) % p)
        mod *= p
    t %= m
    return t - m if 2 * t > m else t


# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------

MAX_SIEVE = 2 * 10 ** 8


class SmallestPrimeFactorTable:
    """Smallest-prime-factor table for 0..limit (entries 0 and 1 are 0)."""

    def __init__(self, spf: np.ndarray):
        self.spf = spf
        self.limit = len(spf) - 1

    def factor(self, n: int) -> Factorization:
        if not 1 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range 1..{self.limit}")
        spf = self.spf
        out = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return tuple(out)

    def is_prime(self, n: int) -> bool:
        return n >= 2 and int(self.spf[n]) == n

    def primes(self) -> np.ndarray:
        idx = np.arange(len(self.spf))
        return idx[(self.spf == idx) & (idx >= 2)]


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain Eratosthenes sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.nonzero(flags)[0]


def factor_sieve(limit: int, segment_size: int = 1 << 20) -> SmallestPrimeFactorTable:
    """Smallest-prime-factor table up to ``limit``, filled one segment at a time."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit > MAX_SIEVE:
        raise ResourceBoundError(f"sieve limit {limit} above memory budget {MAX_SIEVE}")
    dtype = np.int32 if limit < 2 ** 31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    small = base_primes(math.isqrt(limit))
    for lo in range(0, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        seg = spf[lo:hi]
        # descending so the smallest prime writes last
        for p in small[::-1]:
            p = int(p)
            if p * p >= hi:
                continue
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo::p] = p
        unset = np.nonzero(seg == 0)[0] + lo
        seg[unset - lo] = unset
    spf[0] = spf[1] = 0
    return SmallestPrimeFactorTable(spf)


def iter_pell_radicands(lo: int, hi: int, segment_size: int = 1 << 20) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Yield (n, primes of n) for squarefree n in [lo, hi) with no prime = 3 mod 4.

    n = 1 is yielded with an empty prime tuple.  Memory is O(segment_size).
    """
    small = [int(p) for p in base_primes(math.isqrt(max(hi - 1, 1)))]
    if lo <= 1 < hi:
        yield 1, ()
    for s in range(max(lo, 2), hi, segment_size):
        e = min(s + segment_size, hi)
        n = np.arange(s, e, dtype=np.int64)
        rem = n.copy()
        bad = np.zeros(e - s, dtype=bool)
        inc_idx, inc_p = [], []
        for p in small:
            if p * p >= e:
                break
            idx = np.arange((s + p - 1) // p * p - s, e - s, p)
            if p % 4 == 3:
                bad[idx] = True
                continue
            bad[idx[(n[idx] // p) % p == 0]] = True
            rem[idx] //= p
            inc_idx.append(idx)
            inc_p.append(np.full(idx.size, p, dtype=np.int64))
        big = rem > 1
        bad |= big & (rem % 4 == 3)
        good = ~bad
        if inc_idx:
            ii = np.concatenate(inc_idx)
            pp = np.concatenate(inc_p)
        else:
            ii = np.zeros(0, dtype=np.int64)
            pp = ii
        keep = good[ii]
        ii, pp = ii[keep], pp[keep]
        gi = np.nonzero(good & big)[0]
        ii = np.concatenate([ii, gi])
        pp = np.concatenate([pp, rem[gi]])
        order = np.argsort(ii, kind="stable")
        ii, pp = ii[order].tolist(), pp[order].tolist()
        j, m = 0, len(ii)
        for i in np.nonzero(good)[0].tolist():
            k = j
            while k < m and ii[k] == i:
                k += 1
            yield s + i, tuple(pp[j:k])
            j = k


def iter_pell_family(X: int, segment_size: int = 1 << 20, lo: int = 2) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Yield (D, primes of D) for every Pell-family discriminant lo <= D <= X, by increasing D."""
    lo = max(lo, 2)
    odd = ((n, ps) for n, ps in iter_pell_radicands(lo, X + 1, segment_size) if n % 2)
    even = ((4 * n, ps) for n, ps in iter_pell_radicands(max(2, -(-lo // 4)), X // 4 + 1, segment_size)
            if n % 2 == 0)
    yield from _merge_sorted(odd, even)


def _merge_sorted(a, b):
    import heapq
    return heapq.merge(a, b, key=lambda t: t[0])


# ---------------------------------------------------------------------------
# continued fractions and discriminants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    a0: int
    period: tuple[int, ...]


def sqrt_continued_fraction(D: int) -> ContinuedFraction:
    """Periodic continued fraction of sqrt(D) via the exact (P, Q) recurrence."""
    if D < 2:
        raise ValueError("D must be >= 2")
    a0 = math.isqrt(D)
    if a0 * a0 == D:
        raise ValueError(f"{D} is a perfect square")
    P, Q, a = 0, 1, a0
    period = []
    while True:
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (a0 + P) // Q
        period.append(a)
        if Q == 1:
            break
    return ContinuedFraction(a0, tuple(period))


def cf_pq_sequence(D: int) -> Iterator[tuple[int, int, int]]:
    """Yield (a_k, P_k, Q_k) of sqrt(D) over one period, starting at k = 0."""
    a0 = math.isqrt(D)
    P, Q, a = 0, 1, a0
    yield a, P, Q
    while True:
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (a0 + P) // Q
        yield a, P, Q
        if Q == 1:
            return


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def in_pell_family(D: int) -> bool:
    """Positive fundamental discriminant with no prime factor = 3 mod 4."""
    if D <= 1 or not is_fundamental_discriminant(D):
        return False
    return all(p % 4 != 3 for p in prime_divisors(D))


def pell_family_from_primes(primes: Sequence[int]) -> int:
    """The Pell-family discriminant whose radicand has these distinct primes."""
    n = math.prod(primes)
    return 4 * n if n % 2 == 0 else n


def radicand(D: int) -> int:
    """Squarefree m with Q(sqrt(m)) of discriminant D."""
    return D // 4 if D % 4 == 0 else D
