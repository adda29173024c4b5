"""Solvability of x^2 - D y^2 = -1 by period parity and by the norm of a unit."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arith import (
    Factorization,
    check_disc_cap,
    factorize,
    in_pell_family,
    is_fundamental_discriminant,
    radicand,
    sqrt_continued_fraction,
)

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

PERIOD_PARITY = "period-parity"
UNIT_NORM = "unit-norm"


@dataclass(frozen=True)
class PellDiscriminant:
    D: int
    prime_factors: Factorization
    pell_family: bool

    @classmethod
    def of(cls, D: int) -> "PellDiscriminant":
        check_disc_cap(D)
        if D <= 1 or not is_fundamental_discriminant(D):
            raise ValueError(f"{D} is not a positive fundamental discriminant")
        return cls(D, factorize(D), in_pell_family(D))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.prime_factors)

    @property
    def omega(self) -> int:
        return len(self.prime_factors)

    @property
    def radicand(self) -> int:
        return radicand(self.D)


@dataclass(frozen=True)
class PellVerdict:
    solvable: bool
    witness: Optional[tuple[int, int]]
    method: str
    D: int = 0

    def __post_init__(self):
        if self.witness is not None:
            x, y = self.witness
            if x * x - self.D * y * y != -1:
                raise ArithmeticError(f"bad witness {self.witness} for D={self.D}")


def _check_nonsquare(D: int) -> None:
    if D < 2:
        raise ValueError("D must be >= 2")
    r = math.isqrt(D)
    if r * r == D:
        raise ValueError(f"{D} is a perfect square")


def neg_pell_by_period(D: int) -> PellVerdict:
    """Odd period of sqrt(D) iff x^2 - D y^2 = -1 has a solution.

    The witness is the convergent just before the end of the first period,
    which is the least positive solution.
    """
    _check_nonsquare(D)
    cf = sqrt_continued_fraction(D)
    k = len(cf.period)
    if k % 2 == 0:
        return PellVerdict(False, None, PERIOD_PARITY, D)
    p_prev, p = 1, cf.a0
    q_prev, q = 0, 1
    for a in cf.period[: k - 1]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return PellVerdict(True, (p, q), PERIOD_PARITY, D)


def _unit_from_convergents(disc: int, P0: int, Q0: int, trace: int, norm: int) -> tuple[int, int, int]:
    """Least convergent p/q of w = (P0 + sqrt(disc))/Q0 with N(p - q w) = +-1.

    ``trace`` and ``norm`` are those of w.  Returns (p, q, N(p - q w)).
    """
    r = math.isqrt(disc)
    P, Q = P0, Q0
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P + r) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        n = p * p - trace * p * q + norm * q * q
        if n in (1, -1):
            return p, q, n
        P = a * Q - P
        Q = (disc - P * P) // Q


def neg_pell_by_unit(D: int) -> PellVerdict:
    """Decide x^2 - D y^2 = -1 from the fundamental unit of Z[sqrt(D)].

    The unit p + q sqrt(D) is found as the first convergent of sqrt(D) of norm
    +-1; no period length is consulted.
    """
    _check_nonsquare(D)
    p, q, n = _unit_sqrt(D)
    if n == -1:
        return PellVerdict(True, (p, q), UNIT_NORM, D)
    return PellVerdict(False, None, UNIT_NORM, D)


def _unit_sqrt(D: int) -> tuple[int, int, int]:
    # w = sqrt(D) = (0 + sqrt(D)) / 1
    return _unit_from_convergents(D, 0, 1, 0, -D)


def field_unit_norm(D: int) -> int:
    """Norm of the fundamental unit of the maximal order of discriminant D."""
    if D % 4 == 1:
        # w = (1 + sqrt(D)) / 2, trace 1, norm (1 - D)/4
        return _unit_from_convergents(D, 1, 2, 1, (1 - D) // 4)[2]
    m = D // 4
    return _unit_from_convergents(m, 0, 1, 0, -m)[2]


def negative_pell_solvable(D: int) -> bool:
    """Whether the field of discriminant D has a unit of norm -1.

    For odd D this is the literal equation in D; for D = 4m it is the equation
    in m, since x^2 - 4m y^2 = -1 has no solutions modulo 4.
    """
    return period_is_odd(radicand(D))


def period_is_odd(n: int) -> bool:
    """Parity of the period of sqrt(n), stopping at the symmetric midpoint."""
    a0 = math.isqrt(n)
    P, Q = 0, 1
    a = a0
    while True:
        P_new = a * Q - P
        Q_new = (n - P_new * P_new) // Q
        if Q_new == Q:
            return True
        if P_new == P:
            return False
        P, Q = P_new, Q_new
        a = (a0 + P) // Q


def _period_parity_many_py(values: np.ndarray) -> np.ndarray:
    return np.array([period_is_odd(int(v)) for v in values], dtype=np.bool_)


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _period_parity_many_nb(values):
        out = np.zeros(values.shape[0], dtype=np.bool_)
        for i in range(values.shape[0]):
            n = values[i]
            a0 = np.int64(np.sqrt(np.float64(n)))
            while a0 * a0 > n:
                a0 -= 1
            while (a0 + 1) * (a0 + 1) <= n:
                a0 += 1
            P = np.int64(0)
            Q = np.int64(1)
            a = a0
            while True:
                Pn = a * Q - P
                Qn = (n - Pn * Pn) // Q
                if Qn == Q:
                    out[i] = True
                    break
                if Pn == P:
                    break
                P = Pn
                Q = Qn
                a = (a0 + P) // Q
        return out


def period_parity_many(values) -> np.ndarray:
    """Vectorised :func:`period_is_odd` for non-square values below 2^62."""
    arr = np.ascontiguousarray(values, dtype=np.int64)
    if numba is None or arr.size == 0:
        return _period_parity_many_py(arr)
    return _period_parity_many_nb(arr)
