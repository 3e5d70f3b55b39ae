"""Arithmetic over the ring Z_d for odd d, plus symbolic d-th roots of unity.

The modulus is always odd and at least 3, so 2 is a unit with
2^{-1} = (d+1)/2.  Composite moduli are allowed everywhere; code that
genuinely needs a prime or prime power checks for it explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainMismatch, NotInvertible


@dataclass(frozen=True)
class System:
    """n qudits with d levels each.

    Positions live in Q = Z_d^n and phase space points in V = Z_d^{2n},
    written (p_1, ..., p_n, q_1, ..., q_n) with the momentum block first.
    """

    d: int
    n: int = 1

    def __post_init__(self) -> None:
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError(f"modulus must be odd and >= 3, got {self.d}")
        if self.n < 1:
            raise ValueError(f"need at least one particle, got {self.n}")

    @property
    def dim(self) -> int:
        """Hilbert space dimension d^n."""
        return self.d**self.n

    @property
    def volume(self) -> int:
        """Number of phase space points d^{2n}."""
        return self.d ** (2 * self.n)

    @property
    def half(self) -> int:
        """The inverse of 2 mod d."""
        return (self.d + 1) // 2


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def inv(a: int, d: int) -> int:
    """Multiplicative inverse of a modulo d.

    Raises:
        NotInvertible: if gcd(a, d) != 1.
    """
    a %= d
    g, x, _ = _xgcd(a, d)
    if g != 1:
        raise NotInvertible(f"{a} is not a unit mod {d} (gcd {g})")
    return x % d


@dataclass(frozen=True)
class UnitPhase:
    """The root of unity exp(2 pi i numerator / d), kept symbolic.

    Products and powers reduce the exponent mod d; nothing is evaluated in
    floating point until .value is asked for.
    """

    numerator: int
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerator", self.numerator % self.d)

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        if self.d != other.d:
            raise DomainMismatch(f"phase moduli differ: {self.d} vs {other.d}")
        return UnitPhase(self.numerator + other.numerator, self.d)

    def __pow__(self, m: int) -> "UnitPhase":
        return UnitPhase(self.numerator * m, self.d)

    def conj(self) -> "UnitPhase":
        return UnitPhase(-self.numerator, self.d)

    @property
    def value(self) -> complex:
        return complex(np.exp(2j * np.pi * self.numerator / self.d))


def chi(k: int, d: int) -> UnitPhase:
    """The basic character chi(k) = exp(2 pi i k / d) of Z_d."""
    return UnitPhase(k, d)


def element_order(v, d: int) -> int:
    """Smallest k >= 1 with k*v = 0 mod d, for an int or a tuple of ints."""
    if isinstance(v, (int, np.integer)):
        v = (int(v),)
    k = 1
    for x in v:
        k = math.lcm(k, d // math.gcd(int(x) % d, d))
    return k


@lru_cache(maxsize=None)
def _tuples(d: int, length: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(product(range(d), repeat=length))


@lru_cache(maxsize=None)
def _index_map(d: int, length: int):
    return {t: i for i, t in enumerate(_tuples(d, length))}


def positions(system: System) -> Tuple[Tuple[int, ...], ...]:
    """All of Q = Z_d^n in lexicographic order (last coordinate fastest)."""
    return _tuples(system.d, system.n)


def points(system: System) -> Tuple[Tuple[int, ...], ...]:
    """All of V = Z_d^{2n} in lexicographic order on (p, q)."""
    return _tuples(system.d, 2 * system.n)


def reduce_vector(v: Iterable[int], d: int) -> Tuple[int, ...]:
    return tuple(int(x) % d for x in v)


def position_index(system: System, q) -> int:
    return _index_map(system.d, system.n)[reduce_vector(q, system.d)]


def point_index(system: System, v) -> int:
    return _index_map(system.d, 2 * system.n)[reduce_vector(v, system.d)]


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns (U, D, V) with U @ A @ V = D, D diagonal, U and V unimodular.
    No divisibility chain is enforced; that is not needed for solving
    congruences.  Everything runs on Python ints, so there is no overflow.
    """
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):
        # row_i += c * row_j
        D[i] = [x + c * y for x, y in zip(D[i], D[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]

    def add_col(i, j, c):
        # col_i += c * col_j
        for row in D:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    k = 0
    while k < min(m, n):
        pivot = None
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < best):
                    best = abs(D[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(k, pivot[0])
        swap_cols(k, pivot[1])
        clean = False
        while not clean:
            clean = True
            for i in range(k + 1, m):
                if D[i][k]:
                    add_row(i, k, -(D[i][k] // D[k][k]))
                    if D[i][k]:
                        swap_rows(k, i)
                        clean = False
            for j in range(k + 1, n):
                if D[k][j]:
                    add_col(j, k, -(D[k][j] // D[k][k]))
                    if D[k][j]:
                        swap_cols(k, j)
                        clean = False
        k += 1
    return U, D, V


def _solve_scalar(a: int, c: int, d: int) -> Optional[int]:
    """One solution y of a*y = c (mod d), or None."""
    a %= d
    c %= d
    if a == 0:
        return 0 if c == 0 else None
    g = math.gcd(a, d)
    if c % g:
        return None
    return (c // g) * inv(a // g, d // g) % (d // g)


def solve_linear(A: Sequence[Sequence[int]], b: Sequence[int], d: int):
    """One solution x of A x = b (mod d), or None if the system is inconsistent.

    Works for any integer matrix over any modulus, including composite d,
    via the Smith normal form.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    U, D, V = smith_normal_form(A)
    c = [sum(U[i][j] * int(b[j]) for j in range(m)) % d for i in range(m)]
    y = [0] * n
    for i in range(m):
        a = D[i][i] if i < n else 0
        yi = _solve_scalar(a, c[i], d)
        if yi is None:
            return None
        if i < n:
            y[i] = yi
    return tuple(sum(V[i][j] * y[j] for j in range(n)) % d for i in range(n))


def invert_matrix(A: Sequence[Sequence[int]], d: int):
    """Inverse of a square integer matrix mod d, or None if it is singular."""
    m = len(A)
    cols = []
    for j in range(m):
        e = [int(i == j) for i in range(m)]
        x = solve_linear(A, e, d)
        if x is None:
            return None
        cols.append(x)
    B = [[cols[j][i] for j in range(m)] for i in range(m)]
    # solve_linear only guarantees a right inverse column by column; for a
    # square matrix over a commutative ring that is enough, but check anyway
    for i in range(m):
        for j in range(m):
            s = sum(A[i][k] * B[k][j] for k in range(m)) % d
            if s != int(i == j):
                return None
    return tuple(tuple(row) for row in B)


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    i = 2
    while i * i <= m:
        if m % i == 0:
            return False
        i += 1
    return True


def prime_power(m: int) -> Optional[Tuple[int, int]]:
    """(p, k) with m = p^k for prime p, or None."""
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
        p += 1
    return (m, 1)
