"""Exact arrays over the cyclotomic field Q(zeta_d).

Entries are stored as integer coefficient vectors on the power basis
1, zeta, ..., zeta^{d-1} (the last axis of .coeffs), with one positive
integer denominator shared by the whole array.  The representation is
redundant; equality and rationality tests reduce modulo the d-th
cyclotomic polynomial, which is the minimal polynomial of zeta.

All arithmetic is integer arithmetic, so results are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np


def _polydiv_exact(num, den):
    """Quotient of integer polynomials (ascending coefficients), exact division."""
    num = list(num)
    dn = len(den) - 1
    while den[dn] == 0:
        dn -= 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c % den[dn]:
            raise ArithmeticError("inexact polynomial division")
        q = c // den[dn]
        out[k - dn] = q
        for j in range(dn + 1):
            num[k - dn + j] -= q * den[j]
    if any(num):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple:
    """Integer coefficients of the d-th cyclotomic polynomial, ascending."""
    poly = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_polynomial(e)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction(d: int) -> np.ndarray:
    """(d, d) matrix whose row k is x^k reduced mod the d-th cyclotomic polynomial."""
    phi = cyclotomic_polynomial(d)
    deg = len(phi) - 1
    R = np.zeros((d, d), dtype=np.int64)
    r = [0] * deg
    r[0] = 1
    for k in range(d):
        R[k, :deg] = r
        top = r[deg - 1]
        r = [0] + r[:-1]
        if top:
            for j in range(deg):
                r[j] -= top * phi[j]
    return R


@lru_cache(maxsize=None)
def _root_powers(d: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(d) / d)


class CycArray:
    """An array of cyclotomic numbers with a shared denominator.

    The logical shape excludes the trailing coefficient axis, so a scalar
    has .coeffs of shape (d,).
    """

    __slots__ = ("d", "coeffs", "den")

    def __init__(self, d: int, coeffs, den: int = 1, normalize: bool = True):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape[-1] != d:
            raise ValueError("coefficient axis must have length d")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coeffs = -coeffs
            den = -den
        if normalize and den > 1:
            g = math.gcd(int(np.gcd.reduce(np.abs(coeffs), axis=None)), den)
            if g > 1:
                coeffs = coeffs // g
                den //= g
        self.d = d
        self.coeffs = coeffs
        self.den = den

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zeros(d: int, shape=()) -> "CycArray":
        return CycArray(d, np.zeros(tuple(shape) + (d,), dtype=np.int64))

    @staticmethod
    def from_ints(d: int, values) -> "CycArray":
        """Embed an integer array as rational (constant) cyclotomic numbers."""
        values = np.asarray(values, dtype=np.int64)
        coeffs = np.zeros(values.shape + (d,), dtype=np.int64)
        coeffs[..., 0] = values
        return CycArray(d, coeffs)

    @staticmethod
    def from_fractions(d: int, values) -> "CycArray":
        """Embed an array (or nested lists) of Fractions or ints."""
        arr = np.asarray(values, dtype=object)
        fracs = np.vectorize(lambda x: Fraction(x), otypes=[object])(arr)
        den = 1
        for f in fracs.flat:
            den = den * f.denominator // math.gcd(den, f.denominator)
        coeffs = np.zeros(arr.shape + (d,), dtype=np.int64)
        num = np.vectorize(lambda f: int(f * den), otypes=[object])(fracs)
        coeffs[..., 0] = num.astype(np.int64)
        return CycArray(d, coeffs, den)

    @staticmethod
    def identity(d: int, dim: int) -> "CycArray":
        return CycArray.from_ints(d, np.eye(dim, dtype=np.int64))

    @staticmethod
    def root(d: int, k: int, shape=()) -> "CycArray":
        """zeta^k, broadcast to the given shape."""
        coeffs = np.zeros(tuple(shape) + (d,), dtype=np.int64)
        coeffs[..., k % d] = 1
        return CycArray(d, coeffs)

    # -- structure ------------------------------------------------------

    @property
    def shape(self):
        return self.coeffs.shape[:-1]

    def __getitem__(self, idx) -> "CycArray":
        return CycArray(self.d, self.coeffs[idx], self.den, normalize=False)

    def reshape(self, shape) -> "CycArray":
        return CycArray(
            self.d, self.coeffs.reshape(tuple(shape) + (self.d,)), self.den, normalize=False
        )

    # -- ring operations -------------------------------------------------

    def _check(self, other: "CycArray"):
        if self.d != other.d:
            raise ValueError("mixed cyclotomic orders")

    def __add__(self, other: "CycArray") -> "CycArray":
        self._check(other)
        g = math.gcd(self.den, other.den)
        la, lb = other.den // g, self.den // g
        return CycArray(self.d, self.coeffs * la + other.coeffs * lb, self.den * la)

    def __sub__(self, other: "CycArray") -> "CycArray":
        return self + (-other)

    def __neg__(self) -> "CycArray":
        return CycArray(self.d, -self.coeffs, self.den, normalize=False)

    def scale(self, r) -> "CycArray":
        """Multiply by an integer or Fraction."""
        r = Fraction(r)
        return CycArray(self.d, self.coeffs * r.numerator, self.den * r.denominator)

    def mul_root(self, k: int) -> "CycArray":
        """Multiply every entry by zeta^k."""
        return CycArray(self.d, np.roll(self.coeffs, k % self.d, axis=-1), self.den, normalize=False)

    def conj(self) -> "CycArray":
        """Complex conjugate, zeta^k -> zeta^{-k}."""
        idx = (-np.arange(self.d)) % self.d
        return CycArray(self.d, self.coeffs[..., idx], self.den, normalize=False)

    def mul(self, other: "CycArray") -> "CycArray":
        """Entrywise product (shapes must broadcast)."""
        self._check(other)
        d = self.d
        out = np.zeros(np.broadcast_shapes(self.shape, other.shape) + (d,), dtype=np.int64)
        for s in range(d):
            a = self.coeffs[..., s]
            if not a.any():
                continue
            for t in range(d):
                out[..., (s + t) % d] += a * other.coeffs[..., t]
        return CycArray(d, out, self.den * other.den)

    def matmul(self, other: "CycArray") -> "CycArray":
        """Matrix product of two 2-d cyclotomic arrays."""
        self._check(other)
        d = self.d
        rows = self.shape[0]
        cols = other.shape[1]
        out = np.zeros((rows, cols, d), dtype=np.int64)
        for s in range(d):
            a = self.coeffs[..., s]
            if not a.any():
                continue
            for t in range(d):
                b = other.coeffs[..., t]
                if not b.any():
                    continue
                out[..., (s + t) % d] += a @ b
        return CycArray(d, out, self.den * other.den)

    def kron(self, other: "CycArray") -> "CycArray":
        """Tensor product of two 2-d cyclotomic arrays."""
        self._check(other)
        d = self.d
        r1, c1 = self.shape
        r2, c2 = other.shape
        out = np.zeros((r1 * r2, c1 * c2, d), dtype=np.int64)
        for s in range(d):
            a = self.coeffs[..., s]
            if not a.any():
                continue
            for t in range(d):
                b = other.coeffs[..., t]
                if not b.any():
                    continue
                out[..., (s + t) % d] += np.kron(a, b)
        return CycArray(d, out, self.den * other.den)

    def transpose(self) -> "CycArray":
        return CycArray(self.d, np.swapaxes(self.coeffs, 0, 1), self.den, normalize=False)

    def dagger(self) -> "CycArray":
        return self.transpose().conj()

    def trace(self) -> "CycArray":
        return CycArray(
            self.d, np.trace(self.coeffs, axis1=0, axis2=1), self.den, normalize=False
        )

    def sum(self) -> "CycArray":
        axes = tuple(range(self.coeffs.ndim - 1))
        return CycArray(self.d, self.coeffs.sum(axis=axes), self.den, normalize=False)

    # -- decisions --------------------------------------------------------

    def _canonical(self) -> np.ndarray:
        return self.coeffs @ _reduction(self.d)

    def is_zero(self) -> bool:
        return not self._canonical().any()

    def eq(self, other: "CycArray") -> bool:
        self._check(other)
        diff = self.coeffs * other.den - other.coeffs * self.den
        return not (diff @ _reduction(self.d)).any()

    def as_fractions(self) -> Optional[np.ndarray]:
        """Object array of Fractions if every entry is rational, else None."""
        can = self._canonical()
        if can[..., 1:].any():
            return None
        flat = can[..., 0].reshape(-1)
        out = np.array([Fraction(int(x), self.den) for x in flat], dtype=object)
        return out.reshape(self.shape)

    def rational(self) -> Optional[Fraction]:
        """The value of a scalar entry as a Fraction, or None if irrational."""
        if self.shape != ():
            raise ValueError("rational() is for scalars; use as_fractions()")
        can = self._canonical()
        if can[1:].any():
            return None
        return Fraction(int(can[0]), self.den)

    def to_complex(self) -> np.ndarray:
        return (self.coeffs @ _root_powers(self.d)) / self.den
