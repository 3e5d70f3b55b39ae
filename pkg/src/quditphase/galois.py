"""Finite fields of odd prime-power order and the relabeling map.

A system of n qudits of prime dimension p can be relabeled as a single
particle over the field F_{p^n}: momenta expand in the dual basis,
positions in the primal basis, and the additive character chi_p(Tr f)
makes the field Weyl operators factor exactly into tensor products.
The module exposes that relabeling, verifies the factorization
symbolically, and measures how many multi-particle stabilizer states
the single-particle (field) picture misses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CycArray
from .errors import BudgetExceeded, DomainMismatch, SingularGram
from .phasespace import Submodule, closure, is_maximal_isotropic
from .stabilizer import enumerate_stabilizer_states, trivial_character
from .weyl import weyl_cyc
from .wigner import phase_point_operator_cyc
from .zmod import System, is_prime, position_index

__all__ = [
    "FactorizationReport",
    "GaloisField",
    "GapReport",
    "dual_basis",
    "field_lines",
    "field_phase_point",
    "field_symplectic_form",
    "field_vs_module_stabilizer_gap",
    "field_weyl",
    "iota",
    "iota_inverse",
    "multiparticle_ratio",
    "verify_factorization",
]

DEFAULT_MODULI = {
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
}


def _poly_trim(c: Sequence[int]) -> Tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and _poly_trim(a):
        shift = len(a) - 1 - dm
        factor = (a[-1] * inv_lead) % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = list(_poly_trim(a))
        if not a:
            break
    return _poly_trim(a)


def _irreducible(poly, p) -> bool:
    """Trial division by every lower-degree monic polynomial."""
    n = len(poly) - 1
    for deg in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            candidate = tuple(tail) + (1,)
            if not _poly_mod(poly, candidate, p):
                return False
    return True


class GaloisField:
    """Arithmetic in F_{p^n} as coefficient tuples over a monic modulus.

    Elements are tuples (c_0, ..., c_{n-1}) meaning sum c_k t^k, reduced
    modulo the field polynomial.  The primal basis is the power basis.
    """

    def __init__(self, p: int, n: int, poly: Optional[Sequence[int]] = None):
        if not is_prime(p) or p == 2:
            raise ValueError(f"{p} is not an odd prime")
        if n < 1:
            raise ValueError("extension degree must be positive")
        if poly is None:
            poly = DEFAULT_MODULI.get((p, n))
        if poly is None:
            poly = self._find_modulus(p, n)
        poly = tuple(c % p for c in poly)
        if len(poly) != n + 1 or poly[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if n > 1 and not _irreducible(poly, p):
            raise ValueError(f"modulus {poly} is reducible over F_{p}")
        self.p = p
        self.n = n
        self.poly = poly

    @staticmethod
    def _find_modulus(p: int, n: int) -> Tuple[int, ...]:
        if n == 1:
            return (0, 1)
        for tail in itertools.product(range(p), repeat=n):
            cand = tuple(tail) + (1,)
            if _irreducible(cand, p):
                return cand
        raise ValueError("no irreducible polynomial found")

    @property
    def order(self) -> int:
        return self.p**self.n

    def __repr__(self):
        return f"GaloisField(p={self.p}, n={self.n}, poly={self.poly})"

    # -- element helpers ------------------------------------------------

    def element(self, coeffs) -> Tuple[int, ...]:
        c = [x % self.p for x in coeffs]
        if len(c) > self.n:
            raise DomainMismatch("coefficient vector is too long")
        return tuple(c + [0] * (self.n - len(c)))

    def elements(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            self.element(c) for c in itertools.product(range(self.p), repeat=self.n)
        )

    @property
    def zero(self) -> Tuple[int, ...]:
        return (0,) * self.n

    @property
    def one(self) -> Tuple[int, ...]:
        return self.element((1,))

    @property
    def gen(self) -> Tuple[int, ...]:
        """The class of t, a root of the modulus."""
        return self.element((0, 1)) if self.n > 1 else self.one

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        prod = _poly_mul(_poly_trim(a), _poly_trim(b), self.p)
        red = _poly_mod(prod, self.poly, self.p)
        return self.element(red)

    def scalar_mul(self, c: int, a):
        return tuple((c * x) % self.p for x in a)

    def power(self, a, k: int):
        out = self.one
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def frobenius(self, a):
        return self.power(a, self.p)

    def trace(self, a) -> int:
        """Tr a = sum of the Frobenius orbit, always in the base field."""
        acc = self.zero
        cur = a
        for _ in range(self.n):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur)
        if any(acc[1:]):
            raise ArithmeticError(f"trace of {a} is not a base field element")
        return acc[0]

    def primal_basis(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            self.element((0,) * k + (1,)) for k in range(self.n)
        )


def _inverse_mod_p(G: List[List[int]], p: int) -> List[List[int]]:
    n = len(G)
    A = [[G[i][j] % p for j in range(n)] + [int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] % p), None)
        if pivot is None:
            raise SingularGram("trace Gram matrix is singular mod p")
        A[col], A[pivot] = A[pivot], A[col]
        inv = pow(A[col][col], p - 2, p)
        A[col] = [(x * inv) % p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def dual_basis(field: GaloisField, basis=None) -> Tuple[Tuple[int, ...], ...]:
    """The trace-dual basis with Tr(b^i b_j) = delta_{ij}.

    Computed by inverting the Gram matrix Tr(b_i b_j) over F_p; raises
    SingularGram when the input is not a basis.
    """
    if basis is None:
        basis = field.primal_basis()
    basis = tuple(field.element(b) for b in basis)
    if len(basis) != field.n:
        raise DomainMismatch("basis must have n elements")
    G = [[field.trace(field.mul(bi, bj)) for bj in basis] for bi in basis]
    Ginv = _inverse_mod_p(G, field.p)
    dual = []
    for i in range(field.n):
        acc = field.zero
        for j in range(field.n):
            acc = field.add(acc, field.scalar_mul(Ginv[i][j], basis[j]))
        dual.append(acc)
    return tuple(dual)


def iota(field: GaloisField, p_coord, q_coord, basis=None) -> Tuple[int, ...]:
    """Relabel a field phase-space point as a vector in Z_p^{2n}.

    The momentum expands in the dual basis and the position in the primal
    basis, so the dot product of the coordinate vectors computes Tr(pq).
    """
    if basis is None:
        basis = field.primal_basis()
    basis = tuple(field.element(b) for b in basis)
    p_coord = field.element(p_coord)
    q_coord = field.element(q_coord)
    dual = dual_basis(field, basis)
    ps = tuple(field.trace(field.mul(p_coord, b)) for b in basis)
    qs = tuple(field.trace(field.mul(q_coord, b)) for b in dual)
    return ps + qs


def iota_inverse(field: GaloisField, vector, basis=None):
    """Reassemble the field pair (p, q) from a Z_p^{2n} label."""
    if basis is None:
        basis = field.primal_basis()
    basis = tuple(field.element(b) for b in basis)
    if len(vector) != 2 * field.n:
        raise DomainMismatch("label must have length 2n")
    dual = dual_basis(field, basis)
    p_coord = field.zero
    q_coord = field.zero
    for i in range(field.n):
        p_coord = field.add(p_coord, field.scalar_mul(vector[i], dual[i]))
        q_coord = field.add(q_coord, field.scalar_mul(vector[field.n + i], basis[i]))
    return p_coord, q_coord


def field_symplectic_form(field: GaloisField, u, v) -> int:
    """Tr(u_p v_q - u_q v_p) for field phase-space pairs u, v."""
    up, uq = u
    vp, vq = v
    inner = field.sub(field.mul(up, vq), field.mul(uq, vp))
    return field.trace(inner)


def field_weyl(field: GaloisField, p_coord, q_coord, basis=None) -> CycArray:
    """The Weyl operator of a field label, in the primal position basis.

    Acts on functions of F_{p^n} by w(p,q)|x> = chi_p(Tr(2^{-1}pq + px))
    |x+q>; positions are indexed by their primal coordinates so the matrix
    can be compared entry for entry with the multi-qudit Weyl operator.
    """
    if basis is None:
        basis = field.primal_basis()
    basis = tuple(field.element(b) for b in basis)
    p_coord = field.element(p_coord)
    q_coord = field.element(q_coord)
    dual = dual_basis(field, basis)
    p, n = field.p, field.n
    system = System(p, n)
    half = (p + 1) // 2
    dim = field.order

    def coords(x):
        return tuple(field.trace(field.mul(x, b)) for b in dual)

    coeffs = np.zeros((dim, dim, p), dtype=np.int64)
    pq = field.mul(p_coord, q_coord)
    const = (half * field.trace(pq)) % p
    for x in field.elements():
        col = position_index(system, coords(x))
        row = position_index(system, coords(field.add(x, q_coord)))
        num = (const + field.trace(field.mul(p_coord, x))) % p
        coeffs[row, col, num] = 1
    return CycArray(p, coeffs)


def field_phase_point(field: GaloisField, p_coord, q_coord, basis=None) -> CycArray:
    """Phase-point operator from the field-label Weyl expansion."""
    p_coord = field.element(p_coord)
    q_coord = field.element(q_coord)
    dim = field.order
    acc = CycArray.zeros(field.p, (dim, dim))
    a = (p_coord, q_coord)
    for up in field.elements():
        for uq in field.elements():
            num = field_symplectic_form(field, a, (up, uq)) % field.p
            acc = acc + field_weyl(field, up, uq, basis).mul_root(num)
    return acc.scale(Fraction(1, dim))


@dataclass(frozen=True)
class FactorizationReport:
    """Exact-match tallies of field operators against relabeled tensor ones."""

    p: int
    n: int
    poly: Tuple[int, ...]
    labels: int
    weyl_exact: int
    phase_point_exact: Optional[int]

    @property
    def complete(self) -> bool:
        if self.weyl_exact != self.labels:
            return False
        return self.phase_point_exact in (None, self.labels)


def verify_factorization(
    p: int,
    n: int,
    poly: Optional[Sequence[int]] = None,
    basis=None,
    phase_points: bool = True,
) -> FactorizationReport:
    """Compare every field Weyl operator with its relabeled tensor product.

    The comparison is symbolic: both sides are matrices of exact p-th
    roots of unity.  Phase-point operators are checked the same way from
    their Weyl expansions.
    """
    field = GaloisField(p, n, poly)
    if field.order > 81:
        raise BudgetExceeded("factorization scans are limited to p^n <= 81")
    system = System(p, n)
    labels = [(pe, qe) for pe in field.elements() for qe in field.elements()]
    weyl_exact = 0
    cached = {}
    for pe, qe in labels:
        W_field = field_weyl(field, pe, qe, basis)
        cached[(pe, qe)] = W_field
        W_module = weyl_cyc(system, iota(field, pe, qe, basis))
        if W_field.eq(W_module):
            weyl_exact += 1
    pp_exact = 0
    if phase_points:
        for pe, qe in labels:
            acc = CycArray.zeros(p, (field.order, field.order))
            a = (pe, qe)
            for up, uq in labels:
                num = field_symplectic_form(field, a, (up, uq)) % p
                acc = acc + cached[(up, uq)].mul_root(num)
            A_field = acc.scale(Fraction(1, field.order))
            A_module = phase_point_operator_cyc(system, iota(field, pe, qe, basis))
            if A_field.eq(A_module):
                pp_exact += 1
    return FactorizationReport(
        p, n, field.poly, len(labels), weyl_exact, pp_exact if phase_points else None
    )


def field_lines(field: GaloisField) -> Tuple[Tuple[Tuple, ...], ...]:
    """All p^n + 1 lines through the origin of the field phase plane.

    Each line is the tuple of its points (p, q), scalar multiples of one
    direction; every line is isotropic because the form is alternating.
    """
    directions = [(field.one, field.zero)]
    directions += [((c), field.one) for c in field.elements()]
    lines = []
    for dp, dq in directions:
        pts = tuple(
            (field.mul(lam, dp), field.mul(lam, dq)) for lam in field.elements()
        )
        lines.append(pts)
    return tuple(lines)


def _scalar_closed(field: GaloisField, M: Submodule, basis=None) -> bool:
    t = field.gen
    for v in M.elements:
        pe, qe = iota_inverse(field, v, basis)
        image = iota(field, field.mul(t, pe), field.mul(t, qe), basis)
        if image not in M.elements:
            return False
    return True


@dataclass(frozen=True)
class GapReport:
    """Single-particle (field) versus multi-particle stabilizer counts."""

    p: int
    n: int
    field_line_count: int
    module_subspace_count: int
    field_state_count: int
    module_state_count: int
    ratio: Fraction
    line_images: Tuple[Submodule, ...]
    scalar_closed_count: int
    witness: Optional[Submodule]
    witness_vector: Optional[Tuple[int, ...]]
    witness_image: Optional[Tuple[int, ...]]


def field_vs_module_stabilizer_gap(
    p: int, n: int, poly: Optional[Sequence[int]] = None, basis=None
) -> GapReport:
    """Measure how many maximal isotropic subspaces the field picture misses.

    The ι images of field lines are exactly the scalar-closed maximal
    isotropic Z_p-subspaces; the witness is the first enumerated subspace
    that fails closure under multiplication by the field generator.
    """
    field = GaloisField(p, n, poly)
    if field.order > 9:
        raise BudgetExceeded("gap scans are limited to p^n <= 9")
    system = System(p, n)
    lines = field_lines(field)
    images = []
    for line in lines:
        vecs = [iota(field, pe, qe, basis) for pe, qe in line]
        M = closure(vecs, p, 2 * n)
        if sorted(M.elements) != sorted(vecs) or not is_maximal_isotropic(M, system):
            raise ArithmeticError("field line failed to relabel to a maximal isotropic subspace")
        images.append(M)
    subspaces = sorted(
        {M for M, _, _ in enumerate_stabilizer_states(system)},
        key=lambda M: M.elements,
    )
    closed = [M for M in subspaces if _scalar_closed(field, M, basis)]
    witness = witness_vector = witness_image = None
    for M in subspaces:
        if witness is None and not _scalar_closed(field, M, basis):
            witness = M
            for v in M.elements:
                pe, qe = iota_inverse(field, v, basis)
                t = field.gen
                image = iota(field, field.mul(t, pe), field.mul(t, qe), basis)
                if image not in M.elements:
                    witness_vector = v
                    witness_image = image
                    break
    field_states = len(lines) * field.order
    module_states = len(subspaces) * system.dim
    return GapReport(
        p,
        n,
        len(lines),
        len(subspaces),
        field_states,
        module_states,
        Fraction(module_states, field_states),
        tuple(images),
        len(closed),
        witness,
        witness_vector,
        witness_image,
    )


def multiparticle_ratio(n: int, p: int) -> Fraction:
    """Ratio of multi-particle to single-particle stabilizer state counts.

    prod_{i=1}^{n} (p^i + 1) divided by (p^n + 1); grows super-exponentially,
    at least p^{(n^2 - n)/2}.
    """
    num = 1
    for i in range(1, n + 1):
        num *= p**i + 1
    return Fraction(num, p**n + 1)
