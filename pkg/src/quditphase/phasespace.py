"""Symplectic geometry of the phase space V = Z_d^{2n}.

Points are tuples (p_1, ..., p_n, q_1, ..., q_n).  The symplectic form is
[u, v] = u^T J v with J = [[0, I], [-I, 0]] in that block convention.
Everything works over the ring Z_d for any odd d, so submodules are used
throughout instead of subspaces; nothing here assumes the modulus is prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BudgetExceeded,
    DomainMismatch,
    NotIsotropic,
    NotSymplectic,
    OrderMismatch,
)
from .zmod import System, UnitPhase, chi, element_order, inv, invert_matrix, points

DEFAULT_BUDGET = 6561


def j_matrix(n: int, d: int) -> np.ndarray:
    """The 2n x 2n symplectic form matrix [[0, I], [-I, 0]] mod d."""
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    J[:n, n:] = np.eye(n, dtype=np.int64)
    J[n:, :n] = -np.eye(n, dtype=np.int64) % d
    return J


def symplectic_form(u: Sequence[int], v: Sequence[int], d: int) -> int:
    """[u, v] = sum_i (u_pi v_qi - u_qi v_pi) mod d."""
    if len(u) != len(v) or len(u) % 2:
        raise DomainMismatch("phase space points need equal even length")
    n = len(u) // 2
    acc = 0
    for i in range(n):
        acc += u[i] * v[n + i] - u[n + i] * v[i]
    return acc % d


def dot_form(u: Sequence[int], v: Sequence[int], d: int) -> int:
    if len(u) != len(v):
        raise DomainMismatch("points of unequal length")
    return sum(int(a) * int(b) for a, b in zip(u, v)) % d


def _pairing(form: str, d: int, length: int) -> np.ndarray:
    """Gram matrix of the chosen pairing on Z_d^length."""
    if form == "symplectic":
        if length % 2:
            raise DomainMismatch("symplectic pairing needs even length")
        return j_matrix(length // 2, d)
    if form == "dot":
        return np.eye(length, dtype=np.int64)
    raise ValueError(f"unknown form {form!r}")


@dataclass(frozen=True)
class Submodule:
    """A Z_d-submodule of Z_d^length, stored by its complete element set."""

    d: int
    length: int
    elements: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))

    @property
    def size(self) -> int:
        return len(self.elements)

    def member_set(self) -> frozenset:
        return _member_set(self)

    def __contains__(self, v) -> bool:
        return tuple(int(x) % self.d for x in v) in self.member_set()

    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)


@lru_cache(maxsize=4096)
def _member_set(M: Submodule) -> frozenset:
    return frozenset(M.elements)


def closure(vectors: Iterable[Sequence[int]], d: int, length: Optional[int] = None) -> Submodule:
    """The submodule generated by the given vectors, by worklist saturation."""
    gens = [tuple(int(x) % d for x in v) for v in vectors]
    if length is None:
        if not gens:
            raise ValueError("need either generators or an explicit length")
        length = len(gens[0])
    zero = (0,) * length
    for g in gens:
        if len(g) != length:
            raise DomainMismatch("generators of unequal length")
    elements = {zero}
    queue = list(gens)
    while queue:
        x = queue.pop()
        if x in elements:
            continue
        elements.add(x)
        for g in gens:
            y = tuple((a + b) % d for a, b in zip(x, g))
            if y not in elements:
                queue.append(y)
    return Submodule(d, length, tuple(elements))


def is_isotropic(M: Submodule) -> bool:
    """Whether the symplectic form vanishes on M x M."""
    A = M.array()
    J = j_matrix(M.length // 2, M.d)
    return not ((A @ J @ A.T) % M.d).any()


def is_maximal_isotropic(M: Submodule, system: System) -> bool:
    return is_isotropic(M) and M.size == system.dim


def complement(M: Submodule, kind: str = "symplectic") -> Submodule:
    """All ambient points pairing to zero with every element of M.

    kind 'symplectic' uses [.,.], kind 'orthogonal' the dot product.
    """
    form = "symplectic" if kind == "symplectic" else "dot"
    G = _pairing(form, M.d, M.length)
    ambient = _ambient_array(M.d, M.length)
    A = M.array()
    ok = ((ambient @ G @ A.T) % M.d == 0).all(axis=1)
    elems = tuple(tuple(int(x) for x in row) for row in ambient[ok])
    return Submodule(M.d, M.length, elems)


@lru_cache(maxsize=64)
def _ambient_array(d: int, length: int) -> np.ndarray:
    if d**length > DEFAULT_BUDGET:
        raise BudgetExceeded(f"ambient Z_{d}^{length} exceeds the scan budget")
    from .zmod import _tuples

    return np.array(_tuples(d, length), dtype=np.int64)


@dataclass(frozen=True)
class SubgroupCharacter:
    """A character of a submodule, labelled by an ambient representative.

    value(s) = chi(<rep, s>) where the pairing is the symplectic form or the
    dot product.  Two representatives give the same character exactly when
    they differ by an element of the complement of the domain, so reps are
    canonicalized to the lexicographically least point of their coset.
    """

    domain: Submodule
    rep: Tuple[int, ...]
    form: str

    def phase(self, s) -> UnitPhase:
        d = self.domain.d
        if self.form == "symplectic":
            return chi(symplectic_form(self.rep, s, d), d)
        return chi(dot_form(self.rep, s, d), d)

    def __call__(self, s) -> complex:
        return self.phase(s).value


def characters_of(M: Submodule, form: str = "dot") -> List[SubgroupCharacter]:
    """All |M| characters of M, with canonical coset representatives."""
    kind = "symplectic" if form == "symplectic" else "orthogonal"
    comp = complement(M, kind)
    compset = comp.member_set()
    d = M.d
    covered = set()
    chars = []
    for row in _ambient_array(d, M.length):
        r = tuple(int(x) for x in row)
        if r in covered:
            continue
        chars.append(SubgroupCharacter(M, r, form))
        for c in compset:
            covered.add(tuple((a + b) % d for a, b in zip(r, c)))
    if len(chars) * comp.size != d**M.length:
        raise ArithmeticError("character count does not match duality")
    return chars


def fourier_on_submodule(f, M: Submodule, form: str = "dot") -> List[complex]:
    """Fourier coefficients |M|^{-1/2} sum_s zeta(s) f(s), one per character.

    f may be a callable on points of M or a dict keyed by them.  The output
    order matches characters_of(M, form).
    """
    if isinstance(f, dict):
        data = {k: f[k] for k in f}
        fun = lambda s: data[s]
    else:
        fun = f
    scale = 1.0 / math.sqrt(M.size)
    out = []
    for ch in characters_of(M, form):
        out.append(scale * sum(ch(s) * fun(s) for s in M.elements))
    return out


def is_balanced(S: Iterable[Sequence[int]], d: int) -> bool:
    """Whether S is closed under midpoints 2^{-1}(a + b)."""
    pts = {tuple(int(x) % d for x in v) for v in S}
    half = (d + 1) // 2
    for a in pts:
        for b in pts:
            m = tuple(half * (x + y) % d for x, y in zip(a, b))
            if m not in pts:
                return False
    return True


@dataclass(frozen=True)
class AffineSet:
    """A coset base + module of a submodule, with the base canonicalized."""

    base: Tuple[int, ...]
    module: Submodule

    def __post_init__(self):
        d = self.module.d
        pts = sorted(
            tuple((a + b) % d for a, b in zip(self.base, m)) for m in self.module.elements
        )
        object.__setattr__(self, "base", pts[0])

    @property
    def elements(self) -> Tuple[Tuple[int, ...], ...]:
        d = self.module.d
        return tuple(
            sorted(tuple((a + b) % d for a, b in zip(self.base, m)) for m in self.module.elements)
        )


def affine_hull(S: Iterable[Sequence[int]], d: int) -> AffineSet:
    """The smallest affine set containing S."""
    pts = sorted({tuple(int(x) % d for x in v) for v in S})
    if not pts:
        raise ValueError("affine hull of the empty set is undefined")
    base = pts[0]
    diffs = [tuple((a - b) % d for a, b in zip(v, base)) for v in pts]
    return AffineSet(base, closure(diffs, d, length=len(base)))


def enumerate_isotropic(system: System, budget: int = DEFAULT_BUDGET) -> List[Submodule]:
    """Every isotropic submodule of V, including the zero module.

    Grown one generator at a time: an isotropic M extends by any point of
    the symplectic complement of M.  Deduplication is by element set, and
    the result is sorted canonically.  Raises BudgetExceeded when the
    ambient scan would be too large.
    """
    if system.volume > budget:
        raise BudgetExceeded(
            f"phase space of size {system.volume} exceeds the budget {budget}"
        )
    d = system.d
    L = 2 * system.n
    ambient = _ambient_array(d, L)
    J = j_matrix(system.n, d)
    zero = Submodule(d, L, ((0,) * L,))
    seen = {zero.elements: zero}
    frontier = [zero]
    top = system.dim
    while frontier:
        new_frontier = []
        for M in frontier:
            if M.size >= top:
                continue
            A = M.array()
            commuting = ((ambient @ J @ A.T) % d == 0).all(axis=1)
            members = M.member_set()
            for row in ambient[commuting]:
                v = tuple(int(x) for x in row)
                if v in members:
                    continue
                ext = {
                    tuple((m[i] + k * v[i]) % d for i in range(L))
                    for m in M.elements
                    for k in range(d)
                }
                key = tuple(sorted(ext))
                if key in seen:
                    continue
                grown = Submodule(d, L, key)
                seen[key] = grown
                new_frontier.append(grown)
        frontier = new_frontier
    return sorted(seen.values(), key=lambda m: m.elements)


def enumerate_maximal_isotropic(system: System, budget: int = DEFAULT_BUDGET) -> List[Submodule]:
    """All isotropic submodules of size exactly d^n."""
    top = system.dim
    return [M for M in enumerate_isotropic(system, budget) if M.size == top]


# -- symplectic matrices ----------------------------------------------------


def is_symplectic(S, system: System) -> bool:
    """Whether S^T J S = J mod d."""
    S = np.asarray(S, dtype=np.int64)
    if S.shape != (2 * system.n, 2 * system.n):
        return False
    J = j_matrix(system.n, system.d)
    return not ((S.T @ J @ S - J) % system.d).any()


def matvec(S, v, d: int) -> Tuple[int, ...]:
    """S v mod d for an integer matrix and a point."""
    S = np.asarray(S, dtype=np.int64)
    w = (S @ np.array(v, dtype=np.int64)) % d
    return tuple(int(x) for x in w)


def _max_order_elements(pool: List[Tuple[int, ...]], d: int) -> List[Tuple[int, ...]]:
    return [v for v in pool if element_order(v, d) == d]


def _hyperbolic_partner(v, pool, d, rng=None):
    """A w in pool with [v, w] = 1, found by scan or random draw."""
    candidates = []
    for w in pool:
        pairing = symplectic_form(v, w, d)
        if math.gcd(pairing, d) == 1:
            if rng is None:
                u = inv(pairing, d)
                return tuple((u * x) % d for x in w)
            candidates.append((w, pairing))
    if rng is not None and candidates:
        w, pairing = candidates[rng.integers(0, len(candidates))]
        u = inv(pairing, d)
        return tuple((u * x) % d for x in w)
    return None


def _symplectic_couples(pool, system: System, first=None, rng=None):
    """Split a nondegenerate pool into hyperbolic couples (v_i, w_i).

    pool is a list of points closed under the module operations.  When
    first is given it is used as v_1.  With an rng, choices are random but
    reproducible; otherwise they are the lexicographically first valid ones.
    """
    d = system.d
    vs, ws = [], []
    while len(pool) > 1:
        if first is not None:
            v = first
            first = None
        else:
            max_order = _max_order_elements(pool, d)
            if not max_order:
                raise NotSymplectic("pool has no element of maximal order")
            if rng is None:
                v = max_order[0]
            else:
                v = max_order[rng.integers(0, len(max_order))]
        w = _hyperbolic_partner(v, pool, d, rng)
        if w is None:
            raise NotSymplectic("no hyperbolic partner found; degenerate pool")
        vs.append(v)
        ws.append(w)
        pool = [
            u
            for u in pool
            if symplectic_form(v, u, d) == 0 and symplectic_form(w, u, d) == 0
        ]
    return vs, ws


def symplectic_basis_through(v, system: System, rng=None) -> np.ndarray:
    """A symplectic matrix whose first column is the maximal order point v."""
    d = system.d
    if element_order(v, d) != d:
        raise OrderMismatch("column seed must have maximal order")
    pool = [tuple(int(x) for x in row) for row in _ambient_array(d, 2 * system.n)]
    vs, ws = _symplectic_couples(pool, system, first=tuple(int(x) % d for x in v), rng=rng)
    S = np.array(vs + ws, dtype=np.int64).T % d
    if not is_symplectic(S, system):
        raise NotSymplectic("constructed basis is not symplectic")
    return S


def random_symplectic(system: System, rng) -> np.ndarray:
    """A random symplectic matrix built from random hyperbolic couples."""
    d = system.d
    pool = [tuple(int(x) for x in row) for row in _ambient_array(d, 2 * system.n)]
    vs, ws = _symplectic_couples(pool, system, rng=rng)
    S = np.array(vs + ws, dtype=np.int64).T % d
    if not is_symplectic(S, system):
        raise NotSymplectic("constructed basis is not symplectic")
    return S


def symplectic_group(system: System) -> List[np.ndarray]:
    """All symplectic 2x2 matrices mod d (single particle only)."""
    if system.n != 1:
        raise BudgetExceeded("full group enumeration is only supported for n = 1")
    d = system.d
    out = []
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    if (a * e - b * c) % d == 1:
                        out.append(np.array([[a, b], [c, e]], dtype=np.int64))
    return out


def find_symplectic_similarity(a, b, system: System) -> np.ndarray:
    """A symplectic S with S a = b mod d, for points of equal order.

    Points of the same order are always related by the symplectic group;
    the construction rescales each point to one of maximal order, completes
    both to symplectic bases, and composes.  Raises OrderMismatch when the
    orders differ.
    """
    d = system.d
    a = tuple(int(x) % d for x in a)
    b = tuple(int(x) % d for x in b)
    if not any(a) or not any(b):
        raise OrderMismatch("similarity needs nonzero points")
    k = element_order(a, d)
    if element_order(b, d) != k:
        raise OrderMismatch(f"orders differ: {k} vs {element_order(b, d)}")
    a1 = tuple((k * x // d) % d for x in a)
    b1 = tuple((k * x // d) % d for x in b)
    Sa = symplectic_basis_through(a1, system)
    Sb = symplectic_basis_through(b1, system)
    Sa_inv = invert_matrix([[int(x) for x in row] for row in Sa], d)
    if Sa_inv is None:
        raise NotSymplectic("symplectic basis matrix was not invertible")
    S = (np.array(Sb, dtype=np.int64) @ np.array(Sa_inv, dtype=np.int64)) % d
    if matvec(S, a, d) != b or not is_symplectic(S, system):
        raise NotSymplectic("similarity construction failed its own check")
    return S
