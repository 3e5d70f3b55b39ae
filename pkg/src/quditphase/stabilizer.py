"""Stabilizer projectors and states, quadratic-phase forms, and counting.

A maximal isotropic submodule M together with a character zeta of M selects
the joint eigenspace {psi : w(v) psi = zeta(v) psi for all v in M}, which is
one dimensional.  The projector onto it is |M|^{-1} sum_v conj(zeta(v)) w(v),
an exact average that this module also evaluates in cyclotomic integers so
the eigenvalue relations can be confirmed without floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CycArray
from .errors import (
    DomainMismatch,
    NotIsotropic,
    NotMaximal,
    NotPrimePower,
    NotSymmetric,
)
from .phasespace import (
    DEFAULT_BUDGET,
    Submodule,
    SubgroupCharacter,
    characters_of,
    closure,
    complement,
    enumerate_maximal_isotropic,
    is_isotropic,
)
from .weyl import weyl_cyc, weyl_data, weyl_operator
from .zmod import System, is_prime, positions


def _check_module(system: System, module: Submodule) -> None:
    if module.d != system.d or module.length != 2 * system.n:
        raise DomainMismatch("submodule does not live on this phase space")
    if not is_isotropic(module):
        raise NotIsotropic("stabilizer constructions need an isotropic module")


def _check_character(module: Submodule, character: SubgroupCharacter) -> None:
    if character.domain != module:
        raise DomainMismatch("character was built for a different module")


def trivial_character(module: Submodule) -> SubgroupCharacter:
    return SubgroupCharacter(module, (0,) * module.length, "dot")


def canonical_character(module: Submodule, rep, form: str = "dot") -> SubgroupCharacter:
    """The character chi(<rep, .>) with its representative canonicalized.

    Representatives that differ by the complement of the module define the
    same character; the stored one is the lexicographically least, matching
    the labels produced by characters_of.
    """
    kind = "symplectic" if form == "symplectic" else "orthogonal"
    comp = complement(module, kind)
    d = module.d
    rep = tuple(int(x) % d for x in rep)
    best = min(
        tuple((a + b) % d for a, b in zip(rep, c)) for c in comp.elements
    )
    return SubgroupCharacter(module, best, form)


def stabilizer_projector(
    system: System, module: Submodule, character: Optional[SubgroupCharacter] = None
) -> np.ndarray:
    """|M|^{-1} sum_{v in M} conj(zeta(v)) w(v), a projector of rank d^n/|M|."""
    _check_module(system, module)
    if character is None:
        character = trivial_character(module)
    _check_character(module, character)
    P = np.zeros((system.dim, system.dim), dtype=np.complex128)
    for v in module.elements:
        P += np.conj(character(v)) * weyl_operator(system, v)
    return P / module.size


def stabilizer_projector_cyc(
    system: System, module: Submodule, character: Optional[SubgroupCharacter] = None
) -> CycArray:
    """The projector as an exact cyclotomic matrix."""
    _check_module(system, module)
    if character is None:
        character = trivial_character(module)
    _check_character(module, character)
    coeffs = np.zeros((system.dim, system.dim, system.d), dtype=np.int64)
    cols = np.arange(system.dim)
    for v in module.elements:
        targets, nums = weyl_data(system, v)
        e = character.phase(v).numerator
        np.add.at(coeffs, (targets, cols, (nums - e) % system.d), 1)
    return CycArray(system.d, coeffs, module.size)


def verify_eigenvalue_relations(
    system: System, module: Submodule, character: SubgroupCharacter
) -> bool:
    """Exact check that w(v) P = zeta(v) P for every v in the module."""
    P = stabilizer_projector_cyc(system, module, character)
    for v in module.elements:
        e = character.phase(v).numerator
        if not weyl_cyc(system, v).matmul(P).eq(P.mul_root(e)):
            return False
    return True


def _canonical_phase(psi: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    k = int(np.argmax(np.abs(psi) > tol))
    entry = psi[k]
    return psi * (np.conj(entry) / abs(entry))


def stabilizer_state(
    system: System, module: Submodule, character: Optional[SubgroupCharacter] = None
) -> np.ndarray:
    """The unit vector fixed by the stabilizer, with a deterministic phase.

    The module must be maximal; the returned vector has its first entry of
    nonnegligible modulus rotated to the positive real axis.
    """
    if module.size != system.dim:
        raise NotMaximal("stabilizer states need a maximal isotropic module")
    P = stabilizer_projector(system, module, character)
    diag = np.real(np.diag(P))
    j = int(np.argmax(diag > 1e-9))
    psi = P[:, j] / np.sqrt(diag[j])
    return _canonical_phase(psi)


def stabilizer_column(
    system: System, module: Submodule, character: SubgroupCharacter, col: int
) -> CycArray:
    """Column `col` of the unnormalized projector sum, exactly.

    The column of sum_v conj(zeta(v)) w(v) is an integer combination of roots
    of unity and carries the state whenever its norm is nonzero.
    """
    _check_module(system, module)
    _check_character(module, character)
    coeffs = np.zeros((system.dim, system.d), dtype=np.int64)
    for v in module.elements:
        targets, nums = weyl_data(system, v)
        e = character.phase(v).numerator
        coeffs[targets[col], (nums[col] - e) % system.d] += 1
    return CycArray(system.d, coeffs, 1)


def gaussian_amplitudes(
    system: System, theta, linear: Optional[Sequence[int]] = None
) -> np.ndarray:
    """The flat state psi(x) = d^{-n/2} chi(x^T theta x + b.x).

    theta must be a symmetric n by n integer matrix mod d; b defaults to 0.
    """
    d, n = system.d, system.n
    theta = np.asarray(theta, dtype=np.int64) % d
    if theta.shape != (n, n):
        raise NotSymmetric(f"theta must be {n} by {n}")
    if not np.array_equal(theta, theta.T):
        raise NotSymmetric("theta must be symmetric")
    b = np.zeros(n, dtype=np.int64) if linear is None else np.asarray(linear, dtype=np.int64) % d
    P = np.array(positions(system), dtype=np.int64)
    e = (np.einsum("xi,ij,xj->x", P, theta, P) + P @ b) % d
    return np.exp(2j * np.pi * e / d) / np.sqrt(system.dim)


def graph_module(system: System, theta) -> Submodule:
    """The maximal isotropic module {(2 theta q, q)} of a quadratic phase."""
    d, n = system.d, system.n
    theta = np.asarray(theta, dtype=np.int64) % d
    gens = []
    for i in range(n):
        q = np.zeros(n, dtype=np.int64)
        q[i] = 1
        p = (2 * theta @ q) % d
        gens.append(tuple(int(x) for x in p) + tuple(int(x) for x in q))
    return closure(gens, d, 2 * n)


def graph_state(
    system: System, theta, linear: Optional[Sequence[int]] = None
) -> Tuple[Submodule, SubgroupCharacter, np.ndarray]:
    """Descriptor and amplitudes of the quadratic-phase stabilizer state.

    The state chi(x^T theta x + b.x) is fixed by w(2 theta q, q) up to the
    eigenvalue chi(-b.q), so its module is the graph module of theta and its
    character has dot representative (0, -b).
    """
    d, n = system.d, system.n
    psi = gaussian_amplitudes(system, theta, linear)
    M = graph_module(system, theta)
    b = np.zeros(n, dtype=np.int64) if linear is None else np.asarray(linear, dtype=np.int64) % d
    rep = (0,) * n + tuple(int(-x) % d for x in b)
    return M, canonical_character(M, rep, "dot"), psi


def recover_quadratic_form(
    system: System, psi: np.ndarray
) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
    """Invert gaussian_amplitudes: read (theta, b) off a flat-phase state.

    The second differences of the phase exponent give 2 theta and the first
    differences the linear part.  Raises DomainMismatch when the state is not
    of flat quadratic-phase form (after the global phase is divided out).
    """
    d, n = system.d, system.n
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (system.dim,):
        raise DomainMismatch("state has the wrong length")
    flat = 1 / np.sqrt(system.dim)
    if np.max(np.abs(np.abs(psi) - flat)) > 1e-8:
        raise DomainMismatch("amplitudes are not flat")
    ratios = psi / psi[0]
    phases = np.round(np.angle(ratios) * d / (2 * np.pi)).astype(np.int64) % d
    if np.max(np.abs(ratios - np.exp(2j * np.pi * phases / d))) > 1e-8:
        raise DomainMismatch("phases are not d-th roots of unity")
    index = {v: i for i, v in enumerate(positions(system))}

    def phi(x):
        return int(phases[index[tuple(int(a) % d for a in x)]])

    half = system.half
    theta = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        ei = np.zeros(n, dtype=np.int64)
        ei[i] = 1
        theta[i, i] = half * (phi(2 * ei) - 2 * phi(ei)) % d
        for j in range(i + 1, n):
            ej = np.zeros(n, dtype=np.int64)
            ej[j] = 1
            mixed = half * (phi(ei + ej) - phi(ei) - phi(ej)) % d
            theta[i, j] = theta[j, i] = mixed
    b = np.zeros(n, dtype=np.int64)
    for i in range(n):
        ei = np.zeros(n, dtype=np.int64)
        ei[i] = 1
        b[i] = (phi(ei) - theta[i, i]) % d
    check = gaussian_amplitudes(system, theta, b)
    if np.max(np.abs(check - psi / (psi[0] * np.sqrt(system.dim)))) > 1e-8:
        raise DomainMismatch("state is not of quadratic-phase form")
    return tuple(tuple(int(x) for x in row) for row in theta), tuple(int(x) for x in b)


def enumerate_stabilizer_states(
    system: System, budget: int = DEFAULT_BUDGET
) -> List[Tuple[Submodule, SubgroupCharacter, np.ndarray]]:
    """All stabilizer states, one per (maximal isotropic, character) pair.

    The order is deterministic: modules as enumerated, characters by their
    canonical representative.
    """
    out = []
    for M in enumerate_maximal_isotropic(system, budget):
        for ch in characters_of(M, "dot"):
            out.append((M, ch, stabilizer_state(system, M, ch)))
    return out


def divisor_sum(d: int) -> int:
    return sum(k for k in range(1, d + 1) if d % k == 0)


def maximal_isotropic_count(system: System) -> int:
    """Closed-form count of maximal isotropic submodules.

    For one degree of freedom this is the divisor sum of d; for prime d and
    n degrees it is the product of d^i + 1.  Other composite cases have no
    formula here and raise NotPrimePower.
    """
    d, n = system.d, system.n
    if n == 1:
        return divisor_sum(d)
    if is_prime(d):
        out = 1
        for i in range(1, n + 1):
            out *= d**i + 1
        return out
    raise NotPrimePower("no closed-form count for composite moduli with n > 1")


def stabilizer_state_count(system: System) -> int:
    """Number of stabilizer states: d^n per maximal isotropic module."""
    return maximal_isotropic_count(system) * system.dim


def gauss_coefficient(n: int, k: int, q: int) -> int:
    """The Gaussian binomial coefficient, counting k-subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(q ** (n - i) - 1, q ** (k - i) - 1)
    if out.denominator != 1:
        raise ArithmeticError("gaussian binomial did not reduce to an integer")
    return int(out)


def isotropic_count(system: System, k: int) -> int:
    """Number of isotropic k-dimensional subspaces of the phase space.

    Requires a prime modulus; the count multiplies the sizes of the
    successive perpendicular quotients.
    """
    d, n = system.d, system.n
    if not is_prime(d):
        raise NotPrimePower("subspace counting needs a prime modulus")
    if k < 0 or k > n:
        return 0
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(d ** (2 * n - i) - d**i, d**k - d**i)
    if out.denominator != 1:
        raise ArithmeticError("isotropic count did not reduce to an integer")
    return int(out)


def stabilizer_code_count(system: System, k: int) -> int:
    """Number of stabilizer projectors of rank d^{n-k} (prime modulus)."""
    return isotropic_count(system, k) * system.d**k
