"""Positivity diagnostics for pure states and the mixed-state boundary.

The centerpiece is classify: a pure state whose Wigner function has no
value below threshold must be a stabilizer state, and the classifier
re-derives the descriptor (support coset, module, character) and confirms
it against the state.  Any failure of that chain raises TheoremViolation,
which is treated as a build-breaking event rather than a soft verdict.

The mixed-state side constructs the three-translate mixture of the odd
parity state whose Wigner function is nonnegative yet admits no convex
decomposition into stabilizer states, certified by an exact-rational
feasibility run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CycArray
from .errors import (
    BudgetExceeded,
    DomainMismatch,
    NotNormalized,
    TheoremViolation,
)
from .phasespace import (
    DEFAULT_BUDGET,
    Submodule,
    SubgroupCharacter,
    characters_of,
    closure,
    is_balanced,
    is_maximal_isotropic,
)
from .simplex import solve_equality_feasibility
from .stabilizer import (
    enumerate_stabilizer_states,
    stabilizer_projector_cyc,
    stabilizer_state,
)
from .weyl import random_state, weyl_cyc
from .wigner import (
    WignerGrid,
    antisymmetric_projector,
    phase_point_operator_cyc,
    wigner_exact,
    wigner_of_operator,
    wigner_pure,
)
from .zmod import System, points, positions

__all__ = [
    "BochnerReport",
    "ClassificationResult",
    "COUNTEREXAMPLE_TRANSLATES",
    "DecompositionReport",
    "HarnessReport",
    "ModulusReport",
    "antisymmetric_projector",
    "bochner_test",
    "classify",
    "classify_density",
    "counterexample_density_exact",
    "counterexample_mixture",
    "modulus_diagnostics",
    "purity_defect",
    "self_correlation",
    "stabilizer_decomposition_feasible",
    "verify_hudson",
]


def self_correlation(system: System, psi: np.ndarray, q) -> np.ndarray:
    """K(q, x) = psi(q + 2^{-1}x) conj(psi(q - 2^{-1}x)) as a vector over x.

    Its Fourier transform in x is the Wigner slice p -> d^n W(p, q).
    """
    d, n = system.d, system.n
    psi = np.asarray(psi, dtype=np.complex128)
    q = np.asarray(q, dtype=np.int64) % d
    h = system.half
    X = np.array(positions(system), dtype=np.int64)
    plus = (q + h * X) % d
    minus = (q - h * X) % d
    w = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return psi[plus @ w] * np.conj(psi[minus @ w])


@dataclass(frozen=True)
class BochnerReport:
    """Spectral summary of the translation matrix of a function on a module."""

    mode: str
    eigenvalues: Optional[Tuple[complex, ...]]
    psd: Optional[bool]
    constant_modulus: Optional[bool]


def _function_values(f, M: Submodule) -> Dict[Tuple[int, ...], complex]:
    if isinstance(f, dict):
        try:
            return {s: complex(f[s]) for s in M.elements}
        except KeyError as exc:
            raise DomainMismatch(f"function is missing the point {exc}") from None
    return {s: complex(f(s)) for s in M.elements}


def bochner_test(f, M: Submodule, mode: str = "psd") -> BochnerReport:
    """Test a function on a module for positive-definiteness properties.

    psd mode builds the matrix A[x, q] = f(x - q) and eigendecomposes; the
    eigenvalues coincide with |M|^{1/2} times the Fourier coefficients of f
    over the characters.  constant_modulus mode checks that f is orthogonal
    to all of its nontrivial translations.
    """
    vals = _function_values(f, M)
    d = M.d
    elems = M.elements
    if mode == "psd":
        A = np.empty((M.size, M.size), dtype=np.complex128)
        for i, x in enumerate(elems):
            for j, q in enumerate(elems):
                diff = tuple((a - b) % d for a, b in zip(x, q))
                A[i, j] = vals[diff]
        eig = np.linalg.eigvals(A)
        order = np.lexsort((eig.imag, eig.real))
        eig = eig[order]
        psd = bool(np.min(eig.real) >= -1e-9 and np.max(np.abs(eig.imag)) < 1e-9)
        return BochnerReport("psd", tuple(eig), psd, None)
    if mode == "constant_modulus":
        ok = True
        for q in elems:
            if all(x == 0 for x in q):
                continue
            total = 0.0j
            for x in elems:
                shifted = tuple((a - b) % d for a, b in zip(x, q))
                total += np.conj(vals[x]) * vals[shifted]
            if abs(total) > 1e-9:
                ok = False
                break
        return BochnerReport("constant_modulus", None, None, ok)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ModulusReport:
    """Support and modulus structure of a state's position amplitudes."""

    support: Tuple[Tuple[int, ...], ...]
    violations: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    balanced: bool
    spread: float


def modulus_diagnostics(system: System, psi: np.ndarray, tol: float = 1e-10) -> ModulusReport:
    """Check the modulus inequality |psi(q)|^2 >= |psi(q-x) psi(q+x)|.

    States with nonnegative Wigner functions satisfy it everywhere, have
    balanced (hence affine) support, and constant modulus on the support.
    """
    d, n = system.d, system.n
    psi = np.asarray(psi, dtype=np.complex128)
    mags = np.abs(psi)
    pos = positions(system)
    w = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    support = tuple(v for v, m in zip(pos, mags) if m > 1e-9)
    violations = []
    for q in pos:
        qa = np.array(q, dtype=np.int64)
        for x in pos:
            xa = np.array(x, dtype=np.int64)
            lhs = mags[int(qa @ w)] ** 2
            rhs = mags[int(((qa - xa) % d) @ w)] * mags[int(((qa + xa) % d) @ w)]
            if lhs < rhs - tol:
                violations.append((q, x))
    on_support = [m for m in mags if m > 1e-9]
    spread = float(max(on_support) - min(on_support)) if on_support else 0.0
    return ModulusReport(
        support,
        tuple(violations),
        is_balanced(support, d) if support else True,
        spread,
    )


@dataclass(frozen=True)
class ClassificationResult:
    """Verdict of the positivity classifier.

    verdict is one of "stabilizer", "negative", "not_pure".  Stabilizer
    verdicts carry the descriptor (module, character) and the canonical
    state it reproduces; negative verdicts carry the witness point and
    value; impure inputs carry the purity defect.
    """

    verdict: str
    minimum: float
    witness: Optional[Tuple[int, ...]] = None
    module: Optional[Submodule] = None
    character: Optional[SubgroupCharacter] = None
    state: Optional[np.ndarray] = None
    overlap: Optional[float] = None
    gram_defect: Optional[float] = None


def classify(
    system: System,
    psi: np.ndarray,
    negative_threshold: float = -1e-9,
    support_tol: float = 1e-7,
    match_tol: float = 1e-9,
) -> ClassificationResult:
    """Decide negative-Wigner versus stabilizer for a pure state.

    If the Wigner minimum clears the threshold, the support must be a coset
    of a maximal isotropic module carrying the flat value d^{-n}, and the
    state must match the corresponding stabilizer state up to phase.  Any
    failure of those derived facts raises TheoremViolation.
    """
    d, n = system.d, system.n
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (system.dim,):
        raise DomainMismatch("state vector has the wrong length")
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise NotNormalized("classification needs a unit vector")
    grid = wigner_pure(system, psi)
    m, arg = grid.minimum()
    if m < negative_threshold:
        return ClassificationResult("negative", float(m), witness=arg)
    flat = 1 / system.dim
    support = []
    for v, val in zip(points(system), grid.values):
        if abs(val) > support_tol:
            if abs(val - flat) > support_tol:
                raise TheoremViolation(
                    f"nonnegative Wigner function is not flat at {v}: {val}"
                )
            support.append(v)
    if len(support) != system.dim:
        raise TheoremViolation(
            f"support size {len(support)} differs from {system.dim}"
        )
    base = support[0]
    M = closure(
        [tuple((a - b) % d for a, b in zip(v, base)) for v in support], d, 2 * n
    )
    if not is_maximal_isotropic(M, system):
        raise TheoremViolation("support directions are not a maximal isotropic module")
    coset = sorted(tuple((a + b) % d for a, b in zip(base, s)) for s in M.elements)
    if coset != support:
        raise TheoremViolation("support is not a single coset of its direction module")
    for ch in characters_of(M, "dot"):
        cand = stabilizer_state(system, M, ch)
        overlap = abs(np.vdot(cand, psi))
        if overlap > 1 - match_tol:
            return ClassificationResult(
                "stabilizer",
                float(m),
                module=M,
                character=ch,
                state=cand,
                overlap=float(overlap),
            )
    raise TheoremViolation("support matched a module but no character matched the state")


def purity_defect(system: System, rho: np.ndarray) -> float:
    """1 - tr(rho^2), zero exactly for pure density matrices."""
    rho = np.asarray(rho, dtype=np.complex128)
    return float(1 - np.trace(rho @ rho).real)


def classify_density(system: System, rho: np.ndarray, **kwargs) -> ClassificationResult:
    """Classify a density matrix: impure inputs short-circuit to not_pure."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (system.dim, system.dim):
        raise DomainMismatch("density matrix has the wrong shape")
    if abs(np.trace(rho).real - 1) > 1e-9:
        raise NotNormalized("density matrix must have unit trace")
    defect = purity_defect(system, rho)
    if defect > 1e-9:
        grid_min, _ = wigner_of_operator(system, rho).minimum()
        return ClassificationResult("not_pure", float(grid_min), gram_defect=defect)
    vals, vecs = np.linalg.eigh(rho)
    return classify(system, vecs[:, -1], **kwargs)


@dataclass(frozen=True)
class HarnessReport:
    """Tallies from driving the classifier over enumerated and random states."""

    system: System
    enumerated: int
    forward_pass: int
    samples: int
    negative: int
    stabilizer_hits: int

    @property
    def forward_complete(self) -> bool:
        return self.forward_pass == self.enumerated


def verify_hudson(
    system: System,
    samples: int = 100,
    rng: Optional[np.random.Generator] = None,
    budget: int = DEFAULT_BUDGET,
) -> HarnessReport:
    """Forward and sampled-converse check of the positivity theorem.

    Every enumerated stabilizer state must classify as a stabilizer state
    with its own descriptor; random states must classify cleanly (negative
    in practice, stabilizer only with a verified descriptor).  A
    TheoremViolation from any classification propagates.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    states = enumerate_stabilizer_states(system, budget)
    forward = 0
    for M, ch, psi in states:
        res = classify(system, psi)
        if res.verdict == "stabilizer" and res.module == M and res.character == ch:
            forward += 1
    negative = 0
    hits = 0
    for _ in range(samples):
        res = classify(system, random_state(system, rng))
        if res.verdict == "negative":
            negative += 1
        else:
            hits += 1
    return HarnessReport(system, len(states), forward, samples, negative, hits)


COUNTEREXAMPLE_TRANSLATES = ((0, 0), (2, 0), (2, 2))


def counterexample_density_exact() -> Tuple[System, CycArray]:
    """The three-translate mixture of the odd-parity state, exactly.

    rho = (1/3) sum_a w(a) P_- w(a)^dagger over the translates; for d = 3
    the odd-parity projector is already a pure state.
    """
    s = System(3, 1)
    eye = CycArray.identity(3, 3)
    parity = phase_point_operator_cyc(s, (0, 0))
    pminus = (eye - parity).scale(Fraction(1, 2))
    acc = CycArray.zeros(3, (3, 3))
    for a in COUNTEREXAMPLE_TRANSLATES:
        w = weyl_cyc(s, a)
        acc = acc + w.matmul(pminus).matmul(w.dagger())
    return s, acc.scale(Fraction(1, 3))


def counterexample_mixture() -> Tuple[np.ndarray, WignerGrid]:
    """Dense counterexample density matrix and its exact Wigner grid.

    The grid is nonnegative (zero at the three translate origins, 1/6 at
    the remaining six points) although the state is not a stabilizer
    mixture; see stabilizer_decomposition_feasible.
    """
    s, rho = counterexample_density_exact()
    return rho.to_complex(), wigner_exact(s, rho)


@dataclass(frozen=True)
class DecompositionReport:
    """Exact feasibility of writing a grid as a stabilizer-state mixture.

    surviving lists the states whose support avoids the grid's zero set
    (the support-elimination argument); the certificate, when present, is
    a Farkas vector y with y^T A <= 0 and y^T W > 0 over the point-value
    equalities.
    """

    feasible: bool
    weights: Optional[Tuple[Fraction, ...]]
    certificate: Optional[Tuple[Fraction, ...]]
    surviving: Tuple[int, ...]
    zero_set: Tuple[Tuple[int, ...], ...]


def _rational_grid_values(grid: WignerGrid) -> Tuple[Fraction, ...]:
    rats = grid.rational_values()
    if rats is not None:
        return rats
    D = 2 * grid.system.volume
    out = []
    for x in np.asarray(grid.values, dtype=np.float64):
        r = Fraction(int(round(float(x) * D)), D)
        if abs(float(r) - float(x)) > 1e-9:
            raise DomainMismatch(
                "grid values are not on the rational lattice of stabilizer mixtures"
            )
        out.append(r)
    return tuple(out)


def stabilizer_decomposition_feasible(grid: WignerGrid) -> DecompositionReport:
    """Decide exactly whether a Wigner grid is a stabilizer-state mixture.

    Solves W(v) = sum_i x_i W_i(v), x >= 0 over all stabilizer states of
    the system in exact rational arithmetic.  Restricted to one degree of
    freedom with d <= 7, where the column set stays desk-sized.
    """
    system = grid.system
    if system.n != 1 or system.d > 7:
        raise BudgetExceeded("decomposition runs are limited to n = 1, d <= 7")
    states = enumerate_stabilizer_states(system)
    columns: List[Tuple[Fraction, ...]] = []
    supports: List[set] = []
    pts = points(system)
    for M, ch, _ in states:
        g = wigner_exact(system, stabilizer_projector_cyc(system, M, ch))
        rats = g.rational_values()
        columns.append(rats)
        supports.append({v for v, val in zip(pts, rats) if val})
    target = _rational_grid_values(grid)
    zeros = {v for v, val in zip(pts, target) if val == 0}
    surviving = tuple(i for i, sup in enumerate(supports) if not (sup & zeros))
    A = [[columns[j][i] for j in range(len(states))] for i in range(system.volume)]
    res = solve_equality_feasibility(A, list(target))
    return DecompositionReport(
        res.feasible,
        res.solution,
        res.certificate,
        surviving,
        tuple(sorted(zeros)),
    )
