"""Clifford unitaries: synthesis from phase-space data and recognition.

A Clifford unitary conjugates every Weyl operator to another Weyl operator;
for odd d the action on labels is affine, v -> S v + a with S symplectic.
Synthesis goes the other way: averaging w(Sv) X w(v)^dagger over all labels
yields an intertwiner that is proportional to the metaplectic unitary of S
whenever it does not vanish, which a random X avoids almost surely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DomainMismatch,
    NotClifford,
    NotPermutation,
    NotSymplectic,
    NotUnitary,
    SynthesisFailure,
)
from .phasespace import is_symplectic, j_matrix, matvec
from .stabilizer import enumerate_stabilizer_states
from .weyl import characteristic_function, weyl_operator
from .wigner import (
    odd_parity_boundary_state,
    phase_point_operator,
    wigner_of_operator,
)
from .zmod import System, chi, point_index, points, solve_linear

_MAX_SYNTHESIS_ATTEMPTS = 16


def _canonical_matrix_phase(U: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Rotate a global phase so the first sizable entry of column 0 is positive."""
    col = U[:, 0]
    k = int(np.argmax(np.abs(col) > tol))
    entry = col[k]
    return U * (np.conj(entry) / abs(entry))


def metaplectic(system: System, S, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """The unitary mu(S) with mu(S) w(v) mu(S)^dagger = w(Sv) for all v.

    The global phase is fixed deterministically.  Raises NotSymplectic for
    matrices outside the group and SynthesisFailure if every attempted
    average is numerically null.
    """
    if not is_symplectic(S, system):
        raise NotSymplectic("synthesis needs a symplectic matrix")
    S = np.asarray(S, dtype=np.int64) % system.d
    if rng is None:
        rng = np.random.default_rng(0)
    dim = system.dim
    pairs = []
    for v in points(system):
        Sv = tuple(int(x) for x in (S @ np.array(v, dtype=np.int64)) % system.d)
        pairs.append((weyl_operator(system, Sv), weyl_operator(system, v).conj().T))
    for _ in range(_MAX_SYNTHESIS_ATTEMPTS):
        X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        G = np.zeros((dim, dim), dtype=np.complex128)
        for L, R in pairs:
            G += L @ X @ R
        scale = np.sqrt(np.trace(G.conj().T @ G).real / dim)
        if scale < 1e-8:
            continue
        U = G / scale
        if np.max(np.abs(U @ U.conj().T - np.eye(dim))) < 1e-9:
            return _canonical_matrix_phase(U)
    raise SynthesisFailure("all random intertwiner seeds were numerically null")


def clifford_from_affine(
    system: System, S, a, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """w(a) mu(S), the Clifford with label action v -> S v + a."""
    U = metaplectic(system, S, rng)
    a = tuple(int(x) % system.d for x in a)
    return _canonical_matrix_phase(weyl_operator(system, a) @ U)


def recognize_clifford(
    system: System, U: np.ndarray, tol: float = 1e-8
) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
    """Read the affine label action (S, a) off a Clifford unitary.

    Each conjugated Weyl generator must expand to a single Weyl operator
    with a unimodular coefficient; the coefficient phases then determine a
    uniquely.  Raises NotUnitary or NotClifford (with the offending
    generator and its coefficient spread) when U is not of this form.
    """
    d, n = system.d, system.n
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (system.dim, system.dim):
        raise DomainMismatch("operator has the wrong shape")
    if np.max(np.abs(U @ U.conj().T - np.eye(system.dim))) > 1e-8:
        raise NotUnitary("recognition needs a unitary input")
    Udag = U.conj().T
    cols: List[Tuple[int, ...]] = []
    ts: List[int] = []
    pts = points(system)
    for i in range(2 * n):
        e = tuple(1 if j == i else 0 for j in range(2 * n))
        C = U @ weyl_operator(system, e) @ Udag
        xi = characteristic_function(system, C)
        mags = np.abs(xi)
        j = int(np.argmax(mags))
        spread = float(np.sqrt(max(0.0, np.sum(mags**2) - mags[j] ** 2)))
        if abs(mags[j] - 1) > tol or spread > tol:
            raise NotClifford(
                f"conjugated generator {e} is spread over the Weyl basis",
                witness=e,
                spread=spread,
            )
        target = pts[j]
        t = int(np.round(np.angle(xi[j]) * d / (2 * np.pi))) % d
        if abs(xi[j] - chi(t, d).value) > tol:
            raise NotClifford(
                f"conjugated generator {e} carries a phase off the root lattice",
                witness=e,
                spread=float(abs(xi[j] - chi(t, d).value)),
            )
        cols.append(target)
        ts.append(t)
    S = tuple(tuple(int(cols[j][i]) for j in range(2 * n)) for i in range(2 * n))
    if not is_symplectic(S, system):
        raise NotClifford("label action is not symplectic", witness=S)
    J = j_matrix(n, d)
    Smat = np.array(S, dtype=np.int64)
    A = [[int(x) for x in row] for row in (Smat.T @ J.T) % d]
    a = solve_linear(A, tuple(ts), d)
    if a is None:
        raise NotClifford("generator phases are inconsistent with a translation")
    return S, tuple(a)


def label_action(system: System, S, a, v) -> Tuple[int, ...]:
    """Apply the affine map v -> S v + a on phase-space labels."""
    d = system.d
    out = matvec(S, v, d)
    return tuple((x + int(y)) % d for x, y in zip(out, a))


def permutation_action(system: System, U: np.ndarray, tol: float = 1e-8) -> Tuple[int, ...]:
    """The permutation of phase points induced by conjugation.

    Matches U A(v) U^dagger against the phase point operators; entry i of
    the result is the index of the image of point i.  Raises NotPermutation
    when some image is not a phase point operator or the map fails to be a
    bijection.
    """
    pts = points(system)
    ops = [phase_point_operator(system, v) for v in pts]
    perm = []
    Udag = U.conj().T
    for i, v in enumerate(pts):
        C = U @ ops[i] @ Udag
        found = -1
        for j, A in enumerate(ops):
            if np.max(np.abs(C - A)) < tol:
                found = j
                break
        if found < 0:
            raise NotPermutation(f"image of the phase point operator at {v} is not one")
        perm.append(found)
    if len(set(perm)) != len(perm):
        raise NotPermutation("conjugation action is not a bijection on phase points")
    return tuple(perm)


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of driving nonnegative-Wigner states through a channel."""

    system: System
    labels: Tuple[str, ...]
    minima: Tuple[float, ...]
    threshold: float

    @property
    def violations(self) -> Tuple[Tuple[str, float], ...]:
        return tuple(
            (lab, m) for lab, m in zip(self.labels, self.minima) if m < self.threshold
        )

    @property
    def worst(self) -> float:
        return min(self.minima)

    @property
    def preserved(self) -> bool:
        return not self.violations


def positivity_probe_states(
    system: System,
    rng: Optional[np.random.Generator] = None,
    mixtures: int = 20,
) -> List[Tuple[str, np.ndarray]]:
    """Density matrices with nonnegative Wigner functions, labelled.

    The roster is every stabilizer state, one boundary mixture per phase
    point (Wigner minimum exactly zero), and random convex combinations of
    stabilizer states.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    probes: List[Tuple[str, np.ndarray]] = []
    states = enumerate_stabilizer_states(system)
    for k, (_, _, psi) in enumerate(states):
        probes.append((f"stabilizer-{k}", np.outer(psi, psi.conj())))
    for a in points(system):
        probes.append((f"boundary-{a}", odd_parity_boundary_state(system, a)))
    for k in range(mixtures):
        picks = rng.choice(len(states), size=3, replace=False)
        weights = rng.dirichlet(np.ones(3))
        rho = np.zeros((system.dim, system.dim), dtype=np.complex128)
        for w, idx in zip(weights, picks):
            psi = states[int(idx)][2]
            rho += w * np.outer(psi, psi.conj())
        probes.append((f"mixture-{k}", rho))
    return probes


def positivity_preservation_probe(
    system: System,
    U: np.ndarray,
    rng: Optional[np.random.Generator] = None,
    mixtures: int = 20,
    threshold: float = -1e-9,
) -> ProbeReport:
    """Drive the probe roster through conjugation by U and record minima."""
    Udag = U.conj().T
    labels = []
    minima = []
    for label, rho in positivity_probe_states(system, rng, mixtures):
        out = U @ rho @ Udag
        m, _ = wigner_of_operator(system, out).minimum()
        labels.append(label)
        minima.append(float(m))
    return ProbeReport(system, tuple(labels), tuple(minima), threshold)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    Z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
