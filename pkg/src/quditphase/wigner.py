"""Discrete Wigner functions on the phase space grid.

The Wigner function of an operator is the symplectic Fourier transform of
its characteristic function,

    W(a) = d^{-n} sum_b chi(-[a, b]) Xi(b),    Xi(b) = d^{-n} tr(w(b)^dag rho),

equivalently W(a) = d^{-n} tr(A(a) rho) with the phase point operators
A(a) = d^{-n} sum_b chi(-[a, b]) w(b)^dag.  Grids are stored flat in the
lexicographic point order of zmod.points, so index = p_index * d^n + q_index.

Two value modes exist: float (complex128/float64) and exact, the latter for
operators with entries in the cyclotomic field.  Exact grids are computed
with integer arithmetic end to end, so statements like "this value is
exactly 1/6" are decided, not approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CycArray
from .errors import DomainMismatch, NotHermitian, NotSymplectic, ParseError
from .phasespace import is_symplectic, j_matrix
from .weyl import characteristic_function, characteristic_function_cyc, weyl_data, _tables
from .zmod import System, point_index, points, positions

_KERNEL_LIMIT = 3000


@lru_cache(maxsize=32)
def _point_array(system: System) -> np.ndarray:
    return np.array(points(system), dtype=np.int64)


@lru_cache(maxsize=32)
def _sym_matrix(system: System) -> Optional[np.ndarray]:
    """[a, b] mod d for all point pairs, or None beyond the memory budget."""
    if system.volume > _KERNEL_LIMIT:
        return None
    A = _point_array(system)
    J = j_matrix(system.n, system.d)
    return (A @ J @ A.T) % system.d


@lru_cache(maxsize=32)
def _kernel(system: System) -> Optional[np.ndarray]:
    """chi(-[a, b]) as a dense matrix when small enough."""
    S = _sym_matrix(system)
    if S is None:
        return None
    return np.exp(-2j * np.pi * S / system.d)


def _fourier_apply(system: System, xi: np.ndarray) -> np.ndarray:
    """sum_b chi(-[a, b]) xi(b) for every a."""
    K = _kernel(system)
    if K is not None:
        return K @ xi
    A = _point_array(system)
    J = j_matrix(system.n, system.d)
    out = np.empty(system.volume, dtype=np.complex128)
    for i in range(system.volume):
        row = (A @ ((J.T @ A[i]) % system.d)) % system.d
        out[i] = (np.exp(-2j * np.pi * row / system.d) * xi).sum()
    return out


@dataclass
class WignerGrid:
    """A function on phase space, optionally with exact cyclotomic values.

    values has shape (d^{2n},) and is real for Hermitian sources; exact,
    when present, holds the same numbers as a CycArray over Q(zeta_d).
    """

    system: System
    values: np.ndarray
    exact: Optional[CycArray] = None

    def value_at(self, v):
        return self.values[point_index(self.system, v)]

    def real_values(self) -> np.ndarray:
        if np.iscomplexobj(self.values):
            if np.max(np.abs(self.values.imag)) > 1e-9:
                raise NotHermitian("grid has genuinely complex values")
            return self.values.real
        return self.values

    def minimum(self) -> Tuple[float, Tuple[int, ...]]:
        """Smallest value and the lexicographically first point attaining it."""
        vals = self.real_values()
        i = int(np.argmin(vals))
        return float(vals[i]), points(self.system)[i]

    def total(self) -> float:
        return float(np.sum(self.real_values()))

    def rational_values(self) -> Optional[Tuple[Fraction, ...]]:
        """All values as Fractions when the exact route ran and they are rational."""
        if self.exact is None:
            return None
        fr = self.exact.as_fractions()
        if fr is None:
            return None
        return tuple(fr)

    def exact_value_at(self, v) -> Optional[Fraction]:
        if self.exact is None:
            return None
        return self.exact[point_index(self.system, v)].rational()


def phase_point_operator(system: System, a) -> np.ndarray:
    """A(a) = d^{-n} sum_b chi(-[a, b]) w(b)^dag as a dense matrix."""
    d, n = system.d, system.n
    _, _, zeta = _tables(d, n)
    dim = system.dim
    cols = np.arange(dim)
    J = j_matrix(n, d)
    a = np.asarray(a, dtype=np.int64) % d
    out = np.zeros((dim, dim), dtype=np.complex128)
    for b in points(system):
        s = int(a @ J @ np.array(b, dtype=np.int64)) % d
        targets, nums = weyl_data(system, b)
        # w(b)^dag has entries conj(zeta^nums) at (column, target)
        out[cols, targets] += zeta[(-s - nums) % d]
    return out / dim


def phase_point_operator_cyc(system: System, a) -> CycArray:
    """The phase point operator as an exact cyclotomic matrix."""
    d, n = system.d, system.n
    dim = system.dim
    cols = np.arange(dim)
    J = j_matrix(n, d)
    a = np.asarray(a, dtype=np.int64) % d
    coeffs = np.zeros((dim, dim, d), dtype=np.int64)
    for b in points(system):
        s = int(a @ J @ np.array(b, dtype=np.int64)) % d
        targets, nums = weyl_data(system, b)
        np.add.at(coeffs, (cols, targets, (-s - nums) % d), 1)
    return CycArray(d, coeffs, den=dim)


def antisymmetric_projector(system: System) -> np.ndarray:
    """The projector (1 - A(0))/2 onto the odd-parity subspace.

    Its rank is (d^n - 1)/2; for d = 3, n = 1 it is a pure state.
    """
    dim = system.dim
    A0 = phase_point_operator(system, (0,) * (2 * system.n))
    return (np.eye(dim) - A0) / 2


def odd_parity_boundary_state(system: System, a=None) -> np.ndarray:
    """A density matrix whose Wigner minimum is exactly zero.

    The normalized odd-parity projector has Wigner value -d^{-n} at the
    origin, so mixing it with the maximally mixed state at weight
    1/(d^n + 1) lands exactly on the positivity boundary; translating by a
    moves the zero to a.
    """
    dim = system.dim
    rho = antisymmetric_projector(system) / ((dim - 1) / 2)
    sigma = (rho + np.eye(dim)) / (dim + 1)
    if a is not None and any(int(x) % system.d for x in a):
        from .weyl import weyl_operator

        W = weyl_operator(system, a)
        sigma = W @ sigma @ W.conj().T
    return sigma


def wigner_of_operator(system: System, op: np.ndarray) -> WignerGrid:
    """Wigner function of a dense operator via its characteristic function."""
    xi = characteristic_function(system, op)
    vals = _fourier_apply(system, xi) / system.dim
    if np.max(np.abs(vals.imag)) < 1e-10 * max(1.0, np.max(np.abs(vals))):
        return WignerGrid(system, vals.real)
    return WignerGrid(system, vals)


def wigner_exact(system: System, rho: CycArray) -> WignerGrid:
    """Exact Wigner grid of a cyclotomic operator; float values come for free."""
    d = system.d
    xi = characteristic_function_cyc(system, rho)
    S = _sym_matrix(system)
    if S is None:
        raise DomainMismatch("exact grids are limited to the kernel budget")
    base = np.arange(d)[None, :]
    out = np.zeros((system.volume, d), dtype=np.int64)
    for i in range(system.volume):
        # multiply xi(b) by chi(-[a,b]): shift coefficients down by [a,b]
        shifts = S[i]
        rolled = xi.coeffs[np.arange(system.volume)[:, None], (base + shifts[:, None]) % d]
        out[i] = rolled.sum(axis=0)
    exact = CycArray(d, out, xi.den * system.dim)
    grid = WignerGrid(system, exact.to_complex(), exact=exact)
    rats = grid.rational_values()
    if rats is not None:
        # rational grids get exactly representable float views
        vals = np.array([float(r) for r in rats], dtype=np.float64)
    else:
        vals = grid.values
        if np.max(np.abs(vals.imag)) < 1e-10 * max(1.0, np.max(np.abs(vals))):
            vals = vals.real
    return WignerGrid(system, vals, exact=exact)


def wigner_pure(system: System, psi: np.ndarray) -> WignerGrid:
    """Wigner function of a pure state from the correlation formula.

    W(p, q) = d^{-n} sum_xi chi(-p xi) conj(psi(q - 2^{-1} xi)) psi(q + 2^{-1} xi).
    """
    d, n = system.d, system.n
    P, weights, _ = _tables(d, n)
    dim = system.dim
    h = system.half
    plus = ((h * P[:, None, :] + P[None, :, :]) % d) @ weights  # [xi, q] -> q + h xi
    minus = ((-h * P[:, None, :] + P[None, :, :]) % d) @ weights
    C = np.conj(psi)[minus] * psi[plus]
    F = np.exp(-2j * np.pi * ((P @ P.T) % d) / d)
    W = (F @ C).real / dim
    return WignerGrid(system, W.ravel())


def marginal(grid: WignerGrid, which: str = "position") -> np.ndarray:
    """Sum out half the grid: position keeps q, momentum keeps p."""
    dim = grid.system.dim
    block = grid.real_values().reshape(dim, dim)
    if which == "position":
        return block.sum(axis=0)
    if which == "momentum":
        return block.sum(axis=1)
    raise ValueError(f"unknown marginal {which!r}")


@lru_cache(maxsize=32)
def _index_add_table(system: System) -> np.ndarray:
    A = _point_array(system)
    d = system.d
    w = d ** np.arange(2 * system.n - 1, -1, -1, dtype=np.int64)
    return ((A[:, None, :] + A[None, :, :]) % d) @ w


def moyal_product(g1: WignerGrid, g2: WignerGrid) -> WignerGrid:
    """The grid of the operator product,

    (W1 * W2)(u) = d^{-n} sum_{v,w} W1(u+v) W2(u+w) chi(-2 [v, w]).

    The result is complex in general even for two Hermitian sources.
    """
    system = g1.system
    if g2.system != system:
        raise DomainMismatch("grids live on different phase spaces")
    K = _kernel(system)
    if K is None:
        raise DomainMismatch("moyal products are limited to the kernel budget")
    T = _index_add_table(system)
    G1 = np.asarray(g1.values)[T]
    G2 = np.asarray(g2.values)[T]
    vals = (G1 @ (K * K) * G2).sum(axis=1) / system.dim
    return WignerGrid(system, vals)


def grid_overlap(g1: WignerGrid, g2: WignerGrid) -> float:
    """d^n sum_v W1(v) W2(v), which equals tr(rho sigma) for Hermitian sources."""
    if g1.system != g2.system:
        raise DomainMismatch("grids live on different phase spaces")
    return float(g1.system.dim * np.sum(g1.real_values() * g2.real_values()))


def affine_transform_grid(grid: WignerGrid, S, a) -> WignerGrid:
    """The grid W'(S v + a) = W(v), i.e. the push forward along v -> S v + a."""
    system = grid.system
    d = system.d
    if not is_symplectic(S, system):
        raise NotSymplectic("affine transport needs a symplectic matrix")
    S = np.asarray(S, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64) % d
    A = _point_array(system)
    w = d ** np.arange(2 * system.n - 1, -1, -1, dtype=np.int64)
    target = ((A @ S.T + a) % d) @ w
    vals = np.empty_like(np.asarray(grid.values))
    vals[target] = grid.values
    exact = None
    if grid.exact is not None:
        coeffs = np.empty_like(grid.exact.coeffs)
        coeffs[target] = grid.exact.coeffs
        exact = CycArray(d, coeffs, grid.exact.den, normalize=False)
    return WignerGrid(system, vals, exact=exact)


# -- serialization ------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def grid_to_csv(grid: WignerGrid, fh) -> None:
    n = grid.system.n
    if n == 1:
        header = "p,q,value"
    else:
        header = ",".join([f"p{i+1}" for i in range(n)] + [f"q{i+1}" for i in range(n)] + ["value"])
    fh.write(header + "\n")
    vals = grid.real_values()
    for v, x in zip(points(grid.system), vals):
        fh.write(",".join(str(c) for c in v) + "," + _fmt(x) + "\n")


def grid_from_csv(fh) -> WignerGrid:
    """Rebuild a grid from its CSV serialization, verifying full coverage."""
    header = fh.readline().strip()
    cols = header.split(",")
    if len(cols) < 3 or len(cols) % 2 == 0 or cols[-1] != "value":
        raise ParseError(f"unrecognized grid header {header!r}")
    L = len(cols) - 1
    rows = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != L + 1:
            raise ParseError(f"bad grid row {line!r}")
        rows.append((tuple(int(x) for x in parts[:L]), float(parts[L])))
    if not rows:
        raise ParseError("grid file holds no rows")
    d = max(max(v) for v, _ in rows) + 1
    n = L // 2
    try:
        system = System(d, n)
    except ValueError as exc:
        raise ParseError(f"coordinates do not span an odd modulus: {exc}") from None
    if len(rows) != system.volume:
        raise ParseError(f"expected {system.volume} rows, found {len(rows)}")
    vals = np.empty(system.volume, dtype=np.float64)
    seen = np.zeros(system.volume, dtype=bool)
    for v, x in rows:
        i = point_index(system, v)
        if seen[i]:
            raise ParseError(f"duplicate grid point {v}")
        seen[i] = True
        vals[i] = x
    if not seen.all():
        raise ParseError("grid rows do not cover phase space")
    return WignerGrid(system, vals)


def grid_to_pgm(grid: WignerGrid, fh) -> None:
    """P2 grayscale rendering: rows are momentum indices, columns position.

    Values map affinely onto 0..255 with the grid minimum black and the
    maximum white; the exact map is recorded in the header comment.
    """
    dim = grid.system.dim
    vals = grid.real_values().reshape(dim, dim)
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo
    fh.write("P2\n")
    fh.write(f"# wigner grid d={grid.system.d} n={grid.system.n} rows=p cols=q\n")
    fh.write(f"# gray = round(255*(value-min)/(max-min)), min={_fmt(lo)} max={_fmt(hi)}\n")
    fh.write(f"{dim} {dim}\n255\n")
    if span <= 0:
        gray = np.zeros((dim, dim), dtype=int)
    else:
        gray = np.rint(255 * (vals - lo) / span).astype(int)
    for row in gray:
        fh.write(" ".join(str(int(g)) for g in row) + "\n")


def grid_to_svg(grid: WignerGrid, fh, cell: int = 24) -> None:
    """A minimal self-contained SVG heatmap with one rect per grid point."""
    dim = grid.system.dim
    vals = grid.real_values().reshape(dim, dim)
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo
    size = dim * cell
    fh.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
    )
    fh.write(f"<!-- wigner grid d={grid.system.d} n={grid.system.n} rows=p cols=q -->\n")
    for i in range(dim):
        for j in range(dim):
            if span <= 0:
                g = 0
            else:
                g = int(round(255 * (vals[i, j] - lo) / span))
            fh.write(
                f'<rect x="{j * cell}" y="{i * cell}" width="{cell}" height="{cell}" '
                f'fill="rgb({g},{g},{g})"><title>p={i} q={j} value={_fmt(vals[i, j])}'
                f"</title></rect>\n"
            )
    fh.write("</svg>\n")


# -- axiomatic uniqueness -----------------------------------------------------


@dataclass
class UniquenessReport:
    system: System
    singular_values: np.ndarray
    solution_dimension: int
    identity_residual: float
    parity_residual: float
    weights: Tuple[float, float]
    pin_deviation: float


def axiomatic_uniqueness_check(system: System, rng=None) -> UniquenessReport:
    """Solve the covariance constraints on A'(0) and test the marginal pin.

    The commutant of the full metaplectic image is computed as a numerical
    null space; translation covariance then determines every other A'(v).
    Imposing the position marginal axiom on basis states pins A'(0) down to
    the standard parity operator.
    """
    from .clifford import metaplectic
    from .phasespace import symplectic_group
    from .weyl import weyl_operator

    if rng is None:
        rng = np.random.default_rng(0)
    d = system.d
    dim = system.dim
    eye = np.eye(dim, dtype=np.complex128)
    blocks = []
    for S in symplectic_group(system):
        U = metaplectic(system, S, rng=rng)
        blocks.append(np.kron(U, eye) - np.kron(eye, U.T))
    M = np.vstack(blocks)
    _, sing, vh = np.linalg.svd(M)
    tol = 1e-8 * sing[0]
    dim_null = int(np.sum(sing < tol))
    basis = vh[len(sing) - dim_null :].conj()

    def residual(X):
        x = X.ravel()
        proj = basis.conj().T @ (basis @ x)
        return float(np.linalg.norm(x - proj) / np.linalg.norm(x))

    A0 = phase_point_operator(system, (0,) * (2 * system.n))
    id_res = residual(eye)
    parity_res = residual(A0)

    # marginal responses of the two spanning solutions on all basis states
    rows = []
    rhs = []
    for m in range(dim):
        psi = np.zeros(dim, dtype=np.complex128)
        psi[m] = 1.0
        margs = []
        for X in (eye, A0):
            grid = np.empty(system.volume, dtype=np.float64)
            for i, v in enumerate(points(system)):
                W = weyl_operator(system, v)
                grid[i] = ((W @ X @ W.conj().T) @ psi)[m].real / dim
            margs.append(grid.reshape(dim, dim).sum(axis=0))
        rows.append(np.stack(margs, axis=1))
        want = np.zeros(dim)
        want[m] = 1.0
        rhs.append(want)
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    pinned = sol[0] * eye + sol[1] * A0
    pin_dev = float(np.max(np.abs(pinned - A0)))
    return UniquenessReport(
        system=system,
        singular_values=sing,
        solution_dimension=dim_null,
        identity_residual=id_res,
        parity_residual=parity_res,
        weights=(float(sol[0]), float(sol[1])),
        pin_deviation=pin_dev,
    )
