"""Weyl (shift and boost) operators and the Heisenberg group.

Conventions, for a single particle: x(q)|y> = |y+q>, z(p)|y> = chi(p y)|y>,
and the Weyl operator w(p, q) = chi(-2^{-1} p q) z(p) x(q), so that

    w(p, q)|y> = chi(2^{-1} p q + p y)|y + q>,
    w(v1) w(v2) = chi(2^{-1}[v1, v2]) w(v1 + v2).

For n particles the same formulas hold with p q and p y read as inner
products; the operator is then the tensor product of single site Weyl
operators, with site 1 the most significant index.  Every Weyl operator is
a monomial matrix, which the fast and exact paths below exploit.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .cyclotomic import CycArray
from .errors import NotNormalized, ParseError
from .phasespace import symplectic_form
from .zmod import System, positions, points

# -- index tables -------------------------------------------------------------


@lru_cache(maxsize=None)
def _tables(d: int, n: int):
    P = np.array(positions(System(d, n)), dtype=np.int64)
    weights = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    zeta = np.exp(2j * np.pi * np.arange(d) / d)
    return P, weights, zeta


def weyl_data(system: System, v, t: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Monomial data of w(v, t): target row and phase numerator per column.

    Returns (targets, nums) with w[targets[x], x] = zeta^{nums[x]} and all
    other entries zero.
    """
    d, n = system.d, system.n
    P, weights, _ = _tables(d, n)
    v = np.asarray(v, dtype=np.int64) % d
    p, q = v[:n], v[n:]
    half = system.half
    nums = (t + half * int(p @ q) + P @ p) % d
    targets = ((P + q) % d) @ weights
    return targets, nums


def weyl_operator(system: System, v, t: int = 0) -> np.ndarray:
    """Dense complex matrix of the Weyl operator w(v, t) = chi(t) w(v)."""
    d, n = system.d, system.n
    _, _, zeta = _tables(d, n)
    targets, nums = weyl_data(system, v, t)
    W = np.zeros((system.dim, system.dim), dtype=np.complex128)
    W[targets, np.arange(system.dim)] = zeta[nums]
    return W


def weyl_cyc(system: System, v, t: int = 0) -> CycArray:
    """The Weyl operator as an exact cyclotomic matrix."""
    targets, nums = weyl_data(system, v, t)
    dim = system.dim
    coeffs = np.zeros((dim, dim, system.d), dtype=np.int64)
    coeffs[targets, np.arange(dim), nums] = 1
    return CycArray(system.d, coeffs)


def shift(system: System, q) -> np.ndarray:
    """x(q): translation by q positions."""
    v = tuple([0] * system.n) + tuple(q)
    return weyl_operator(system, v)


def boost(system: System, p) -> np.ndarray:
    """z(p): multiplication by the character chi(p y)."""
    v = tuple(p) + tuple([0] * system.n)
    return weyl_operator(system, v)


def weyl_apply(system: System, v, psi: np.ndarray, t: int = 0) -> np.ndarray:
    """w(v, t) psi without building the matrix."""
    _, _, zeta = _tables(system.d, system.n)
    targets, nums = weyl_data(system, v, t)
    out = np.empty_like(psi, dtype=np.complex128)
    out[targets] = zeta[nums] * psi
    return out


# -- Heisenberg labels --------------------------------------------------------


def compose_labels(system: System, label1, label2) -> Tuple[Tuple[int, ...], int]:
    """Group law of the Heisenberg group on labels (v, t)."""
    d = system.d
    v1, t1 = label1
    v2, t2 = label2
    v = tuple((a + b) % d for a, b in zip(v1, v2))
    t = (t1 + t2 + system.half * symplectic_form(v1, v2, d)) % d
    return v, t


def inverse_label(system: System, label) -> Tuple[Tuple[int, ...], int]:
    d = system.d
    v, t = label
    return tuple(-x % d for x in v), -t % d


def weyl_trace_cyc(system: System, v, t: int = 0) -> CycArray:
    """Exact trace of w(v, t), summed over the fixed points of the shift."""
    targets, nums = weyl_data(system, v, t)
    fixed = targets == np.arange(system.dim)
    coeffs = np.bincount(nums[fixed], minlength=system.d).astype(np.int64)
    return CycArray(system.d, coeffs)


def irreducibility_sum(system: System):
    """|H|^{-1} sum over the Heisenberg group of |tr w(v, t)|^2, exactly.

    Equal to 1 exactly when the representation is irreducible.
    """
    d = system.d
    total = CycArray.zeros(d)
    for v in points(system):
        for t in range(d):
            tr = weyl_trace_cyc(system, v, t)
            total = total + tr.mul(tr.conj())
    value = total.rational()
    if value is None:
        raise ArithmeticError("character sum of a finite group must be rational")
    return value / (d ** (2 * system.n + 1))


# -- characteristic function --------------------------------------------------


def characteristic_function(system: System, rho: np.ndarray) -> np.ndarray:
    """Xi(v) = d^{-n} tr(w(v)^dag rho) for every point v, float route."""
    d, n = system.d, system.n
    _, _, zeta = _tables(d, n)
    dim = system.dim
    cols = np.arange(dim)
    out = np.empty(system.volume, dtype=np.complex128)
    for i, v in enumerate(points(system)):
        targets, nums = weyl_data(system, v)
        out[i] = (zeta[(-nums) % d] * rho[targets, cols]).sum() / dim
    return out


def characteristic_function_cyc(system: System, rho: CycArray) -> CycArray:
    """Exact characteristic function of a cyclotomic density matrix."""
    d = system.d
    dim = system.dim
    cols = np.arange(dim)
    base = np.arange(d)[None, :]
    out = np.zeros((system.volume, d), dtype=np.int64)
    for i, v in enumerate(points(system)):
        targets, nums = weyl_data(system, v)
        entries = rho.coeffs[targets, cols, :]
        # conj(zeta^k) x = shift of the coefficient vector by -k
        rolled = entries[cols[:, None], (base + nums[:, None]) % d]
        out[i] = rolled.sum(axis=0)
    return CycArray(d, out, rho.den * dim)


def weyl_expand(system: System, coeffs: np.ndarray) -> np.ndarray:
    """Rebuild the operator sum_v Xi(v) w(v) from characteristic coefficients."""
    dim = system.dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, v in enumerate(points(system)):
        if coeffs[i] != 0:
            out += coeffs[i] * weyl_operator(system, v)
    return out


# -- states -------------------------------------------------------------------


def random_state(system: System, rng) -> np.ndarray:
    """A Haar random pure state: normalized iid standard complex Gaussians."""
    z = rng.standard_normal(system.dim) + 1j * rng.standard_normal(system.dim)
    return z / np.linalg.norm(z)


def check_normalized(psi: np.ndarray, tol: float = 1e-10) -> None:
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise NotNormalized(f"state norm deviates by {abs(np.linalg.norm(psi) - 1.0):.3e}")


def basis_state(system: System, q) -> np.ndarray:
    from .zmod import position_index

    psi = np.zeros(system.dim, dtype=np.complex128)
    psi[position_index(system, q)] = 1.0
    return psi


# -- JSON serialization -------------------------------------------------------


def state_to_json(system: System, psi: np.ndarray) -> dict:
    return {
        "d": system.d,
        "n": system.n,
        "amplitudes": [[float(z.real), float(z.imag)] for z in psi],
    }


def state_from_json(data: dict) -> Tuple[System, np.ndarray]:
    try:
        system = System(int(data["d"]), int(data["n"]))
        amps = data["amplitudes"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad state record: {e}") from e
    if len(amps) != system.dim:
        raise ParseError(f"expected {system.dim} amplitudes, got {len(amps)}")
    psi = np.array([complex(re, im) for re, im in amps], dtype=np.complex128)
    return system, psi


def save_state(path, system: System, psi: np.ndarray) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_json(system, psi), fh, indent=0, sort_keys=True)
        fh.write("\n")


def load_state(path) -> Tuple[System, np.ndarray]:
    with open(path) as fh:
        return state_from_json(json.load(fh))


def operator_to_json(system: System, U: np.ndarray) -> dict:
    return {
        "d": system.d,
        "n": system.n,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in U],
    }


def operator_from_json(data: dict) -> Tuple[System, np.ndarray]:
    try:
        system = System(int(data["d"]), int(data["n"]))
        rows = data["matrix"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad operator record: {e}") from e
    if len(rows) != system.dim or any(len(r) != system.dim for r in rows):
        raise ParseError(f"expected a {system.dim} x {system.dim} matrix")
    U = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128)
    return system, U
