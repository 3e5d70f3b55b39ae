"""Exact feasibility testing for A x = b, x >= 0 over the rationals.

Phase-one simplex on Fraction tableaus with Bland's pivoting rule, which
cannot cycle, so termination is unconditional.  The outcome is either a
feasible point or a Farkas certificate y with y^T A <= 0 and y^T b > 0,
and whichever is produced is re-verified exactly before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of an exact feasibility run.

    Exactly one of solution and certificate is set.  A solution satisfies
    the equalities with nonnegative entries; a certificate y satisfies
    y^T A <= 0 componentwise while y^T b > 0, which rules out any
    nonnegative solution.
    """

    feasible: bool
    solution: Optional[Tuple[Fraction, ...]]
    certificate: Optional[Tuple[Fraction, ...]]


def _verify(A, b, result: FeasibilityResult) -> None:
    m = len(A)
    if result.feasible:
        x = result.solution
        if any(v < 0 for v in x):
            raise ArithmeticError("simplex returned a negative component")
        for i in range(m):
            total = sum(Fraction(a) * v for a, v in zip(A[i], x))
            if total != Fraction(b[i]):
                raise ArithmeticError("simplex solution violates an equality")
    else:
        y = result.certificate
        k = len(A[0]) if m else 0
        for j in range(k):
            if sum(y[i] * Fraction(A[i][j]) for i in range(m)) > 0:
                raise ArithmeticError("certificate fails y^T A <= 0")
        if sum(y[i] * Fraction(b[i]) for i in range(m)) <= 0:
            raise ArithmeticError("certificate fails y^T b > 0")


def solve_equality_feasibility(
    A: Sequence[Sequence], b: Sequence
) -> FeasibilityResult:
    """Decide whether A x = b admits x >= 0, exactly.

    A and b may hold ints, Fractions, or anything Fraction accepts exactly.
    """
    rows = [[Fraction(x) for x in row] for row in A]
    rhs = [Fraction(x) for x in b]
    m = len(rows)
    k = len(rows[0]) if m else 0
    if any(len(row) != k for row in rows):
        raise ValueError("ragged constraint matrix")
    if len(rhs) != m:
        raise ValueError("right-hand side length does not match the matrix")
    if m == 0:
        return FeasibilityResult(True, (), None)
    signs = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            signs[i] = -1
    width = k + m + 1
    T = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(rows[i] + art + [rhs[i]])
    basis = list(range(k, k + m))
    # reduced costs of the phase-one objective (sum of artificials); the
    # last entry tracks minus the objective value
    cost = []
    for j in range(width):
        direct = Fraction(1) if k <= j < k + m else Fraction(0)
        cost.append(direct - sum(T[i][j] for i in range(m)))
    while True:
        enter = -1
        for j in range(k + m):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise ArithmeticError("phase-one objective cannot be unbounded")
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        f = cost[enter]
        if f:
            cost = [x - f * y for x, y in zip(cost, T[leave])]
        basis[leave] = enter
    value = -cost[-1]
    if value == 0:
        x = [Fraction(0)] * k
        for i, var in enumerate(basis):
            if var < k:
                x[var] = T[i][-1]
        result = FeasibilityResult(True, tuple(x), None)
    else:
        y = tuple(signs[i] * (1 - cost[k + i]) for i in range(m))
        result = FeasibilityResult(False, None, y)
    _verify(A, b, result)
    return result
