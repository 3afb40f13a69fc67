"""Coefficient solver for the five-exponential alternating second-order family.

A formula e^{-iA a1 s} ... e^{-iA a5 s} (stages alternating A,B,A,B,A, read
here in application order) reproduces e^{-iHs} through second order with a
leading single-step error proportional to [H,[H,B]] exactly when its
coefficients satisfy three conditions:

  1. per-label sums are one: a1+a3+a5 = 1 and a2+a4 = 1,
  2. the first-order commutator content vanishes,
  3. the two double-commutator words [A,[A,B]] and [B,[A,B]] carry equal
     coefficients (their sum is then a multiple of [H,[A,B]] = [H,[H,B]]).

With a2 = 1-a4 and a5 = 1-a1-a3 substituted, conditions 2 and 3 become two
polynomial equations in (a1, a3), solved by damped Newton iteration from a
deterministic grid of starting points. Real solutions exist only for a4
outside [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NoRealSolution(ValueError):
    """No real coefficient tuple satisfies the conditions for this a4."""


class BranchOutOfRange(IndexError):
    """Requested solution branch does not exist for this a4."""


def w2_condition_residuals(a) -> tuple[float, float, float]:
    """Signed residuals of the three design conditions for a raw 5-tuple.

    Returns (consistency, first-order commutator coefficient,
    double-commutator coefficient difference). All three vanish on a valid
    solution. This closed-form transcription is intentionally independent of
    the symbolic expansion engine, which re-derives the same quantities.
    """
    a1, a2, a3, a4, a5 = (float(x) for x in a)
    r1 = max(abs(a1 + a3 + a5 - 1.0), abs(a2 + a4 - 1.0))
    r2 = -(a1 * a2 + a1 * a4 + a3 * a4) + (a2 * a3 + a2 * a5 + a4 * a5)
    f_aab = (
        -a1 * a2 * a3
        - a1 * a2 * a5
        - a1 * a4 * a5
        - a3 * a4 * a5
        + 0.5 * a2 * a3**2
        + a2 * a3 * a5
        + 0.5 * a2 * a5**2
        + 0.5 * a4 * a5**2
    )
    f_bab = (
        -0.5 * a1 * a2**2
        - a1 * a2 * a4
        - 0.5 * a1 * a4**2
        - 0.5 * a3 * a4**2
        + a2 * a3 * a4
    )
    return r1, r2, f_aab - f_bab


@dataclass(frozen=True)
class SolverSolution:
    """One coefficient tuple with its condition residuals."""

    a: tuple[float, float, float, float, float]
    residuals: tuple[float, float, float]
    a4: float
    branch_id: int


_START_GRID = 7  # 7x7 = 49 multi-start points over [-2, 2]^2
_RESIDUAL_GATE = 1e-10
_DEDUP_TOL = 1e-8


def _full_tuple(x: np.ndarray, a4: float) -> tuple[float, ...]:
    a1, a3 = float(x[0]), float(x[1])
    return (a1, 1.0 - a4, a3, a4, 1.0 - a1 - a3)


def _system(x: np.ndarray, a4: float) -> np.ndarray:
    _, r2, r3 = w2_condition_residuals(_full_tuple(x, a4))
    return np.array([r2, r3])


def _newton(x0: np.ndarray, a4: float, tol: float, max_iter: int = 80) -> np.ndarray | None:
    """Damped Newton with a central-difference Jacobian. Deterministic."""
    x = x0.astype(float).copy()
    h = 1e-7
    for _ in range(max_iter):
        g = _system(x, a4)
        gnorm = np.linalg.norm(g)
        if gnorm < 1e-14:
            return x
        jac = np.empty((2, 2))
        for j in range(2):
            xp = x.copy()
            xm = x.copy()
            xp[j] += h
            xm[j] -= h
            jac[:, j] = (_system(xp, a4) - _system(xm, a4)) / (2 * h)
        try:
            step = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        t = 1.0
        while t > 1e-10:
            if np.linalg.norm(_system(x + t * step, a4)) < (1.0 - 0.25 * t) * gnorm:
                break
            t /= 2.0
        x = x + t * step
        if np.linalg.norm(t * step) < tol:
            return x if np.linalg.norm(_system(x, a4), np.inf) < _RESIDUAL_GATE else None
    return None


def _all_roots(a4: float, tol: float) -> list[tuple[float, ...]]:
    roots: list[np.ndarray] = []
    grid = np.linspace(-2.0, 2.0, _START_GRID)
    for a1g in grid:
        for a3g in grid:
            r = _newton(np.array([a1g, a3g]), a4, tol)
            if r is None:
                continue
            if any(np.abs(r - q).max() < _DEDUP_TOL for q in roots):
                continue
            roots.append(r)
    roots.sort(key=lambda r: r[0])
    return [_full_tuple(r, a4) for r in roots]


def solve_w2(a4: float, branch: int = 0, tol: float = 1e-12) -> SolverSolution:
    """Solve the condition system with a4 as the free parameter.

    Branches are indexed by ascending a1. Raises NoRealSolution when no
    starting point converges to a real root (in particular for any
    a4 in [0, 1]) and BranchOutOfRange for a branch index past the last root.
    """
    if 0.0 <= a4 <= 1.0:
        raise NoRealSolution(f"a4={a4!r} lies in [0, 1], where the conditions have no real solution")
    roots = _all_roots(a4, tol)
    if not roots:
        raise NoRealSolution(f"no real root converged for a4={a4!r}")
    if not 0 <= branch < len(roots):
        raise BranchOutOfRange(f"branch {branch} requested, {len(roots)} root(s) found")
    a = roots[branch]
    res = w2_condition_residuals(a)
    return SolverSolution(
        a=a,
        residuals=(abs(res[0]), abs(res[1]), abs(res[2])),
        a4=a4,
        branch_id=branch,
    )


def family_scan(
    a4_values, tol: float = 1e-12
) -> tuple[list[SolverSolution], list[float]]:
    """Solve every branch at every a4 value; failures are recorded, not raised.

    Returns (solutions in input order, branch-major within each a4) and the
    list of a4 values with no real solution.
    """
    solutions: list[SolverSolution] = []
    failures: list[float] = []
    for a4 in a4_values:
        a4 = float(a4)
        roots = [] if 0.0 <= a4 <= 1.0 else _all_roots(a4, tol)
        if not roots:
            failures.append(a4)
            continue
        for branch, a in enumerate(roots):
            res = w2_condition_residuals(a)
            solutions.append(
                SolverSolution(
                    a=a,
                    residuals=(abs(res[0]), abs(res[1]), abs(res[2])),
                    a4=a4,
                    branch_id=branch,
                )
            )
    return solutions, failures
