"""Product formulas as coefficient sequences, plus their dense single-step matrices.

A formula is an ordered list of (term label, coefficient) stages. Stage 0 is
applied first, i.e. it is the rightmost exponential factor of

    W(s) = e^{-i a_q s H_q} ... e^{-i a_2 s H_2} e^{-i a_1 s H_1}.

Constructors always produce per-label coefficient sums of exactly one;
raw descriptors with other sums may still be built directly for analysis.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import designer
from .hamiltonians import PartitionedHamiltonian, term_eigensystem

SUZUKI4_U = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))


class ConditionViolationError(ValueError):
    """Coefficients fail the second-order-family design conditions."""

    def __init__(self, residuals):
        self.residuals = tuple(residuals)
        super().__init__(
            "coefficients violate the design conditions; residuals "
            f"(consistency, first-order, balance) = {self.residuals}"
        )


class FractionError(ValueError):
    """Composition fractions must sum to one."""


@dataclass(frozen=True)
class ProductFormula:
    """Ordered stages (label, coefficient), stage 0 applied first."""

    stages: tuple[tuple[str, float], ...]
    declared_order: int
    name: str

    @property
    def labels(self) -> tuple[str, ...]:
        seen: list[str] = []
        for lab, _ in self.stages:
            if lab not in seen:
                seen.append(lab)
        return tuple(seen)

    def label_sums(self) -> dict[str, float]:
        sums: dict[str, float] = {}
        for lab, a in self.stages:
            sums[lab] = sums.get(lab, 0.0) + a
        return sums


def _merge_adjacent(stages) -> tuple[tuple[str, float], ...]:
    merged: list[tuple[str, float]] = []
    for lab, a in stages:
        if merged and merged[-1][0] == lab:
            merged[-1] = (lab, merged[-1][1] + a)
        else:
            merged.append((lab, a))
    return tuple(merged)


def lie_trotter(labels) -> ProductFormula:
    """First-order splitting: one unit-coefficient stage per label."""
    labels = tuple(labels)
    if not labels:
        raise ValueError("need at least one label")
    return ProductFormula(
        stages=tuple((lab, 1.0) for lab in labels),
        declared_order=1,
        name="trotter1",
    )


def strang(labels) -> ProductFormula:
    """Symmetric second-order splitting: half steps wrapped around the last label."""
    labels = tuple(labels)
    if len(labels) < 2:
        raise ValueError("need at least two labels")
    halves = [(lab, 0.5) for lab in labels[:-1]]
    stages = halves + [(labels[-1], 1.0)] + halves[::-1]
    return ProductFormula(stages=tuple(stages), declared_order=2, name="strang")


def suzuki4(labels) -> ProductFormula:
    """Fourth-order recursive splitting; 11 stages for two labels after merging."""
    labels = tuple(labels)
    if len(labels) != 2:
        raise ValueError("fourth-order construction here takes exactly two labels")
    s2 = strang(labels).stages
    u = SUZUKI4_U
    stages = []
    for c in (u, u, 1.0 - 4.0 * u, u, u):
        stages.extend((lab, c * a) for lab, a in s2)
    return ProductFormula(stages=_merge_adjacent(stages), declared_order=4, name="suzuki4")


def custom_w2(a, labels: tuple[str, str] = ("A", "B")) -> ProductFormula:
    """Five-stage alternating second-order formula from solved coefficients.

    The coefficients are validated against the design conditions (residuals
    below 1e-8) but never re-solved; obtain them from designer.solve_w2.
    """
    a = tuple(float(x) for x in a)
    if len(a) != 5:
        raise ValueError("need exactly five coefficients")
    res = designer.w2_condition_residuals(a)
    if max(abs(r) for r in res) > 1e-8:
        raise ConditionViolationError(res)
    la, lb = labels
    stages = ((la, a[0]), (lb, a[1]), (la, a[2]), (lb, a[3]), (la, a[4]))
    return ProductFormula(stages=stages, declared_order=2, name=f"w2(a4={a[3]!r})")


def reverse(f: ProductFormula) -> ProductFormula:
    """Stage order swapped; realizes the adjoint step at negated s."""
    return replace(f, stages=f.stages[::-1], name=f.name + "'")


def compose(
    f: ProductFormula,
    c1: float,
    g: ProductFormula,
    c2: float,
    name: str | None = None,
) -> ProductFormula:
    """One step of g at fraction c2 followed by f at fraction c1 (matrix f @ g).

    Fractions must sum to one so per-label coefficient sums stay one.
    """
    if abs(c1 + c2 - 1.0) > 1e-12:
        raise FractionError(f"fractions {c1} + {c2} != 1")
    if f.stages and g.stages and set(f.labels) != set(g.labels):
        raise ValueError(f"label sets differ: {f.labels} vs {g.labels}")
    stages = [(lab, c2 * a) for lab, a in g.stages] + [(lab, c1 * a) for lab, a in f.stages]
    orders = [x.declared_order for x in (f, g) if x.stages]
    return ProductFormula(
        stages=_merge_adjacent(stages),
        declared_order=min(orders) if orders else 1,
        name=name or f"{f.name}({c1!r}s)*{g.name}({c2!r}s)",
    )


def step_matrix(f: ProductFormula, h: PartitionedHamiltonian, s: float) -> np.ndarray:
    """Dense unitary for one step of the formula at step size s."""
    if not np.isfinite(s):
        raise ValueError("s must be finite")
    w = np.eye(h.dim, dtype=complex)
    for lab, a in f.stages:
        vals, vecs = term_eigensystem(h.term(lab))
        w = (vecs * np.exp(-1j * a * s * vals)) @ vecs.conj().T @ w
    return w


def parse_formula(spec: str, h: PartitionedHamiltonian) -> ProductFormula:
    """Build a formula from a CLI spec string.

    Accepted forms: "trotter1", "strang", "suzuki4", "w2:a4=<val>",
    "w2w2:a4=<val>" (two half steps), "w2w2p:a4=<val>" (half step followed
    by the reversed half step).
    """
    spec = spec.strip()
    if spec == "trotter1":
        return lie_trotter(h.labels)
    if spec == "strang":
        return strang(h.labels)
    if spec == "suzuki4":
        return suzuki4(h.labels)
    head, _, tail = spec.partition(":")
    if head in ("w2", "w2w2", "w2w2p") and tail.startswith("a4="):
        if len(h.labels) != 2:
            raise ValueError(f"{head} needs a two-term Hamiltonian, got labels {h.labels}")
        try:
            a4 = float(tail[3:])
        except ValueError:
            raise ValueError(f"bad a4 value in formula spec {spec!r}") from None
        solution = designer.solve_w2(a4)
        w2 = custom_w2(solution.a, labels=(h.labels[0], h.labels[1]))
        if head == "w2":
            return w2
        if head == "w2w2":
            return compose(w2, 0.5, w2, 0.5, name=f"w2w2(a4={a4!r})")
        return compose(w2, 0.5, reverse(w2), 0.5, name=f"w2w2p(a4={a4!r})")
    raise ValueError(f"unrecognized formula spec {spec!r}")
