"""Symbolic expansion of a product formula's exponent operator.

Writing one step as a time-ordered exponential, W(s) = T exp(-i int_0^s
F(sigma) d sigma), the generator expands into nested commutators of the
Hamiltonian terms:

    F(sigma) = sum_m f_m H_m
               + sum_{l>=1} (-i sigma)^l sum_words f_word [H_{w_l},...,[H_{w_1}, H_{w_0}]...]

The order-l coefficient attached to stage indices nu_l >= ... >= nu_1 > nu
is a_nu * prod a_{nu_i} with a 1/k! factor per k-fold repeated index; stage 1
is the first-applied exponential. This module evaluates that expansion
through sigma^3, which is all the second-order theory needs: it feeds the
design-condition check, the leading Magnus term, and the perturbative
energy-shift predictor.

Words are canonicalized by their innermost pair: [x, x] is dropped and
[b, a] is rewritten as -[a, b], so identical content accumulates into one
real coefficient. Imaginary prefactors (-i sigma)^l are applied only when a
matrix or expectation value is assembled.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import TYPE_CHECKING

import numpy as np

from .hamiltonians import PartitionedHamiltonian, term_dense, total_dense
from .linalg import nested_commutator

if TYPE_CHECKING:
    from .formulas import ProductFormula

Word = tuple[str, ...]  # letters outermost first; the innermost pair is sorted


class NonEigenvectorError(ValueError):
    """State fed to the energy-shift predictor is not an eigenvector of H."""


@dataclass(frozen=True, eq=False)
class ExponentExpansion:
    """Truncated exponent-operator expansion of one product formula."""

    first_order: dict[str, float]
    orders: dict[int, dict[Word, float]]
    labels: tuple[str, ...]
    max_order: int


@dataclass(frozen=True)
class ConditionReport:
    """Residuals of the three second-order-family design conditions."""

    consistency: float
    first_commutator: float
    balance: float

    @property
    def residuals(self) -> tuple[float, float, float]:
        return (self.consistency, self.first_commutator, self.balance)

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def _canonical(word: Word) -> tuple[Word, float] | None:
    if word[-2] == word[-1]:
        return None
    if word[-2] > word[-1]:
        return word[:-2] + (word[-1], word[-2]), -1.0
    return word, 1.0


def expand_exponent(f: "ProductFormula", max_order: int = 3) -> ExponentExpansion:
    """Nested-commutator expansion of the formula's generator through sigma^max_order."""
    if max_order not in (1, 2, 3):
        raise ValueError(f"max_order must be 1, 2 or 3, got {max_order}")
    labels = [lab for lab, _ in f.stages]
    coeffs = [a for _, a in f.stages]
    q = len(f.stages)

    first_order: dict[str, float] = {}
    for lab, a in f.stages:
        first_order[lab] = first_order.get(lab, 0.0) + a

    orders: dict[int, dict[Word, float]] = {l: {} for l in range(1, max_order + 1)}
    for nu in range(q):
        base = coeffs[nu]
        for l in range(1, max_order + 1):
            for tup in combinations_with_replacement(range(nu + 1, q), l):
                c = base
                for idx in set(tup):
                    k = tup.count(idx)
                    c *= coeffs[idx] ** k / factorial(k)
                raw: Word = tuple(labels[i] for i in reversed(tup)) + (labels[nu],)
                canon = _canonical(raw)
                if canon is None:
                    continue
                word, sign = canon
                orders[l][word] = orders[l].get(word, 0.0) + sign * c
    return ExponentExpansion(
        first_order=first_order,
        orders=orders,
        labels=f.labels,
        max_order=max_order,
    )


@lru_cache(maxsize=128)
def cached_expansion(f: "ProductFormula", max_order: int = 3) -> ExponentExpansion:
    return expand_exponent(f, max_order)


def check_w2_conditions(e: ExponentExpansion) -> ConditionReport:
    """Residuals of the design conditions, derived from the expansion itself.

    Independent of the closed-form transcription in the designer module;
    agreement between the two is a tested invariant.
    """
    if len(e.labels) != 2:
        raise ValueError(f"need exactly two labels, got {e.labels}")
    if e.max_order < 3:
        raise ValueError("need an expansion through sigma^3")
    la, lb = sorted(e.labels)
    r1 = max(abs(v - 1.0) for v in e.first_order.values())
    r2 = abs(e.orders[1].get((la, lb), 0.0))
    r3 = abs(e.orders[2].get((la, la, lb), 0.0) - e.orders[2].get((lb, la, lb), 0.0))
    return ConditionReport(consistency=r1, first_commutator=r2, balance=r3)


@lru_cache(maxsize=128)
def _word_matrix(h: PartitionedHamiltonian, word: Word) -> np.ndarray:
    m = nested_commutator([term_dense(h.term(lab)) for lab in word])
    m.flags.writeable = False
    return m


def exponent_matrix(e: ExponentExpansion, h: PartitionedHamiltonian, sigma: float) -> np.ndarray:
    """Dense truncation of the exponent deviation E(sigma) = F(sigma) - H.

    Each (-i sigma)^l word term is Hermitian: order-l nested commutators of
    Hermitian matrices are Hermitian for even l and anti-Hermitian for odd l.
    """
    if set(e.labels) - set(h.labels):
        raise ValueError(f"expansion labels {e.labels} not all present in {h.labels}")
    out = np.zeros((h.dim, h.dim), dtype=complex)
    for l, words in e.orders.items():
        pref = (-1j * sigma) ** l
        for word, c in words.items():
            out = out + pref * c * _word_matrix(h, word)
    return out


def magnus_h1(e: ExponentExpansion, h: PartitionedHamiltonian, s: float) -> np.ndarray:
    """Leading Magnus term H + (1/s) int_0^s E(sigma) d sigma, integrated termwise.

    Assumes a consistent formula (per-label coefficient sums of one), so the
    zeroth-order content is H itself.
    """
    out = np.array(total_dense(h), dtype=complex)
    for l, words in e.orders.items():
        pref = (-1j) ** l * s**l / (l + 1)
        for word, c in words.items():
            out = out + pref * c * _word_matrix(h, word)
    dev = float(np.abs(out - out.conj().T).max())
    if dev > 1e-10 * max(1.0, float(np.abs(out).max())):
        raise ValueError(f"leading Magnus term not Hermitian (deviation {dev:.2e})")
    return out


def _apply_word(mats: list[np.ndarray], vec: np.ndarray) -> np.ndarray:
    """Nested-commutator matrix applied to a vector, without forming the matrix."""
    if len(mats) == 1:
        return mats[0] @ vec
    return mats[0] @ _apply_word(mats[1:], vec) - _apply_word(mats[1:], mats[0] @ vec)


def predicted_delta_e(
    e: ExponentExpansion, h: PartitionedHamiltonian, psi: np.ndarray, s: float
) -> float:
    """Perturbative energy-shift prediction (1/s) int_0^s <psi|E(sigma)|psi> d sigma.

    psi must be a normalized eigenvector of the total Hamiltonian. The
    truncation at sigma^3 leaves a remainder of the same order as second-order
    perturbation theory for the second-order formulas this targets.
    """
    ht = total_dense(h)
    hpsi = ht @ psi
    energy = float(np.vdot(psi, hpsi).real)
    residual = float(np.linalg.norm(hpsi - energy * psi))
    if residual > 1e-8:
        raise NonEigenvectorError(f"|H psi - E psi| = {residual:.3e} exceeds 1e-8")
    total = 0.0 + 0.0j
    term_mats = {lab: term_dense(h.term(lab)) for lab in h.labels}
    for l, words in e.orders.items():
        pref = (-1j) ** l * s**l / (l + 1)
        for word, c in words.items():
            val = np.vdot(psi, _apply_word([term_mats[lab] for lab in word], psi))
            total += pref * c * val
    if abs(total.imag) > 1e-10:
        raise ValueError(f"predicted shift has imaginary part {total.imag:.3e}")
    return float(total.real)
