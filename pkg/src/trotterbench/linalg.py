"""Dense complex linear-algebra kernels.

Everything here works on plain ndarrays and is pure: Hermitian
eigendecomposition, exponentials e^{-itM}, the principal logarithm of a
unitary (via its eigenphases), spectral norms, and (nested) commutators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur


class NonHermitianError(ValueError):
    """Input expected to be Hermitian is not."""


class NonUnitaryError(ValueError):
    """Input expected to be unitary is not."""


class EigenphaseAliasingError(ValueError):
    """A unitary eigenphase sits at or beyond the principal branch cut."""


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EigSystem:
    """Hermitian eigendecomposition with ascending eigenvalues."""

    values: np.ndarray
    vectors: np.ndarray

    def gap_at(self, k: int) -> float:
        """Distance from eigenvalue k to the rest of the spectrum."""
        d = np.abs(self.values - self.values[k])
        d[k] = np.inf
        return float(d.min())


def _hermitian_deviation(m: np.ndarray) -> float:
    return float(np.abs(m - m.conj().T).max())


def eig_hermitian(m: np.ndarray, tol: float = 1e-10) -> EigSystem:
    """Eigendecompose a Hermitian matrix; tolerance scales with the entry size."""
    scale = max(1.0, float(np.abs(m).max()))
    dev = _hermitian_deviation(m)
    if dev > tol * scale:
        raise NonHermitianError(f"max |M - M^dag| = {dev:.3e} exceeds {tol * scale:.1e}")
    values, vectors = np.linalg.eigh(m)
    return EigSystem(values=values, vectors=vectors)


def expm_i(m: np.ndarray, t: float) -> np.ndarray:
    """e^{-i t M} for Hermitian M, via eigendecomposition."""
    eig = eig_hermitian(m)
    return (eig.vectors * np.exp(-1j * t * eig.values)) @ eig.vectors.conj().T


def unitary_eigenphases(u: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigenphases in (-pi, pi] and an orthonormal eigenbasis of a unitary.

    Uses the complex Schur form, which is diagonal for normal matrices and
    keeps the basis orthonormal even for clustered eigenvalues.
    """
    dim = u.shape[0]
    dev = float(np.abs(u.conj().T @ u - np.eye(dim)).max())
    if dev > tol:
        raise NonUnitaryError(f"max |U^dag U - I| = {dev:.3e} exceeds {tol:.1e}")
    t, z = schur(u, output="complex")
    return np.angle(np.diag(t)), z


def logm_unitary(u: np.ndarray, s: float, phase_margin: float = 1e-6) -> np.ndarray:
    """Effective generator (i/s) log U of a unitary, principal branch.

    Raises EigenphaseAliasingError when any eigenphase reaches the branch
    cut at +/- pi; callers must keep s small enough that phases stay inside.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    phases, z = unitary_eigenphases(u)
    worst = float(np.abs(phases).max())
    if worst >= np.pi - phase_margin:
        raise EigenphaseAliasingError(
            f"eigenphase magnitude {worst:.6f} is within {phase_margin:.0e} of pi"
        )
    return (z * (-phases / s)) @ z.conj().T


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.svd(m, compute_uv=False)[0])


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def nested_commutator(mats: list[np.ndarray] | tuple[np.ndarray, ...]) -> np.ndarray:
    """Right-nested [m_0, [m_1, ..., [m_{k-1}, m_k]...]] for k >= 1 entries."""
    if len(mats) < 2:
        raise ValueError("need at least two matrices")
    out = commutator(mats[-2], mats[-1])
    for m in reversed(mats[:-2]):
        out = commutator(m, out)
    return out
