"""Dense complex linear algebra for one-, two-, and three-qubit operators.

Every operator in this package lives on one, two, or three qubits, so
matrices are plain numpy arrays of shape (2, 2), (4, 4), or (8, 8).
This module provides the small set of primitives everything else is built
on (Kronecker products, partial traces, Hermitian eigendecomposition,
Hermitian matrix exponentials) together with the validated value types
``DensityMatrix`` and ``PureQubit``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SUPPORTED_DIMS = (2, 4, 8)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10  # eigenvalues of a valid density matrix may dip this far below 0


def cmatrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a complex square matrix of dimension 2, 4, or 8."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] not in SUPPORTED_DIMS:
        raise ValueError("unsupported dimension")
    return m


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def _as_array(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.mat
    return np.asarray(m, dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace, positive-semidefinite matrix.

    Validation runs on construction, so any ``DensityMatrix`` handed around
    the package is guaranteed to satisfy the three state invariants within
    the module tolerances.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = cmatrix(self.mat)
        object.__setattr__(self, "mat", m)
        defect = float(np.max(np.abs(m - m.conj().T)))
        if defect > HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian (defect {defect:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1")
        lo = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
        if lo < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_pure(cls, ket) -> "DensityMatrix":
        """Build |psi><psi| from a normalized state vector."""
        v = np.asarray(ket, dtype=complex).ravel()
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        if dim not in SUPPORTED_DIMS:
            raise ValueError("unsupported dimension")
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class PureQubit:
    """Pure input qubit sqrt(a2)|0> + sqrt(1-a2) e^{i gamma}|1>.

    The pair (``alpha_sq``, ``gamma``) are the two independent coordinates
    of the input-state distribution; the amplitudes are normalized exactly
    by construction.
    """

    alpha_sq: float
    gamma: float

    def __post_init__(self):
        if not (0.0 <= self.alpha_sq <= 1.0):
            raise ValueError(f"alpha_sq must lie in [0, 1], got {self.alpha_sq}")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")
        object.__setattr__(self, "gamma", float(self.gamma) % (2.0 * math.pi))

    def ket(self) -> np.ndarray:
        a = math.sqrt(self.alpha_sq)
        b = math.sqrt(1.0 - self.alpha_sq) * np.exp(1j * self.gamma)
        return np.array([a, b], dtype=complex)

    def density(self) -> np.ndarray:
        v = self.ket()
        return np.outer(v, v.conj())


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product restricted to total dimension <= 8.

    Parameters
    ----------
    a, b : square complex matrices with dimensions in {2, 4, 8}

    Returns
    -------
    The (dim_a * dim_b)-dimensional Kronecker product a (x) b.
    """
    a = cmatrix(_as_array(a))
    b = cmatrix(_as_array(b))
    if a.shape[0] * b.shape[0] > 8:
        raise ValueError("unsupported dimension")
    return np.kron(a, b)


def partial_trace_first_two(rho):
    """Trace out the first two qubits of a three-qubit operator.

    Parameters
    ----------
    rho : (8, 8) array or DensityMatrix

    Returns
    -------
    The reduced 2x2 operator on the third qubit.  A ``DensityMatrix``
    input yields a ``DensityMatrix`` output; a bare array yields an array
    (useful for unnormalized post-measurement operators).
    """
    m = _as_array(rho)
    if m.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got shape {m.shape}")
    t = m.reshape(2, 2, 2, 2, 2, 2)
    reduced = np.einsum("abcabd->cd", t)
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(reduced)
    return reduced


def hermitian_eigen(m, tol: float = 1e-10):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : square complex matrix, Hermitian within ``tol``

    Returns
    -------
    (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvectors as orthonormal columns, so that m = V diag(w) V^dagger.
    """
    m = cmatrix(_as_array(m))
    if not is_hermitian(m, tol):
        raise ValueError("expected Hermitian")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def expm_hermitian(m, scale: float = 1.0) -> np.ndarray:
    """exp(scale * m) for Hermitian m, via eigendecomposition.

    The exponentials are evaluated relative to the largest scaled
    eigenvalue, so intermediate factors never overflow as long as the
    final result is representable.
    """
    w, v = hermitian_eigen(m)
    exponents = scale * w
    shift = float(np.max(exponents))
    core = (v * np.exp(exponents - shift)) @ v.conj().T
    return math.exp(shift) * core if shift <= 700.0 else np.exp(shift) * core


def gibbs_density(h, beta: float):
    """Normalized thermal state exp(-beta h)/Tr[exp(-beta h)].

    Works at arbitrarily large ``beta``: the spectrum is shifted by its
    minimum before exponentiating, and the common factor cancels in the
    normalization.  Returns ``(rho, z_shifted)`` where ``z_shifted`` is the
    partition function of the shifted spectrum.
    """
    w, v = hermitian_eigen(h)
    weights = np.exp(-beta * (w - w.min()))
    z = float(weights.sum())
    rho = (v * (weights / z)) @ v.conj().T
    return rho, z
