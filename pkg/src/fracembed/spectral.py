"""Laplacian eigendecomposition and fractional powers of the graph Fourier matrix.

The Fourier matrix F = V^T is orthogonal (V from the symmetric Laplacian), so
it is normal and its complex Schur form is diagonal: F = P diag(mu) P^H with P
unitary to machine precision and |mu_l| = 1. Fractional powers use the
principal logarithm of the unit-circle eigenvalues,

    F^alpha = P diag(exp(alpha * Log mu)) P^H,   arg(mu) in (-pi, pi],

which is unitary for every real alpha and satisfies the group law
F^a F^b = F^(a+b) because a single branch of Log mu is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import NumericError

SYMMETRY_TOL = 1e-12


def _sign_canonicalize(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry (lowest index on ties) is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _principal_log_unit(mu: np.ndarray) -> np.ndarray:
    """Principal complex log for unit-circle eigenvalues; -1 maps to arg = +pi.

    np.angle can return -pi when LAPACK leaves a negative-zero imaginary part
    on an eigenvalue at -1; remap so the branch is exactly (-pi, pi].
    """
    theta = np.angle(mu)
    theta[theta == -np.pi] = np.pi
    return np.log(np.abs(mu)) + 1j * theta


@dataclass(eq=False)
class SpectralDecomposition:
    """Eigensystem of a graph Laplacian.

    eigenvalues: ascending, length N; eigenvectors: orthonormal columns,
    sign-canonicalized. The Fourier matrix is ``gft`` = V^T.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def gft(self) -> np.ndarray:
        return self.eigenvectors.T

    @cached_property
    def unitary_eigensystem(self):
        """(P, mu) with gft = P diag(mu) P^H, P unitary, |mu| = 1.

        Computed once per decomposition via the complex Schur form of the
        orthogonal Fourier matrix (normal, hence diagonal Schur factor) and
        reused by every fractional power of this graph.
        """
        f = self.gft.astype(np.complex128)
        try:
            t, z = scipy.linalg.schur(f, output="complex")
        except Exception as exc:  # LAPACK zgees failure
            raise NumericError(f"Schur decomposition of the Fourier matrix failed: {exc}") from exc
        return z, np.diag(t).copy()


def decompose(laplacian_matrix: np.ndarray) -> SpectralDecomposition:
    """Eigendecompose a symmetric Laplacian with deterministic ordering and signs.

    Raises ValueError for non-symmetric input and NumericError when the
    eigensolver fails to converge.
    """
    mat = np.asarray(laplacian_matrix, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if mat.size and np.max(np.abs(mat - mat.T)) > SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric within 1e-12")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    return SpectralDecomposition(eigenvalues, _sign_canonicalize(eigenvectors))


@dataclass(eq=False)
class FractionalOperator:
    """Fractional power F^alpha of the Fourier matrix, with its unitary eigensystem."""

    alpha: float
    matrix: np.ndarray
    unitary_basis: np.ndarray
    unit_eigenvalues: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(eq=False)
class FractionalSpectrum:
    """Transform coefficients of one signal, indexed by ascending Laplacian eigenvalue."""

    coefficients: np.ndarray


def gfrft_matrix(dec: SpectralDecomposition, alpha: float) -> FractionalOperator:
    """Build F^alpha from the decomposition's unitary eigensystem.

    alpha = 0 and alpha = 1 return the exact identity / exact Fourier matrix so
    the integer-order reductions hold bitwise; other orders go through
    P diag(mu^alpha) P^H on the principal branch.
    """
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    basis, mu = dec.unitary_eigensystem
    if alpha == 0.0:
        matrix = np.eye(dec.size, dtype=np.complex128)
    elif alpha == 1.0:
        matrix = dec.gft.astype(np.complex128)
    else:
        weights = np.exp(alpha * _principal_log_unit(mu))
        matrix = (basis * weights) @ basis.conj().T
    return FractionalOperator(alpha, matrix, basis, mu)


def gfrft_apply(op: FractionalOperator, x: np.ndarray) -> FractionalSpectrum:
    """Transform a vertex signal: coefficients = F^alpha x."""
    x = np.asarray(x)
    if x.shape != (op.size,):
        raise ValueError(f"signal length {x.shape} does not match operator size {op.size}")
    return FractionalSpectrum(op.matrix @ x)


def gfrft_inverse(op: FractionalOperator) -> FractionalOperator:
    """Inverse transform operator, order -alpha.

    F^alpha is unitary, so the inverse is the conjugate transpose; on the
    principal branch this equals F^(-alpha).
    """
    return FractionalOperator(-op.alpha, op.matrix.conj().T.copy(),
                              op.unitary_basis, op.unit_eigenvalues)


def gfrft_alpha_derivative(dec: SpectralDecomposition, alpha: float) -> np.ndarray:
    """Entrywise derivative d(F^alpha)/d(alpha) = P diag(mu^alpha Log mu) P^H."""
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    basis, mu = dec.unitary_eigensystem
    log_mu = _principal_log_unit(mu)
    weights = np.exp(alpha * log_mu) * log_mu
    return (basis * weights) @ basis.conj().T
