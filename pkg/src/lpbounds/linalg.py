"""Dense complex linear algebra primitives shared by the whole package.

Operators are plain numpy arrays with dtype complex128, row-major.  All
functions are pure: inputs are never mutated and results own their storage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NotPositiveError, NotSquareError

# Tolerance for treating an operator as exactly Hermitian (entrywise defect).
HERMITIAN_TOL = 1e-9
# Negative eigenvalues above this window are zeroed; below it they are an error.
PSD_CLAMP_TOL = 1e-9
# Jacobi sweep termination: off-diagonal Frobenius norm threshold and sweep cap.
JACOBI_OFFDIAG_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def as_complex_matrix(matrix) -> np.ndarray:
    """Coerce input to a fresh 2-D complex128 array."""
    a = np.array(matrix, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2:
        raise NotSquareError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a


def as_complex_vector(vector) -> np.ndarray:
    """Coerce input to a fresh 1-D complex128 array."""
    a = np.array(vector, dtype=np.complex128, copy=True).reshape(-1)
    return a


def require_square(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {matrix.shape}")


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Largest entrywise deviation max|M - M^dagger|."""
    return float(np.abs(matrix - matrix.conj().T).max()) if matrix.size else 0.0


def require_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    require_square(matrix)
    defect = hermiticity_defect(matrix)
    if defect > tol:
        raise NotHermitianError(f"hermiticity defect {defect:.3e} exceeds tol {tol:.3e}")


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    """(M + M^dagger) / 2, the canonical Hermitian representative."""
    return (matrix + matrix.conj().T) / 2.0


def frobenius_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix))


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; the columns of ``eigenvectors``
    are the matching orthonormal eigenvectors, so
    ``eigenvectors @ diag(eigenvalues) @ eigenvectors.conj().T``
    reconstructs the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def reconstruction_residual(self, matrix) -> float:
        """Frobenius distance between the reconstruction and ``matrix``."""
        return frobenius_norm(self.reconstruct() - as_complex_matrix(matrix))

    def orthonormality_residual(self) -> float:
        v = self.eigenvectors
        return frobenius_norm(v.conj().T @ v - np.eye(v.shape[1]))


def offdiag_frobenius(matrix) -> float:
    """Square root of the sum of squared moduli of all off-diagonal entries."""
    a = as_complex_matrix(matrix)
    require_square(a)
    sq = np.abs(a) ** 2
    total = float(sq.sum() - np.trace(sq).real)
    return math.sqrt(max(total, 0.0))


def jacobi_hermitian_eig(
    matrix,
    offdiag_tol: float = JACOBI_OFFDIAG_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Self-contained reference solver: each sweep annihilates every
    off-diagonal pivot (p, q) with a complex Givens rotation, and sweeps
    repeat until the off-diagonal Frobenius norm drops below
    ``offdiag_tol`` or ``max_sweeps`` is hit.  Returns ``(eigenvalues
    ascending, eigenvector columns)``.  Quadratically convergent; intended
    for modest dimensions and as an independent cross-check of the LAPACK
    path.
    """
    a = hermitian_part(as_complex_matrix(matrix))
    require_square(a)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    for _ in range(max_sweeps):
        if offdiag_frobenius(a) <= offdiag_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                if r == 0.0:
                    continue
                phase = a[p, q] / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- U^dagger A U where U mixes columns p and q.
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                # Zeroed by construction; enforce to keep the iteration Hermitian.
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * np.conj(phase) * vec_q
                v[:, q] = s * phase * vec_p + c * vec_q
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def hermitian_eig(matrix, tol: float = HERMITIAN_TOL, method: str = "lapack") -> EigenDecomposition:
    """Full spectral decomposition of a Hermitian matrix.

    ``method`` selects the solver: ``"lapack"`` (numpy.linalg.eigh, the
    default) or ``"jacobi"`` (the self-contained rotation solver above).
    Raises NotHermitianError when the entrywise hermiticity defect exceeds
    ``tol``; the solver then runs on the Hermitian part.
    """
    a = as_complex_matrix(matrix)
    require_hermitian(a, tol)
    h = hermitian_part(a)
    if method == "lapack":
        w, v = np.linalg.eigh(h)
    elif method == "jacobi":
        w, v = jacobi_hermitian_eig(h)
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    return EigenDecomposition(np.asarray(w, dtype=float), np.asarray(v, dtype=np.complex128))


def max_eigenvalue(matrix, tol: float = HERMITIAN_TOL) -> float:
    """Largest eigenvalue of a Hermitian matrix."""
    a = as_complex_matrix(matrix)
    require_hermitian(a, tol)
    return float(np.linalg.eigvalsh(hermitian_part(a))[-1])


def operator_norm(matrix) -> float:
    """Largest singular value.

    Defined for arbitrary rectangular matrices; products like
    ``sqrt(A) @ sqrt(B)`` are generally not Hermitian, so this goes through
    the SVD rather than a symmetric eigensolver.
    """
    a = as_complex_matrix(matrix)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def psd_sqrt(matrix, tol: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) count as numerical noise and are clamped to
    zero; anything below -tol raises NotPositiveError.  The result R is
    Hermitian PSD with R @ R reproducing the input up to rounding.
    """
    a = as_complex_matrix(matrix)
    require_hermitian(a, max(tol, HERMITIAN_TOL))
    w, v = np.linalg.eigh(hermitian_part(a))
    if w[0] < -tol:
        raise NotPositiveError(f"eigenvalue {w[0]:.3e} below -tol = {-tol:.3e}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return hermitian_part(root)


def kron(a, b) -> np.ndarray:
    """Tensor (Kronecker) product; output dimensions multiply."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def matrix_to_json(matrix) -> dict:
    """Repo-wide matrix interchange format: row-major re/im part lists."""
    a = as_complex_matrix(matrix)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": [float(x) for x in a.real.ravel()],
        "im": [float(x) for x in a.imag.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError(f"matrix payload length mismatch for shape {rows}x{cols}")
    return (re + 1j * im).reshape(rows, cols)


def vector_to_json(vector) -> dict:
    """Column-vector special case of the matrix format."""
    return matrix_to_json(as_complex_vector(vector).reshape(-1, 1))


def vector_from_json(obj: dict) -> np.ndarray:
    return matrix_from_json(obj).reshape(-1)
