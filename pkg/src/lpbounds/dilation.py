"""Block-matrix extensions realizing effects as projections on a direct-sum space.

An effect A with 0 <= A <= 1 becomes a genuine projection once the space is
enlarged: block (0,0) holds A, block (k,k) holds 1-A, and the coupling
blocks hold sqrt(A(1-A)).  A vector embedded into block 0 then sees exactly
the original outcome probabilities, which turns statements about effects
into statements about projections where Gram-matrix spectra apply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimMismatchError, EmptyInputError, NullProjectionError, NullVectorError
from .quantum import CONSTRUCTION_TOL, Effect

# Projected vectors with norm at or below this count as annihilated.
NULL_TOL = 1e-12


@dataclass(frozen=True)
class DilationResult:
    """Projections on the enlarged space plus the block-0 embedding."""

    block_dim: int
    num_effects: int
    big_dim: int
    projections: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.big_dim != (self.num_effects + 1) * self.block_dim:
            raise DimMismatchError("big_dim is not (m+1) * d")
        for p in self.projections:
            p.setflags(write=False)

    def embed(self, omega) -> np.ndarray:
        """|Omega> on the original space -> |Omega> (+) 0 (+) ... (+) 0."""
        v = linalg.as_complex_vector(omega)
        if v.size != self.block_dim:
            raise DimMismatchError(f"vector length {v.size} vs block dim {self.block_dim}")
        out = np.zeros(self.big_dim, dtype=np.complex128)
        out[: self.block_dim] = v
        return out

    def to_json(self) -> dict:
        return {
            "blocks": {"m": self.num_effects, "d": self.block_dim},
            "projections": [linalg.matrix_to_json(p) for p in self.projections],
        }


@dataclass(frozen=True)
class GramMatrix:
    """Normalized overlap matrix of the projected probe vectors.

    g[i, j] = <psi_i|psi_j> with psi_i = P_i psi / ||P_i psi||; unit
    diagonal, Hermitian and positive semidefinite by construction.
    ``source_norms`` keeps the pre-normalization norms ||P_i psi||.
    """

    g: np.ndarray
    source_norms: np.ndarray

    def __post_init__(self):
        self.g.setflags(write=False)
        self.source_norms.setflags(write=False)


@dataclass(frozen=True)
class GramBoundCheck:
    """Probability sum against its two spectral ceilings.

    sum_probs <= lambda_max (top Gram eigenvalue) <= frob_bound
    (1 + off-diagonal Frobenius norm).  ``dropped`` lists indices whose
    projection annihilated the probe and were excluded.
    """

    sum_probs: float
    lambda_max: float
    frob_bound: float
    holds: bool
    dropped: tuple[int, ...]


@dataclass(frozen=True)
class CrossOverlap:
    """Normalized cross term |<O|AB|O>| / (||sqrt(A)O|| ||sqrt(B)O||) against
    its operator-norm ceiling ||sqrt(A) sqrt(B)||."""

    overlap: float
    norm_bound: float


def complement_coupling(op: np.ndarray) -> np.ndarray:
    """sqrt(A (1 - A)) for an effect matrix, via its spectrum.

    Eigenvalues are clipped into [0, 1] (construction allows 1e-6 excursions)
    so the product under the root never goes negative.
    """
    w, v = np.linalg.eigh(op)
    w = np.clip(w, 0.0, 1.0)
    return linalg.hermitian_part((v * np.sqrt(w * (1.0 - w))) @ v.conj().T)


def dilate_multi(effects) -> DilationResult:
    """One projection per effect on the (m+1)-block direct sum.

    Projection k carries A_k in block (0,0), sqrt(A_k(1-A_k)) in blocks
    (k,0) and (0,k), 1-A_k in block (k,k), and zeros elsewhere, so its
    support stays inside blocks {0, k}.
    """
    effects = tuple(effects)
    if not effects:
        raise EmptyInputError("no effects to dilate")
    d = effects[0].dim
    if any(e.dim != d for e in effects):
        raise DimMismatchError("effects live on different dimensions")
    m = len(effects)
    big = (m + 1) * d
    eye = np.eye(d, dtype=np.complex128)
    projections = []
    for k, effect in enumerate(effects, start=1):
        a = effect.op
        coupling = complement_coupling(a)
        p = np.zeros((big, big), dtype=np.complex128)
        p[0:d, 0:d] = a
        p[k * d : (k + 1) * d, 0:d] = coupling
        p[0:d, k * d : (k + 1) * d] = coupling
        p[k * d : (k + 1) * d, k * d : (k + 1) * d] = eye - a
        projections.append(p)
    return DilationResult(d, m, big, tuple(projections))


def dilate_pair(a: Effect, b: Effect) -> DilationResult:
    """Two projections on the 3-block direct sum (blocks {0,1} and {0,2})."""
    if a.dim != b.dim:
        raise DimMismatchError(f"effect dims {a.dim} vs {b.dim}")
    return dilate_multi((a, b))


def projection_residuals(result: DilationResult) -> tuple[float, float]:
    """(max ||P^2 - P||_F, max ||P - P^dagger||_F) over the projections."""
    idem = 0.0
    herm = 0.0
    for p in result.projections:
        idem = max(idem, linalg.frobenius_norm(p @ p - p))
        herm = max(herm, linalg.frobenius_norm(p - p.conj().T))
    return idem, herm


def preservation_residual(result: DilationResult, effects, omega) -> float:
    """Largest |<psi|P_k|psi> - <Omega|A_k|Omega>| over k for embedded Omega."""
    effects = tuple(effects)
    if len(effects) != result.num_effects:
        raise DimMismatchError("effect count does not match the dilation")
    v = linalg.as_complex_vector(omega)
    psi = result.embed(v)
    worst = 0.0
    for p, effect in zip(result.projections, effects):
        big_side = float(np.vdot(psi, p @ psi).real)
        small_side = float(np.vdot(v, effect.op @ v).real)
        worst = max(worst, abs(big_side - small_side))
    return worst


def gram_matrix(projections, psi) -> GramMatrix:
    """Normalized Gram matrix of {P_i psi}; raises on annihilated indices.

    Callers that want silent dropping should use ``lemma1_check``, which
    removes annihilated indices and records them.
    """
    projections = tuple(projections)
    if not projections:
        raise EmptyInputError("no projections supplied")
    v = linalg.as_complex_vector(psi)
    images = []
    norms = []
    for j, p in enumerate(projections):
        image = p @ v
        norm = float(np.linalg.norm(image))
        if norm <= NULL_TOL:
            raise NullProjectionError(j)
        images.append(image / norm)
        norms.append(norm)
    stack = np.column_stack(images)
    g = linalg.hermitian_part(stack.conj().T @ stack)
    return GramMatrix(g, np.asarray(norms, dtype=float))


def lemma1_check(projections, psi, tol: float = 1e-9) -> GramBoundCheck:
    """Check sum_i <psi|P_i|psi> <= lambda_max(G) <= 1 + offdiag_frobenius(G).

    Indices whose projection annihilates the probe contribute nothing to the
    sum and are dropped before forming the Gram matrix (recorded in
    ``dropped``).  The second link of the chain is a structural guarantee
    for unit-diagonal Gram matrices, so its failure raises instead of
    returning a verdict.
    """
    projections = tuple(projections)
    v = linalg.as_complex_vector(psi)
    kept = []
    dropped = []
    for j, p in enumerate(projections):
        if float(np.linalg.norm(p @ v)) <= NULL_TOL:
            dropped.append(j)
        else:
            kept.append(p)
    if not kept:
        return GramBoundCheck(0.0, 0.0, 1.0, True, tuple(dropped))
    gram = gram_matrix(kept, v)
    sum_probs = float(sum(np.vdot(v, p @ v).real for p in kept))
    lambda_max = linalg.max_eigenvalue(gram.g)
    frob_bound = 1.0 + linalg.offdiag_frobenius(gram.g)
    if lambda_max > frob_bound + tol:
        raise AssertionError(
            f"Gram top eigenvalue {lambda_max} escaped its Frobenius ceiling {frob_bound}"
        )
    holds = sum_probs <= lambda_max + tol
    return GramBoundCheck(sum_probs, lambda_max, frob_bound, holds, tuple(dropped))


def cross_overlap_bound(a: Effect, b: Effect, omega, tol: float = 1e-9) -> CrossOverlap:
    """Normalized overlap of sqrt(A)Omega and sqrt(B)Omega against ||sqrt(A) sqrt(B)||.

    This is the quantity that turns the Gram off-diagonal entry into an
    operator-norm estimate; the inequality is structural, so a failure
    raises rather than reporting.
    """
    if a.dim != b.dim:
        raise DimMismatchError(f"effect dims {a.dim} vs {b.dim}")
    v = linalg.as_complex_vector(omega)
    root_a = linalg.psd_sqrt(a.op, CONSTRUCTION_TOL)
    root_b = linalg.psd_sqrt(b.op, CONSTRUCTION_TOL)
    norm_a = float(np.linalg.norm(root_a @ v))
    norm_b = float(np.linalg.norm(root_b @ v))
    if norm_a <= NULL_TOL or norm_b <= NULL_TOL:
        raise NullVectorError("an effect square root annihilates the probe vector")
    overlap = abs(complex(np.vdot(v, a.op @ (b.op @ v)))) / (norm_a * norm_b)
    norm_bound = linalg.operator_norm(root_a @ root_b)
    if overlap > norm_bound + tol:
        raise AssertionError(f"overlap {overlap} escaped its norm ceiling {norm_bound}")
    return CrossOverlap(overlap, norm_bound)
