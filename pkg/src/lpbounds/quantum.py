"""Typed states, effects and POVMs with validation, sampling and the exact maximizer.

Construction-time validation is forgiving (1e-6, user matrices arrive from
JSON with rounding); internal consistency assertions use 1e-9.  All types
are immutable after construction and store the Hermitian part of the
supplied matrix, so downstream eigensolvers see exactly Hermitian input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    BadRankError,
    DimMismatchError,
    EmptyInputError,
    NullVectorError,
    ValidationError,
)

# Construction tolerance (trace, hermiticity, spectra, completeness).
CONSTRUCTION_TOL = 1e-6
# Internal assertion tolerance for quantities the package itself computes.
INTERNAL_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_generator(seed) -> np.random.Generator:
    """Accept an integer seed, a seed sequence, or an existing Generator."""
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class State:
    """Density operator: unit trace, Hermitian, positive semidefinite.

    ``purity_hint`` carries the defining unit vector when the state was
    constructed pure; mixed states leave it as None.
    """

    rho: np.ndarray
    dim: int
    purity_hint: np.ndarray | None = None

    def __post_init__(self):
        rho = linalg.as_complex_matrix(self.rho)
        linalg.require_square(rho)
        if rho.shape[0] != self.dim:
            raise ValidationError(f"dim field {self.dim} does not match matrix shape {rho.shape}")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > CONSTRUCTION_TOL:
            raise ValidationError(f"trace {trace:.8f} differs from 1 beyond {CONSTRUCTION_TOL}")
        defect = linalg.hermiticity_defect(rho)
        if defect > CONSTRUCTION_TOL:
            raise ValidationError(f"hermiticity defect {defect:.3e} beyond {CONSTRUCTION_TOL}")
        herm = linalg.hermitian_part(rho)
        lowest = float(np.linalg.eigvalsh(herm)[0])
        if lowest < -CONSTRUCTION_TOL:
            raise ValidationError(f"negative eigenvalue {lowest:.3e} beyond -{CONSTRUCTION_TOL}")
        object.__setattr__(self, "rho", _frozen(herm))
        if self.purity_hint is not None:
            v = linalg.as_complex_vector(self.purity_hint)
            if v.size != self.dim:
                raise ValidationError("purity_hint length does not match dim")
            if abs(np.linalg.norm(v) - 1.0) > INTERNAL_TOL:
                raise ValidationError("purity_hint is not a unit vector")
            object.__setattr__(self, "purity_hint", _frozen(v))

    @classmethod
    def from_density(cls, matrix) -> "State":
        m = linalg.as_complex_matrix(matrix)
        return cls(m, m.shape[0])

    @classmethod
    def pure(cls, vector) -> "State":
        """Rank-one state |v><v| from a vector (normalized here)."""
        v = linalg.as_complex_vector(vector)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise NullVectorError("cannot build a pure state from the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()), v.size, purity_hint=v)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "State":
        return cls(np.eye(dim, dtype=np.complex128) / dim, dim)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.rho, self.rho).real)


@dataclass(frozen=True)
class Effect:
    """Positive operator A with 0 <= A <= 1 (one POVM outcome)."""

    op: np.ndarray
    dim: int

    def __post_init__(self):
        op = linalg.as_complex_matrix(self.op)
        linalg.require_square(op)
        if op.shape[0] != self.dim:
            raise ValidationError(f"dim field {self.dim} does not match matrix shape {op.shape}")
        defect = linalg.hermiticity_defect(op)
        if defect > CONSTRUCTION_TOL:
            raise ValidationError(f"hermiticity defect {defect:.3e} beyond {CONSTRUCTION_TOL}")
        herm = linalg.hermitian_part(op)
        w = np.linalg.eigvalsh(herm)
        if w[0] < -CONSTRUCTION_TOL or w[-1] > 1.0 + CONSTRUCTION_TOL:
            raise ValidationError(
                f"effect spectrum [{w[0]:.3e}, {w[-1]:.8f}] escapes [0, 1] beyond {CONSTRUCTION_TOL}"
            )
        object.__setattr__(self, "op", _frozen(herm))

    @classmethod
    def from_matrix(cls, matrix) -> "Effect":
        m = linalg.as_complex_matrix(matrix)
        return cls(m, m.shape[0])

    @classmethod
    def projector(cls, vector) -> "Effect":
        """Rank-one projection |v><v| from a vector (normalized here)."""
        v = linalg.as_complex_vector(vector)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise NullVectorError("cannot build a projector from the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()), v.size)

    @classmethod
    def identity(cls, dim: int) -> "Effect":
        return cls(np.eye(dim, dtype=np.complex128), dim)


@dataclass(frozen=True)
class Povm:
    """Ordered family of effects on one space summing to the identity."""

    effects: tuple[Effect, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        effects = tuple(self.effects)
        if not effects:
            raise EmptyInputError("a POVM needs at least one effect")
        dim = effects[0].dim
        if any(e.dim != dim for e in effects):
            raise DimMismatchError("POVM effects live on different dimensions")
        total = sum(e.op for e in effects)
        residual = linalg.frobenius_norm(total - np.eye(dim))
        if residual > CONSTRUCTION_TOL:
            raise ValidationError(
                f"completeness residual {residual:.3e} beyond {CONSTRUCTION_TOL}"
            )
        object.__setattr__(self, "effects", effects)
        labels = tuple(str(x) for x in self.labels) or tuple(str(i) for i in range(len(effects)))
        if len(labels) != len(effects):
            raise ValidationError("label count does not match effect count")
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    @classmethod
    def from_matrices(cls, matrices, labels=()) -> "Povm":
        return cls(tuple(Effect.from_matrix(m) for m in matrices), tuple(labels))


@dataclass(frozen=True)
class Pvm(Povm):
    """POVM whose elements are mutually orthogonal projections."""

    def __post_init__(self):
        super().__post_init__()
        ops = [e.op for e in self.effects]
        for i, a in enumerate(ops):
            idem = linalg.frobenius_norm(a @ a - a)
            if idem > CONSTRUCTION_TOL:
                raise ValidationError(f"element {i} idempotency residual {idem:.3e}")
            for j in range(i + 1, len(ops)):
                cross = linalg.frobenius_norm(a @ ops[j])
                if cross > CONSTRUCTION_TOL:
                    raise ValidationError(f"elements {i},{j} are not orthogonal ({cross:.3e})")

    @classmethod
    def from_basis(cls, basis_matrix, labels=()) -> "Pvm":
        """Rank-one PVM from the columns of an orthonormal basis matrix."""
        b = linalg.as_complex_matrix(basis_matrix)
        return cls(tuple(Effect.projector(b[:, k]) for k in range(b.shape[1])), tuple(labels))

    @classmethod
    def computational(cls, dim: int) -> "Pvm":
        return cls.from_basis(np.eye(dim, dtype=np.complex128))


def probability(effect: Effect, state: State) -> float:
    """Outcome probability tr(rho A).

    The raw trace is returned without clamping; values may stray outside
    [0, 1] by rounding noise and verdict logic downstream owns the
    tolerance.
    """
    if effect.dim != state.dim:
        raise DimMismatchError(f"effect dim {effect.dim} vs state dim {state.dim}")
    return float(np.einsum("ij,ji->", state.rho, effect.op).real)


def m_infinity(povm, state: State) -> float:
    """Largest single-outcome probability of an observable in a state."""
    effects = povm.effects if isinstance(povm, Povm) else tuple(povm)
    if not effects:
        raise EmptyInputError("m_infinity of an empty outcome family")
    return max(probability(e, state) for e in effects)


def max_sum_oracle(effects) -> tuple[float, State]:
    """Exact supremum of sum_i tr(rho A_i) over all states.

    The supremum equals the top eigenvalue of sum_i A_i and is attained at
    the corresponding eigenvector, returned as a pure state.
    """
    effects = tuple(effects)
    if not effects:
        raise EmptyInputError("no effects to maximize over")
    dim = effects[0].dim
    if any(e.dim != dim for e in effects):
        raise DimMismatchError("effects live on different dimensions")
    total = sum(e.op for e in effects)
    decomp = linalg.hermitian_eig(total)
    value = float(decomp.eigenvalues[-1])
    maximizer = State.pure(decomp.eigenvectors[:, -1])
    return value, maximizer


def haar_random_state_vector(dim: int, seed) -> np.ndarray:
    """Haar-distributed unit vector (normalized complex Gaussian)."""
    if dim < 1:
        raise BadRankError(f"dim must be >= 1, got {dim}")
    rng = as_generator(seed)
    while True:
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        norm = float(np.linalg.norm(z))
        if norm > 1e-12:
            return z / norm


def haar_random_pure(dim: int, seed) -> State:
    """Haar-random pure state; deterministic for a fixed seed."""
    return State.pure(haar_random_state_vector(dim, seed))


def haar_random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    rng = as_generator(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rank: int, seed) -> State:
    """Random density operator of the requested rank.

    Partial trace of a Haar pure state on a ``dim * rank`` space: the
    ancilla dimension equals the rank, so the reduced operator has the
    requested rank almost surely and unit trace by construction.
    """
    if not 1 <= rank <= dim:
        raise BadRankError(f"rank must lie in 1..{dim}, got {rank}")
    rng = as_generator(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    hint = None
    if rank == 1:
        hint = g[:, 0] / np.linalg.norm(g[:, 0])
    return State(rho, dim, purity_hint=hint)


def random_effect(dim: int, seed) -> Effect:
    """Random effect: Haar-conjugated diagonal with uniform [0, 1] spectrum."""
    rng = as_generator(seed)
    u = haar_random_unitary(dim, rng)
    spectrum = rng.uniform(0.0, 1.0, size=dim)
    return Effect.from_matrix(linalg.hermitian_part((u * spectrum) @ u.conj().T))


def random_povm(dim: int, outcomes: int, seed) -> Povm:
    """Random POVM: Wishart pieces G_i whitened by the inverse root of their sum."""
    if outcomes < 1:
        raise EmptyInputError("a POVM needs at least one outcome")
    rng = as_generator(seed)
    pieces = []
    for _ in range(outcomes):
        m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        pieces.append(m @ m.conj().T)
    total = sum(pieces)
    w, v = np.linalg.eigh(total)
    inv_root = (v / np.sqrt(w)) @ v.conj().T
    ops = [linalg.hermitian_part(inv_root @ g @ inv_root) for g in pieces]
    return Povm.from_matrices(ops)


def state_to_json(state: State) -> dict:
    return {**linalg.matrix_to_json(state.rho), "kind": "state"}


def state_from_json(obj: dict) -> State:
    if obj.get("kind", "state") != "state":
        raise ValidationError(f"expected kind 'state', got {obj.get('kind')!r}")
    return State.from_density(linalg.matrix_from_json(obj))


def effect_to_json(effect: Effect) -> dict:
    return {**linalg.matrix_to_json(effect.op), "kind": "effect"}


def effect_from_json(obj: dict) -> Effect:
    if obj.get("kind", "effect") != "effect":
        raise ValidationError(f"expected kind 'effect', got {obj.get('kind')!r}")
    return Effect.from_matrix(linalg.matrix_from_json(obj))


def povm_to_json(povm: Povm) -> dict:
    return {
        "effects": [linalg.matrix_to_json(e.op) for e in povm.effects],
        "labels": list(povm.labels),
    }


def povm_from_json(obj: dict) -> Povm:
    return Povm.from_matrices(
        [linalg.matrix_from_json(m) for m in obj["effects"]],
        tuple(obj.get("labels", ())),
    )
