"""Mutually unbiased bases for dimension 2 and odd prime dimensions.

Two orthonormal bases are mutually unbiased when every cross overlap has
modulus 1/sqrt(D).  A D-dimensional space admits at most D+1 pairwise
unbiased bases; the constructions here attain that count for D = 2 (Pauli
eigenbases) and odd primes (computational basis plus quadratic
exponential-sum bases).  Prime powers p^r with r >= 2 need finite-field
machinery and are deliberately out of range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadDimensionError, NotOddPrimeError, ValidationError
from .quantum import Effect

_UNITARITY_TOL = 1e-6


@dataclass(frozen=True)
class MubFamily:
    """Ordered family of orthonormal bases; columns are the basis vectors.

    Construction checks shapes and per-basis unitarity only; unbiasedness
    across bases is measured (not enforced) by ``verify_mub`` so that
    defective families can be diagnosed.
    """

    dim: int
    bases: tuple[np.ndarray, ...]

    def __post_init__(self):
        bases = tuple(linalg.as_complex_matrix(b) for b in self.bases)
        if not bases:
            raise ValidationError("a basis family needs at least one basis")
        eye = np.eye(self.dim)
        for index, b in enumerate(bases):
            if b.shape != (self.dim, self.dim):
                raise ValidationError(f"basis {index} has shape {b.shape}, expected square dim {self.dim}")
            residual = linalg.frobenius_norm(b.conj().T @ b - eye)
            if residual > _UNITARITY_TOL:
                raise ValidationError(f"basis {index} unitarity residual {residual:.3e}")
            b.setflags(write=False)
        object.__setattr__(self, "bases", bases)

    def to_json(self) -> dict:
        return {"dim": self.dim, "bases": [linalg.matrix_to_json(b) for b in self.bases]}

    @classmethod
    def from_json(cls, obj: dict) -> "MubFamily":
        return cls(int(obj["dim"]), tuple(linalg.matrix_from_json(b) for b in obj["bases"]))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def mub_qubit() -> MubFamily:
    """The three Pauli eigenbases: 3 = D+1 pairwise unbiased bases at D = 2."""
    s = 1.0 / math.sqrt(2.0)
    z_basis = np.eye(2, dtype=np.complex128)
    x_basis = np.array([[s, s], [s, -s]], dtype=np.complex128)
    y_basis = np.array([[s, s], [1j * s, -1j * s]], dtype=np.complex128)
    return MubFamily(2, (z_basis, x_basis, y_basis))


def mub_odd_prime(p: int) -> MubFamily:
    """p+1 pairwise unbiased bases for an odd prime p.

    Basis t (t = 0..p-1) has vector v with components
    exp(2*pi*i*(t*k^2 + v*k)/p) / sqrt(p) in row k; the computational basis
    comes first.  Cross overlaps are quadratic Gauss sums of modulus
    sqrt(p), which needs 2 invertible mod p -- hence odd primes only
    (use mub_qubit for p = 2).
    """
    if p == 2:
        raise NotOddPrimeError("p = 2 is excluded (the quadratic phases degenerate); use mub_qubit")
    if not is_prime(p):
        raise NotOddPrimeError(f"{p} is not prime")
    k = np.arange(p)
    exponent_base = np.add.outer(k, np.zeros(p, dtype=int))  # row index k replicated
    bases = [np.eye(p, dtype=np.complex128)]
    for t in range(p):
        # exponent[k, v] = t*k^2 + v*k, reduced mod p to keep phases exact.
        exponent = (t * k[:, None] ** 2 + np.outer(k, k)) % p
        bases.append(np.exp(2j * np.pi * exponent / p) / math.sqrt(p))
    del exponent_base
    return MubFamily(p, tuple(bases))


def mub_family(dim: int) -> MubFamily:
    """Full (D+1)-basis family for any supported dimension."""
    if dim == 2:
        return mub_qubit()
    if dim % 2 == 1 and is_prime(dim):
        return mub_odd_prime(dim)
    raise BadDimensionError(
        f"no construction for dim {dim}; supported dimensions are 2 and odd primes"
    )


def verify_mub(family: MubFamily) -> float:
    """Worst deviation of any cross overlap modulus from 1/sqrt(D).

    0 means perfectly unbiased; a family with two identical bases scores
    1 - 1/sqrt(D).
    """
    target = 1.0 / math.sqrt(family.dim)
    worst = 0.0
    for i in range(len(family.bases)):
        for j in range(i + 1, len(family.bases)):
            overlaps = np.abs(family.bases[i].conj().T @ family.bases[j])
            worst = max(worst, float(np.abs(overlaps - target).max()))
    return worst


def mub_projector_picks(family: MubFamily, picks) -> tuple[Effect, ...]:
    """One rank-one projection per basis, onto the picked column of each."""
    picks = tuple(int(p) for p in picks)
    if len(picks) != len(family.bases):
        raise ValidationError(
            f"need one pick per basis: got {len(picks)} picks for {len(family.bases)} bases"
        )
    effects = []
    for basis, pick in zip(family.bases, picks):
        if not 0 <= pick < family.dim:
            raise IndexError(f"pick {pick} outside 0..{family.dim - 1}")
        effects.append(Effect.projector(basis[:, pick]))
    return tuple(effects)
