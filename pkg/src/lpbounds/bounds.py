"""Closed-form upper bounds on sums of outcome probabilities, plus evaluation.

Every bound is reported through ``BoundReport``: lhs is the quantity being
bounded, rhs the bound, ``slack = rhs - lhs``, and ``holds`` means the
inequality survived at the check tolerance.  Raw traces are never clamped;
a genuine violation must be able to surface.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import (
    BadDimensionError,
    DimMismatchError,
    EmptyInputError,
    NotRankOneError,
    NotUnitVectorError,
)
from .quantum import CONSTRUCTION_TOL, Effect, State, probability

CHECK_TOL = 1e-9

BOUND_KINDS = (
    "weak_lp_pair",
    "pair_general",
    "multi",
    "mub",
    "trivial_combination",
    "lp_angle",
    "separability",
)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one inequality evaluation, serializable."""

    kind: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    inputs_digest: str

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "inputs_digest": self.inputs_digest,
        }


class AngleReadings(NamedTuple):
    """Both readings of the arccos relation (see lp_angle_check)."""

    probability: BoundReport
    amplitude: BoundReport


def canonical_digest(payload: dict) -> str:
    """Hex SHA-256 over a canonical (sorted, compact) JSON serialization."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def inputs_digest(kind: str, operand_matrices, state_matrix=None) -> str:
    payload = {
        "kind": kind,
        "operands": [linalg.matrix_to_json(m) for m in operand_matrices],
    }
    if state_matrix is not None:
        payload["state"] = linalg.matrix_to_json(state_matrix)
    return canonical_digest(payload)


def _report(kind, lhs, rhs, digest, check_tol=CHECK_TOL) -> BoundReport:
    slack = rhs - lhs
    return BoundReport(kind, float(lhs), float(rhs), float(slack), bool(slack >= -check_tol), digest)


def weak_lp_pair_bound(vec_i, vec_j, norm_tol: float = CHECK_TOL) -> float:
    """1 + |<i|j>| for two unit vectors: ceiling for the two rank-one outcome
    probabilities; lies in [1, 2]."""
    a = linalg.as_complex_vector(vec_i)
    b = linalg.as_complex_vector(vec_j)
    if a.size != b.size:
        raise DimMismatchError(f"vector lengths {a.size} vs {b.size}")
    for name, v in (("first", a), ("second", b)):
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > norm_tol:
            raise NotUnitVectorError(f"{name} vector has norm {norm:.12f}")
    return 1.0 + abs(complex(np.vdot(a, b)))


def pair_bound(a: Effect, b: Effect) -> float:
    """1 + ||sqrt(A) sqrt(B)|| for two effects on one space.

    For projections the square roots are fixed points, so this reduces to
    1 + ||P Q||.
    """
    if a.dim != b.dim:
        raise DimMismatchError(f"effect dims {a.dim} vs {b.dim}")
    ra = linalg.psd_sqrt(a.op, CONSTRUCTION_TOL)
    rb = linalg.psd_sqrt(b.op, CONSTRUCTION_TOL)
    return 1.0 + linalg.operator_norm(ra @ rb)


def multi_bound(effects) -> float:
    """1 + sqrt(sum over ordered pairs i != j of ||sqrt(A_i) sqrt(A_j)||^2).

    The pair sum runs over ordered distinct pairs, i.e. each unordered pair
    counts twice; since ||sqrt(A) sqrt(B)|| = ||sqrt(B) sqrt(A)|| each cross
    norm is computed once and doubled.  A single effect gives exactly 1.
    """
    effects = tuple(effects)
    if not effects:
        raise EmptyInputError("no effects supplied")
    dim = effects[0].dim
    if any(e.dim != dim for e in effects):
        raise DimMismatchError("effects live on different dimensions")
    roots = [linalg.psd_sqrt(e.op, CONSTRUCTION_TOL) for e in effects]
    total = 0.0
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            total += 2.0 * linalg.operator_norm(roots[i] @ roots[j]) ** 2
    return 1.0 + math.sqrt(total)


def trivial_combination_bound(dim: int) -> float:
    """(D+1)/2 + (sqrt(D) + 1/sqrt(D))/2: what pairwise unbiased-basis bounds
    give when naively summed over all D+1 rank-one picks."""
    if dim < 2:
        raise BadDimensionError(f"dim must be >= 2, got {dim}")
    root = math.sqrt(dim)
    return (dim + 1) / 2.0 + (root + 1.0 / root) / 2.0


def _rank_one_vector(effect: Effect) -> np.ndarray:
    """Unit vector spanning the range of a rank-one projection."""
    w, v = np.linalg.eigh(effect.op)
    if abs(w[-1] - 1.0) > CONSTRUCTION_TOL or (w.size > 1 and abs(w[:-1]).max() > CONSTRUCTION_TOL):
        raise NotRankOneError(f"spectrum {np.round(w, 9)} is not that of a rank-one projection")
    return v[:, -1]


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def lp_angle_check(p: Effect, q: Effect, psi, check_tol: float = CHECK_TOL) -> AngleReadings:
    """Arccos-form uncertainty relation for two rank-one projections, both readings.

    With p = <psi|P|psi>, q = <psi|Q|psi> and c the overlap modulus of the
    two range vectors, the relation states that an angle sum dominates
    arccos(c).  Two inequivalent readings circulate:

      probability: arccos(p)  + arccos(q)  >= arccos(c)
      amplitude:   arccos(vp) + arccos(vq) >= arccos(c)   (vp = sqrt(p))

    Only the amplitude reading tightens to the 1 + c sum bound; both are
    evaluated and reported separately, with no canonical choice asserted.
    Each report is oriented value <= bound (lhs = arccos(c), rhs = angle
    sum) so that ``holds`` keeps the nonnegative-slack convention.
    """
    vec_p = _rank_one_vector(p)
    vec_q = _rank_one_vector(q)
    v = linalg.as_complex_vector(psi)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > check_tol:
        raise NotUnitVectorError(f"probe vector has norm {norm:.12f}")
    if p.dim != q.dim or v.size != p.dim:
        raise DimMismatchError("projection and probe dimensions disagree")
    prob_p = _clamp01(abs(complex(np.vdot(vec_p, v))) ** 2)
    prob_q = _clamp01(abs(complex(np.vdot(vec_q, v))) ** 2)
    overlap = _clamp01(abs(complex(np.vdot(vec_p, vec_q))))
    digest = inputs_digest("lp_angle", [p.op, q.op, v.reshape(-1, 1)])
    target = math.acos(overlap)
    by_probability = _report(
        "lp_angle", target, math.acos(prob_p) + math.acos(prob_q), digest, check_tol
    )
    by_amplitude = _report(
        "lp_angle",
        target,
        math.acos(math.sqrt(prob_p)) + math.acos(math.sqrt(prob_q)),
        digest,
        check_tol,
    )
    return AngleReadings(by_probability, by_amplitude)


def _sum_probabilities(effects, state: State) -> float:
    return float(sum(probability(e, state) for e in effects))


def evaluate(bound_kind: str, operands, state: State, check_tol: float = CHECK_TOL) -> BoundReport:
    """Evaluate one inequality kind against a concrete state.

    Operands by kind:
      weak_lp_pair         two unit vectors
      pair_general         two effects
      multi                sequence of effects
      mub                  the D+1 rank-one picks from a full unbiased family
      trivial_combination  same picks, compared against the pairwise-sum bound
      separability         a MubFamily (state lives on dim**2)

    lhs is the probability sum (sum of per-basis maxima for separability);
    rhs comes from the matching bound.  The lp_angle kind needs a probe
    vector and two verdicts, so it lives in ``lp_angle_check``.
    """
    if bound_kind == "weak_lp_pair":
        vec_i = linalg.as_complex_vector(operands[0])
        vec_j = linalg.as_complex_vector(operands[1])
        rhs = weak_lp_pair_bound(vec_i, vec_j)
        effects = (Effect.projector(vec_i), Effect.projector(vec_j))
        lhs = _sum_probabilities(effects, state)
        digest = inputs_digest(bound_kind, [vec_i.reshape(-1, 1), vec_j.reshape(-1, 1)], state.rho)
    elif bound_kind == "pair_general":
        a, b = operands
        rhs = pair_bound(a, b)
        lhs = _sum_probabilities((a, b), state)
        digest = inputs_digest(bound_kind, [a.op, b.op], state.rho)
    elif bound_kind == "multi":
        effects = tuple(operands)
        rhs = multi_bound(effects)
        lhs = _sum_probabilities(effects, state)
        digest = inputs_digest(bound_kind, [e.op for e in effects], state.rho)
    elif bound_kind in ("mub", "trivial_combination"):
        effects = tuple(operands)
        if not effects:
            raise EmptyInputError("no effects supplied")
        dim = effects[0].dim
        if len(effects) != dim + 1:
            raise BadDimensionError(
                f"{bound_kind} expects dim+1 = {dim + 1} rank-one picks, got {len(effects)}"
            )
        rhs = 1.0 + math.sqrt(dim + 1) if bound_kind == "mub" else trivial_combination_bound(dim)
        lhs = _sum_probabilities(effects, state)
        digest = inputs_digest(bound_kind, [e.op for e in effects], state.rho)
    elif bound_kind == "separability":
        from .separability import separability_statistic

        stat = separability_statistic(state, operands, check_tol=check_tol)
        lhs, rhs = stat.lhs, stat.rhs
        digest = inputs_digest(bound_kind, list(operands.bases), state.rho)
    elif bound_kind == "lp_angle":
        raise ValueError("lp_angle needs a probe vector and two verdicts; use lp_angle_check")
    else:
        raise ValueError(f"unknown bound kind {bound_kind!r}; expected one of {BOUND_KINDS}")
    return _report(bound_kind, lhs, rhs, digest, check_tol)


def report_from_json(obj: dict) -> BoundReport:
    return BoundReport(
        kind=str(obj["kind"]),
        lhs=float(obj["lhs"]),
        rhs=float(obj["rhs"]),
        slack=float(obj["slack"]),
        holds=bool(obj["holds"]),
        inputs_digest=str(obj["inputs_digest"]),
    )
