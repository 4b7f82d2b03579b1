"""
Atomic measure extraction from a GNS model by simultaneous diagonalization of the
multiplication matrices X_1, ..., X_d.
"""
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import torch

from experiment_tools.pyro_tools import seeded_generator
from gns.model import GnsModel, check_commutation, flatness
from linalg.jacobi import jacobi_eigh
from moments.sequence import (
    AtomicMeasure,
    MomentSequence,
    atomic_measure_to_json,
    moment_of,
)
from poly.polynomial import multi_indices

DEFAULT_SEED = 0xC0FFEE
DEFAULT_TOL = 1e-6
COLLISION_GAP = 1e-8
MAX_RESEEDS = 3


class CommutationError(ValueError):
    pass


class EigenvalueCollisionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtractionResult:
    measure: AtomicMeasure
    residual: float
    flat: bool
    seed: Optional[int] = None
    commutation: float = 0.0


@dataclass(frozen=True)
class RepresentationReport:
    degree: int
    max_mismatch: float
    worst_index: Optional[tuple] = None


def random_combination(m: GnsModel, seed):
    generator = seeded_generator(seed)
    c = torch.randn(m.dimension, generator=generator, dtype=torch.float64).numpy()
    y = sum(c_j * x_j for c_j, x_j in zip(c, m.mult_matrices))
    return c, y


def _separated(eigenvalues, norm):
    if eigenvalues.size < 2:
        return True
    return float(np.min(np.diff(eigenvalues))) >= COLLISION_GAP * max(norm, 1e-300)


def _clusters(eigenvalues, norm):
    """Runs of ascending eigenvalues closer than the collision gap."""
    groups = [[0]]
    for i in range(1, eigenvalues.size):
        if eigenvalues[i] - eigenvalues[i - 1] < COLLISION_GAP * max(norm, 1e-300):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _resplit(m: GnsModel, basis, seed):
    """Diagonalize fresh random combinations restricted to span(basis)."""
    for attempt in range(1, MAX_RESEEDS + 1):
        _, y = random_combination(m, seed + attempt)
        eigenvalues, rotation = jacobi_eigh(basis.T @ y @ basis)
        if _separated(eigenvalues, float(np.linalg.norm(y, 2))):
            return basis @ rotation
    raise EigenvalueCollisionError(
        f"Eigenvalues of the random combination collide after {MAX_RESEEDS} reseeds."
    )


def verify_representation(r, s: MomentSequence, degree) -> RepresentationReport:
    """Largest |moment of the measure - s_alpha| over |alpha| <= degree."""
    if degree > s.max_degree:
        raise ValueError(f"degree={degree} exceeds truncation N={s.max_degree}.")
    measure = r.measure if isinstance(r, ExtractionResult) else r
    worst, worst_index = 0.0, None
    for alpha in multi_indices(s.dimension, degree):
        mismatch = abs(float(moment_of(measure, alpha)) - float(s[alpha]))
        if worst_index is None or mismatch > worst:
            worst, worst_index = mismatch, alpha
    return RepresentationReport(degree, worst, worst_index)


def extract(m: GnsModel, tol=DEFAULT_TOL, seed=DEFAULT_SEED) -> ExtractionResult:
    """Joint eigenvectors v of the X_j give atoms (v^T X_j v)_j with weight (v^T q)^2."""
    commutation = check_commutation(m, tol, warn=False)
    if commutation > tol:
        raise CommutationError(
            f"Multiplication matrices fail to commute: {commutation:.3g} > {tol:.3g}."
        )
    s = m.sequence
    ranks = flatness(s, m.level)
    if not ranks.flat:
        warnings.warn(
            f"Truncation is not flat (rank {ranks.rank} at level {m.level}, "
            f"{ranks.previous_rank} at level {m.level - 1}); extraction is best effort.",
            RuntimeWarning,
        )

    atoms = []
    used_seed = None
    if m.quotient_rank > 0:
        _, y = random_combination(m, seed)
        eigenvalues, vectors = jacobi_eigh(y)
        norm = float(np.max(np.abs(eigenvalues)))
        for cluster in _clusters(eigenvalues, norm):
            if len(cluster) > 1:
                vectors[:, cluster] = _resplit(m, vectors[:, cluster], seed)
        used_seed = seed
        q = m.constant_vector
        for i in range(vectors.shape[1]):
            v = vectors[:, i]
            weight = float(v @ q) ** 2
            if weight < tol:
                continue
            point = tuple(float(v @ x_j @ v) for x_j in m.mult_matrices)
            atoms.append((point, weight))
    measure = AtomicMeasure(s.dimension, tuple(atoms))
    residual = verify_representation(measure, s, 2 * m.level).max_mismatch
    return ExtractionResult(measure, residual, ranks.flat, used_seed, commutation)


def extraction_to_json(r: ExtractionResult):
    out = atomic_measure_to_json(r.measure)
    out["residual"] = float(f"{r.residual:.17g}")
    out["flat"] = r.flat
    out["seed"] = r.seed
    return out
