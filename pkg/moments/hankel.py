from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from linalg.jacobi import jacobi_eigh
from moments.sequence import MomentSequence
from poly.parsing import format_rational
from poly.polynomial import MultiIndex, Polynomial, add_indices, multi_indices

DEFAULT_PSD_TOL = 1e-9


@dataclass(frozen=True)
class HankelBlock:
    """Localized Hankel matrix H(gs) over the monomials of degree <= n:
    H(gs)_{a,b} = sum_c g_c s_{a+b+c}."""

    row_basis: Tuple[MultiIndex, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]
    localizer: Polynomial

    @property
    def size(self):
        return len(self.row_basis)

    def as_array(self):
        return np.array(
            [[float(x) for x in row] for row in self.matrix], dtype=np.float64
        ).reshape(self.size, self.size)

    def quadratic_form(self, v):
        """Exact v^T H v."""
        if len(v) != self.size:
            raise ValueError(f"Vector has length {len(v)}, block size is {self.size}.")
        v = [Fraction(x) for x in v]
        return sum(
            (v[i] * self.matrix[i][j] * v[j] for i in range(self.size) for j in range(self.size)),
            Fraction(0),
        )

    def polynomial_of(self, v):
        """The polynomial sum_i v_i x^{row_basis[i]} whose square the form evaluates."""
        dim = self.localizer.dimension
        return sum(
            (Polynomial.monomial(alpha, c) for alpha, c in zip(self.row_basis, v)),
            Polynomial.zero(dim),
        )


def localized_hankel(s: MomentSequence, g: Polynomial, n: int) -> HankelBlock:
    degree = max(g.total_degree(), 0)
    if 2 * n + degree > s.max_degree:
        raise ValueError(
            f"Truncation insufficient: 2n + deg g = {2 * n + degree} > N = {s.max_degree}."
        )
    shifted = s.shift(g)
    basis = tuple(multi_indices(s.dimension, n))
    matrix = tuple(
        tuple(shifted[add_indices(alpha, beta)] for beta in basis) for alpha in basis
    )
    return HankelBlock(row_basis=basis, matrix=matrix, localizer=g)


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    threshold: float
    eigenvalues: np.ndarray = field(repr=False)
    witness: Optional[np.ndarray] = None

    def __bool__(self):
        return self.is_psd


def psd_check(block: HankelBlock, tol=DEFAULT_PSD_TOL) -> PsdVerdict:
    """PSD iff the smallest Jacobi eigenvalue is >= -tol * max|diag|; otherwise the
    witness is the eigenvector of the most negative eigenvalue."""
    a = block.as_array()
    eigenvalues, vectors = jacobi_eigh(a)
    scale = float(np.max(np.abs(np.diag(a)))) if a.size else 0.0
    threshold = tol * scale
    min_eigenvalue = float(eigenvalues[0]) if eigenvalues.size else 0.0
    if min_eigenvalue >= -threshold:
        return PsdVerdict(True, min_eigenvalue, threshold, eigenvalues)
    witness = vectors[:, 0].copy()
    # fix the sign so the largest component is positive
    if witness[np.argmax(np.abs(witness))] < 0:
        witness = -witness
    return PsdVerdict(False, min_eigenvalue, threshold, eigenvalues, witness)


@dataclass
class ConePositivityReport:
    level: int
    blocks: List[HankelBlock]
    verdicts: List[PsdVerdict]

    @property
    def all_psd(self):
        return all(v.is_psd for v in self.verdicts)

    def to_frame(self):
        return pd.DataFrame(
            {
                "localizer": [str(b.localizer) for b in self.blocks],
                "size": [b.size for b in self.blocks],
                "min_eigenvalue": [v.min_eigenvalue for v in self.verdicts],
                "psd": [v.is_psd for v in self.verdicts],
            }
        )

    def to_json(self):
        return {
            "level": self.level,
            "all_psd": self.all_psd,
            "blocks": [
                {
                    "localizer": str(b.localizer),
                    "psd": v.is_psd,
                    "min_eigenvalue": float(f"{v.min_eigenvalue:.17g}"),
                    "witness": None
                    if v.witness is None
                    else [float(f"{x:.17g}") for x in v.witness],
                    "matrix": [[format_rational(x) for x in row] for row in b.matrix],
                }
                for b, v in zip(self.blocks, self.verdicts)
            ],
        }


def cone_positivity_check(s: MomentSequence, generators, n, tol=DEFAULT_PSD_TOL):
    """Truncated test of L(g p^2) >= 0 for g in {1} + generators: builds H(s) and
    every H(g_j s) at level n and checks each block for positive semidefiniteness."""
    one = Polynomial.constant(s.dimension, 1)
    localizers = [one] + [g for g in generators if g != one]
    top = max(max(g.total_degree(), 0) for g in localizers)
    if 2 * n + top > s.max_degree:
        raise ValueError(
            f"Truncation insufficient: 2n + max deg g = {2 * n + top} > N = {s.max_degree}."
        )
    blocks = [localized_hankel(s, g, n) for g in localizers]
    verdicts = [psd_check(b, tol) for b in blocks]
    return ConePositivityReport(level=n, blocks=blocks, verdicts=verdicts)
