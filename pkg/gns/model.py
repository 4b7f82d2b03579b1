import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from linalg.jacobi import jacobi_eigh
from moments.sequence import MomentSequence
from poly.polynomial import MultiIndex, Polynomial, add_indices, multi_indices

RANK_TOL = 1e-10
COMMUTATION_TOL = 1e-6


class NotPositiveError(ValueError):
    """The Gram matrix has a clearly negative eigenvalue: L_s is not positive."""

    def __init__(self, message, eigenvalue, witness):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.witness = witness


@dataclass(frozen=True)
class GnsModel:
    """Truncated GNS space of L_s at level n.

    Quotient coordinates of a polynomial a (monomial coordinates over `basis`) are
    P^T G a; in them the inner product is L_s(ab) and x_j acts as X_j = P^T S_j P.
    """

    sequence: MomentSequence
    level: int
    basis: Tuple[MultiIndex, ...]
    gram: Tuple[Tuple[Fraction, ...], ...]
    eigenvalues: np.ndarray = field(repr=False)
    quotient_map: np.ndarray = field(repr=False)
    mult_matrices: List[np.ndarray] = field(repr=False)

    @property
    def dimension(self):
        return self.sequence.dimension

    @property
    def quotient_rank(self):
        return self.quotient_map.shape[1]

    def gram_array(self):
        return np.array([[float(x) for x in row] for row in self.gram], dtype=np.float64)

    def coordinates(self, a):
        """Quotient image of a monomial-coordinate vector, or of a Polynomial of degree <= n."""
        if isinstance(a, Polynomial):
            if a.total_degree() > self.level:
                raise ValueError(
                    f"Polynomial degree {a.total_degree()} exceeds GNS level {self.level}."
                )
            a = [float(a.coefficient(alpha)) for alpha in self.basis]
        a = np.asarray(a, dtype=np.float64)
        if a.shape != (len(self.basis),):
            raise ValueError(f"Expected {len(self.basis)} coordinates, got shape {a.shape}.")
        return self.quotient_map.T @ (self.gram_array() @ a)

    @property
    def constant_vector(self):
        """q, the image of the constant polynomial 1."""
        return (self.gram_array() @ self.quotient_map)[0, :]


def numeric_rank(eigenvalues, tol=RANK_TOL):
    if eigenvalues.size == 0:
        return 0
    top = float(np.max(eigenvalues))
    if top <= 0:
        return 0
    return int(np.sum(eigenvalues > tol * top))


def gram_matrix(s: MomentSequence, n, shift=None):
    """G_{a,b} = s_{a+b} (or s_{a+b+shift}) over the monomials of degree <= n."""
    basis = tuple(multi_indices(s.dimension, n))
    offset = shift or (0,) * s.dimension
    return basis, tuple(
        tuple(s[add_indices(add_indices(a, b), offset)] for b in basis) for a in basis
    )


def _as_array(matrix):
    size = len(matrix)
    return np.array([[float(x) for x in row] for row in matrix], dtype=np.float64).reshape(
        size, size
    )


def positive_gram(s: MomentSequence, n, tol=RANK_TOL):
    """Exact Gram matrix at level n with its Jacobi eigendecomposition; raises
    NotPositiveError when an eigenvalue is below -tol * ||G||."""
    if n < 0:
        raise ValueError(f"GNS level must be >= 0, got {n}.")
    if 2 * n > s.max_degree:
        raise ValueError(f"Truncation insufficient: 2n = {2 * n} > N = {s.max_degree}.")
    basis, gram = gram_matrix(s, n)
    eigenvalues, vectors = jacobi_eigh(_as_array(gram))
    norm = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    if eigenvalues.size and eigenvalues[0] < -tol * norm:
        raise NotPositiveError(
            f"Gram matrix has eigenvalue {eigenvalues[0]:.6g} < 0; L_s is not positive.",
            float(eigenvalues[0]),
            vectors[:, 0].copy(),
        )
    return basis, gram, eigenvalues, vectors, norm


def build(s: MomentSequence, n, tol=RANK_TOL) -> GnsModel:
    basis, gram, eigenvalues, vectors, norm = positive_gram(s, n, tol)
    if 2 * n + 1 > s.max_degree:
        raise ValueError(
            f"Truncation insufficient: 2n + 1 = {2 * n + 1} > N = {s.max_degree}."
        )
    keep = eigenvalues > tol * norm if norm > 0 else np.zeros(eigenvalues.shape, dtype=bool)
    quotient_map = vectors[:, keep] / np.sqrt(eigenvalues[keep])
    mult_matrices = []
    for j in range(s.dimension):
        e_j = tuple(int(i == j) for i in range(s.dimension))
        shifted = _as_array(gram_matrix(s, n, e_j)[1])
        x_j = quotient_map.T @ shifted @ quotient_map
        mult_matrices.append(0.5 * (x_j + x_j.T))
    return GnsModel(s, n, basis, gram, eigenvalues, quotient_map, mult_matrices)


def check_commutation(m: GnsModel, tol=COMMUTATION_TOL, warn=True):
    """max over j < k of the largest entry of |X_j X_k - X_k X_j|."""
    worst = 0.0
    xs = m.mult_matrices
    for j in range(len(xs)):
        for k in range(j + 1, len(xs)):
            commutator = xs[j] @ xs[k] - xs[k] @ xs[j]
            if commutator.size:
                worst = max(worst, float(np.max(np.abs(commutator))))
    if warn and worst > tol:
        warnings.warn(
            f"Multiplication matrices fail to commute: {worst:.3g} > {tol:.3g}; "
            "the truncation is probably not flat.",
            RuntimeWarning,
        )
    return worst


@dataclass(frozen=True)
class Flatness:
    rank: int
    previous_rank: int

    @property
    def flat(self):
        return self.rank == self.previous_rank


def flatness(s: MomentSequence, n, tol=RANK_TOL) -> Flatness:
    """Numerical ranks of the moment matrices at levels n and n - 1."""
    if 2 * n > s.max_degree:
        raise ValueError(f"Truncation insufficient: 2n = {2 * n} > N = {s.max_degree}.")
    rank = numeric_rank(jacobi_eigh(_as_array(gram_matrix(s, n)[1]))[0], tol)
    previous = 0
    if n > 0:
        previous = numeric_rank(jacobi_eigh(_as_array(gram_matrix(s, n - 1)[1]))[0], tol)
    return Flatness(rank, previous)
