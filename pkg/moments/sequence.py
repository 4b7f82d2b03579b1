from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Mapping, Tuple

from poly.polynomial import (
    MultiIndex,
    Polynomial,
    add_indices,
    monomial_value,
    multi_indices,
)
from poly.parsing import parse_rational, rational_from_parts


class MomentSequence:
    """Truncated d-sequence s = (s_alpha)_{|alpha| <= N}, i.e. the functional L_s
    on polynomials of degree at most N."""

    __slots__ = ("_dim", "_max_degree", "_values")

    def __init__(self, dim, max_degree, values: Mapping[MultiIndex, object]):
        if dim < 1:
            raise ValueError(f"Dimension must be positive, got {dim}.")
        if max_degree < 0:
            raise ValueError(f"Truncation order must be >= 0, got {max_degree}.")
        expected = multi_indices(dim, max_degree)
        clean = {}
        for alpha, value in values.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim or sum(alpha) > max_degree or min(alpha) < 0:
                raise ValueError(
                    f"Moment index {alpha} outside dimension {dim} / degree {max_degree}."
                )
            clean[alpha] = value if isinstance(value, float) else Fraction(value)
        missing = [alpha for alpha in expected if alpha not in clean]
        if missing:
            raise ValueError(f"Missing moments for indices {missing[:5]}.")
        self._dim = dim
        self._max_degree = max_degree
        self._values = clean

    @classmethod
    def from_function(cls, dim, max_degree, fn):
        """Build the sequence from an exact oracle alpha -> s_alpha."""
        return cls(
            dim, max_degree, {alpha: fn(alpha) for alpha in multi_indices(dim, max_degree)}
        )

    @property
    def dimension(self):
        return self._dim

    @property
    def max_degree(self):
        return self._max_degree

    @property
    def values(self):
        return MappingProxyType(self._values)

    def __getitem__(self, alpha):
        return self._values[tuple(alpha)]

    def __eq__(self, other):
        if not isinstance(other, MomentSequence):
            return NotImplemented
        return (self._dim, self._max_degree, self._values) == (
            other._dim,
            other._max_degree,
            other._values,
        )

    def __repr__(self):
        return f"MomentSequence(dim={self._dim}, max_degree={self._max_degree})"

    def apply(self, p: Polynomial):
        """L_s(p) = sum_alpha p_alpha s_alpha."""
        if p.dimension != self._dim:
            raise ValueError(f"Dimension mismatch: {p.dimension} vs {self._dim}.")
        if p.total_degree() > self._max_degree:
            raise ValueError(
                f"Degree overflow: deg p = {p.total_degree()} exceeds truncation "
                f"{self._max_degree}."
            )
        return sum((c * self._values[alpha] for alpha, c in p.terms.items()), Fraction(0))

    def shift(self, g: Polynomial):
        """The localized sequence g(E)s: (g(E)s)_alpha = sum_gamma g_gamma s_{alpha+gamma},
        truncated at N - deg g."""
        if g.dimension != self._dim:
            raise ValueError(f"Dimension mismatch: {g.dimension} vs {self._dim}.")
        degree = max(g.total_degree(), 0)
        if degree > self._max_degree:
            raise ValueError(
                f"deg g = {degree} exceeds truncation {self._max_degree}."
            )
        new_degree = self._max_degree - degree
        values = {}
        for alpha in multi_indices(self._dim, new_degree):
            values[alpha] = sum(
                (c * self._values[add_indices(alpha, gamma)] for gamma, c in g.terms.items()),
                Fraction(0),
            )
        return MomentSequence(self._dim, new_degree, values)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely atomic measure sum_i w_i delta_{t_i}; points and weights are exact
    rationals for data, floats for extracted measures."""

    dim: int
    atoms: Tuple[Tuple[tuple, object], ...]

    def __post_init__(self):
        atoms = tuple((tuple(point), weight) for point, weight in self.atoms)
        for point, weight in atoms:
            if len(point) != self.dim:
                raise ValueError(
                    f"Atom {point} has length {len(point)}, expected {self.dim}."
                )
            if not weight > 0:
                raise ValueError(f"Atom weights must be positive, got {weight}.")
        points = [point for point, _ in atoms]
        if len(set(points)) != len(points):
            raise ValueError("Atom points must be pairwise distinct.")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_pairs(cls, dim, pairs):
        """Rational atoms from (point, weight) pairs of ints / Fractions / "a/b" strings."""
        return cls(
            dim,
            tuple(
                (tuple(parse_rational(t) for t in point), parse_rational(weight))
                for point, weight in pairs
            ),
        )

    @property
    def total_mass(self):
        return sum((w for _, w in self.atoms), Fraction(0))


def moment_of(measure: AtomicMeasure, alpha):
    if all(isinstance(w, Rational) for _, w in measure.atoms):
        return sum(
            (w * monomial_value(alpha, point) for point, w in measure.atoms), Fraction(0)
        )
    total = 0.0
    for point, w in measure.atoms:
        value = float(w)
        for t, a in zip(point, alpha):
            value *= float(t) ** a
        total += value
    return total


def from_atomic_measure(measure: AtomicMeasure, max_degree):
    """Moment sequence s_alpha = sum_i w_i t_i^alpha for all |alpha| <= N."""
    if max_degree < 0:
        raise ValueError(f"Truncation order must be >= 0, got {max_degree}.")
    return MomentSequence.from_function(
        measure.dim, max_degree, lambda alpha: moment_of(measure, alpha)
    )


def _json_number(value):
    if isinstance(value, float):
        return float(f"{value:.17g}")
    return str(Fraction(value))


def _read_number(value):
    if isinstance(value, float):
        return value
    return parse_rational(value)


def moment_sequence_to_json(s: MomentSequence):
    return {
        "dim": s.dimension,
        "max_degree": s.max_degree,
        "values": [
            {"exp": list(alpha), "num": v.numerator, "den": v.denominator}
            if not isinstance(v, float)
            else {"exp": list(alpha), "value": v}
            for alpha, v in ((a, s[a]) for a in multi_indices(s.dimension, s.max_degree))
        ],
    }


def moment_sequence_from_json(obj):
    values = {}
    for entry in obj["values"]:
        if "value" in entry:
            value = _read_number(entry["value"])
        else:
            value = rational_from_parts(entry["num"], entry.get("den", 1))
        values[tuple(entry["exp"])] = value
    return MomentSequence(int(obj["dim"]), int(obj["max_degree"]), values)


def atomic_measure_to_json(measure: AtomicMeasure):
    return {
        "dim": measure.dim,
        "atoms": [
            {"point": [_json_number(t) for t in point], "weight": _json_number(w)}
            for point, w in measure.atoms
        ],
    }


def atomic_measure_from_json(obj):
    return AtomicMeasure(
        int(obj["dim"]),
        tuple(
            (tuple(_read_number(t) for t in atom["point"]), _read_number(atom["weight"]))
            for atom in obj["atoms"]
        ),
    )
