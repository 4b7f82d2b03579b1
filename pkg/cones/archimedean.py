import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import pandas as pd

from certs.certificate import Certificate, certificate_to_json
from certs.constructors import cone_certify, raise_constant
from cones.spec import MAX_BASIS_SIZE, QUADRATIC_KINDS, ConeSpec
from poly.parsing import format_rational
from poly.polynomial import Polynomial

SQUARE = "lambda - x^2"
LINEAR = "lambda +- x"


@dataclass(frozen=True)
class ArchimedeanWitness:
    """lambda - x_k^2 (one certificate) or lambda +- x_k (two certificates) in the cone.

    variable is zero-based; None stands for lambda - sum_k x_k^2."""

    variable: Optional[int]
    lam: Fraction
    shape: str
    certificates: Tuple[Certificate, ...]

    @property
    def certificate(self):
        return self.certificates[0]

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Inconclusive:
    variable: Optional[int]
    degree_bound: int

    def __bool__(self):
        return False


Outcome = Union[ArchimedeanWitness, Inconclusive]


@dataclass
class ArchimedeanReport:
    spec: ConeSpec
    degree_bound: int
    per_variable: List[Outcome]
    all_variables: Optional[Outcome] = None

    @property
    def archimedean(self):
        """True only when every coordinate has a witness; False proves nothing."""
        return all(self.per_variable)

    def to_frame(self):
        rows = self.per_variable + ([self.all_variables] if self.all_variables is not None else [])
        return pd.DataFrame(
            {
                "variable": ["ALL" if r.variable is None else f"x{r.variable + 1}" for r in rows],
                "witness": [bool(r) for r in rows],
                "shape": [r.shape if r else "" for r in rows],
                "lambda": [format_rational(r.lam) if r else "" for r in rows],
            }
        )

    def to_json(self):
        def outcome(r):
            name = "ALL" if r.variable is None else r.variable + 1
            if not r:
                return {"variable": name, "verdict": "Inconclusive"}
            return {
                "variable": name,
                "verdict": "Witness",
                "shape": r.shape,
                "lambda": format_rational(r.lam),
                "certificates": [certificate_to_json(c) for c in r.certificates],
            }

        out = {
            "kind": self.spec.kind,
            "degree_bound": self.degree_bound,
            "archimedean": self.archimedean,
            "variables": [outcome(r) for r in self.per_variable],
        }
        if self.all_variables is not None:
            out["all"] = outcome(self.all_variables)
        return out


def _lambda_of(cert):
    return Fraction(cert.extra["lambda"])


def _square_witness(spec, target, variable, degree_bound, max_size):
    cert = cone_certify(spec, target, degree_bound, free_constant=True, max_size=max_size)
    if not cert:
        return None
    if _lambda_of(cert) == 0:
        cert = raise_constant(cert, 1)
    return ArchimedeanWitness(variable, _lambda_of(cert), SQUARE, (cert,))


def _linear_witness(spec, x, variable, degree_bound, max_size):
    plus = cone_certify(spec, x, degree_bound, free_constant=True, max_size=max_size)
    if not plus:
        return None
    minus = cone_certify(spec, -x, degree_bound, free_constant=True, max_size=max_size)
    if not minus:
        return None
    lam = max(_lambda_of(plus), _lambda_of(minus), Fraction(0)) or Fraction(1)
    plus = raise_constant(plus, lam - _lambda_of(plus))
    minus = raise_constant(minus, lam - _lambda_of(minus))
    return ArchimedeanWitness(variable, lam, LINEAR, (plus, minus))


def archimedean_witness_search(spec: ConeSpec, degree_bound, max_size=MAX_BASIS_SIZE):
    """Sound, incomplete search for bounded-element witnesses of every coordinate.

    Quadratic kinds try lambda - x_k^2 over basis elements times diagonal squares
    first; every kind then tries lambda + x_k and lambda - x_k. lambda is minimized
    and a zero optimum is lifted to 1.
    """
    dim = spec.dimension
    xs = [Polynomial.variable(dim, k) for k in range(dim)]
    quadratic = spec.kind in QUADRATIC_KINDS
    per_variable = []
    for k, x in enumerate(xs):
        witness = None
        if quadratic:
            witness = _square_witness(spec, -(x * x), k, degree_bound, max_size)
        if witness is None:
            witness = _linear_witness(spec, x, k, degree_bound, max_size)
        per_variable.append(witness or Inconclusive(k, degree_bound))
    all_variables = None
    if quadratic:
        total = sum((x * x for x in xs), Polynomial.zero(dim))
        all_variables = _square_witness(spec, -total, None, degree_bound, max_size) or Inconclusive(
            None, degree_bound
        )
    return ArchimedeanReport(spec, degree_bound, per_variable, all_variables)


### Bounded-element identities ###


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: Polynomial
    rhs: Polynomial

    @property
    def holds(self):
        return self.lhs == self.rhs


def _checked(*identities):
    for identity in identities:
        if not identity.holds:
            raise RuntimeError(f"Identity {identity.name} failed: {identity.lhs} != {identity.rhs}.")
    return identities


def bounded_element_identities(lam, a: Polynomial):
    """lambda +- a = (1/2lambda)[(lambda^2 - a^2) + (lambda +- a)^2] and the converse
    lambda^2 - a^2 = (1/2lambda)[(lambda + a)^2 (lambda - a) + (lambda - a)^2 (lambda + a)]."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}.")
    half = 1 / (2 * lam)
    bound = lam * lam - a * a
    return _checked(
        IdentityCheck("lambda + a", lam + a, half * (bound + (lam + a) ** 2)),
        IdentityCheck("lambda - a", lam - a, half * (bound + (lam - a) ** 2)),
        IdentityCheck(
            "lambda^2 - a^2",
            bound,
            half * ((lam + a) ** 2 * (lam - a) + (lam - a) ** 2 * (lam + a)),
        ),
    )


def bounded_product_identities(l1, a: Polynomial, l2, b: Polynomial):
    """Products of bounded elements are bounded: the identities behind it."""
    l1, l2 = Fraction(l1), Fraction(l2)
    if l1 <= 0 or l2 <= 0:
        raise ValueError(f"lambda must be positive, got {l1} and {l2}.")
    half = Fraction(1, 2)
    return _checked(
        IdentityCheck(
            "(l1 l2)^2 - (ab)^2",
            (l1 * l2) ** 2 - (a * b) ** 2,
            l2 * l2 * (l1 * l1 - a * a) + a * a * (l2 * l2 - b * b),
        ),
        IdentityCheck("l1 l2 - ab", l1 * l2 - a * b, half * ((l1 + a) * (l2 - b) + (l1 - a) * (l2 + b))),
        IdentityCheck("l1 l2 + ab", l1 * l2 + a * b, half * ((l1 - a) * (l2 - b) + (l1 + a) * (l2 + b))),
    )


def ideal_generator_identity(p: Polynomial, h: Polynomial):
    """p h = 1/4 [(p + 1)^2 h + (p - 1)^2 (-h)]."""
    quarter = Fraction(1, 4)
    return _checked(
        IdentityCheck("p h", p * h, quarter * ((p + 1) ** 2 * h + (p - 1) ** 2 * (-h)))
    )


### Membership by evaluation ###

CONSISTENT = "ConsistentNecessary"
REFUTED = "RefutedAt"


@dataclass(frozen=True)
class MembershipVerdict:
    status: str
    checked: int
    point: Optional[tuple] = None
    value: Optional[Fraction] = field(default=None)

    def __bool__(self):
        return self.status == CONSISTENT


def membership_by_evaluation(spec: ConeSpec, h: Polynomial, sample_points):
    """Necessary condition only: every cone over f is nonnegative on K(f)."""
    checked = 0
    for point in sample_points:
        point = tuple(Fraction(t) for t in point)
        if not spec.in_set(point):
            continue
        checked += 1
        value = h.evaluate(point)
        if value < 0:
            return MembershipVerdict(REFUTED, checked, point, value)
    return MembershipVerdict(CONSISTENT, checked)


def grid_points(dim, low=0, high=1, steps=4):
    low, high = Fraction(low), Fraction(high)
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}.")
    axis = [low + i * (high - low) / steps for i in range(steps + 1)]
    return list(itertools.product(axis, repeat=dim))
