from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import List, Tuple

from poly.parsing import common_dimension, polynomial_from_json, polynomial_to_json
from poly.polynomial import Polynomial, exponent_vectors, grlex_key

QUADRATIC_MODULE = "quadratic_module"
PREORDERING = "preordering"
SEMIRING = "semiring"
SMODULE = "smodule"
KINDS = (QUADRATIC_MODULE, PREORDERING, SEMIRING, SMODULE)
QUADRATIC_KINDS = (QUADRATIC_MODULE, PREORDERING)

MAX_BASIS_SIZE = 20_000


@dataclass(frozen=True)
class ConeSpec:
    """Q(f), T(f), S(f) or C(f, g) described by its generators.

    For the S-module kind the multiplier list always starts with (or contains) the
    constant 1; other kinds carry just that constant.
    """

    kind: str
    f_generators: Tuple[Polynomial, ...]
    g_multipliers: Tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind={self.kind} not supported.")
        f = tuple(self.f_generators)
        if not f:
            raise ValueError("A cone needs at least one generator f_j.")
        dim = f[0].dimension
        if any(p.dimension != dim for p in f + tuple(self.g_multipliers)):
            raise ValueError("Generators and multipliers must share one dimension.")
        one = Polynomial.constant(dim, 1)
        g = tuple(self.g_multipliers) if self.kind == SMODULE else ()
        if one not in g:
            g = (one,) + g
        object.__setattr__(self, "f_generators", f)
        object.__setattr__(self, "g_multipliers", g)

    @property
    def dimension(self):
        return self.f_generators[0].dimension

    def in_set(self, point):
        """Whether point lies in K(f) = {x : f_j(x) >= 0 for all j}."""
        return all(f.evaluate(point) >= 0 for f in self.f_generators)


@dataclass(frozen=True)
class BasisElement:
    exponents: Tuple[int, ...]
    multiplier_index: int
    value: Polynomial


@dataclass
class ConeElementBasis:
    spec: ConeSpec
    degree_bound: int
    products: List[BasisElement] = field(default_factory=list)

    def __len__(self):
        return len(self.products)

    def values(self):
        return [p.value for p in self.products]


def _check_cap(count, max_size):
    if count > max_size:
        raise ValueError(
            f"Combinatorial cap exceeded: more than {max_size} basis elements."
        )


def enumerate_basis(spec: ConeSpec, degree_bound, max_size=MAX_BASIS_SIZE):
    if degree_bound < 0:
        raise ValueError(f"degree_bound must be >= 0, got {degree_bound}.")
    f = spec.f_generators
    k = len(f)
    dim = spec.dimension
    degrees = [max(p.total_degree(), 0) for p in f]
    basis = ConeElementBasis(spec, degree_bound)
    powers = [[Polynomial.constant(dim, 1)] for _ in f]

    def power(i, e):
        while len(powers[i]) <= e:
            powers[i].append(powers[i][-1] * f[i])
        return powers[i][e]

    def product_of(exponents):
        value = Polynomial.constant(dim, 1)
        for i, e in enumerate(exponents):
            if e:
                value = value * power(i, e)
        return value

    def add(exponents, j, value):
        basis.products.append(BasisElement(tuple(exponents), j, value))
        _check_cap(len(basis.products), max_size)

    if spec.kind == QUADRATIC_MODULE:
        add((0,) * k, 0, Polynomial.constant(dim, 1))
        for i, p in enumerate(f):
            if degrees[i] <= degree_bound:
                add(tuple(int(i == j) for j in range(k)), 0, p)
    elif spec.kind == PREORDERING:
        _check_cap(2 ** k, max_size)
        for e in sorted(cartesian((0, 1), repeat=k), key=grlex_key):
            if sum(d for d, ei in zip(degrees, e) if ei) <= degree_bound:
                add(e, 0, product_of(e))
    else:
        for j, g in enumerate(spec.g_multipliers):
            room = degree_bound - max(g.total_degree(), 0)
            if room < 0:
                continue
            for n in exponent_vectors(k, room, degrees):
                add(n, j, g * product_of(n) if j else product_of(n))
    return basis


### Cone fixtures from the worked examples ###


def _vars(d):
    return [Polynomial.variable(d, k) for k in range(d)]


def interval_box(bounds, kind=QUADRATIC_MODULE):
    """[a_1,b_1] x ... x [a_d,b_d] with f_{2j-1} = b_j - x_j, f_{2j} = x_j - a_j."""
    d = len(bounds)
    f = []
    for x, (a, b) in zip(_vars(d), bounds):
        f.extend([Fraction(b) - x, x - Fraction(a)])
    return ConeSpec(kind, tuple(f))


def unit_ball(d, kind=QUADRATIC_MODULE):
    return ConeSpec(kind, (1 - sum((x * x for x in _vars(d)), Polynomial.zero(d)),))


def simplex(d, kind=SEMIRING):
    xs = _vars(d)
    return ConeSpec(kind, tuple(xs) + (1 - sum(xs, Polynomial.zero(d)),))


def symmetric_cube(d, kind=SEMIRING):
    f = []
    for x in _vars(d):
        f.extend([1 - x, 1 + x])
    return ConeSpec(kind, tuple(f))


def hausdorff_cube(d, kind=SEMIRING):
    f = []
    for x in _vars(d):
        f.extend([x, 1 - x])
    return ConeSpec(kind, tuple(f))


def non_archimedean_example(kind=QUADRATIC_MODULE):
    """Q(2x1 - 1, 2x2 - 1, 1 - x1 x2): K(f) is compact, Q(f) is not Archimedean."""
    x1, x2 = _vars(2)
    return ConeSpec(kind, (2 * x1 - 1, 2 * x2 - 1, 1 - x1 * x2))


def cone_spec_to_json(spec: ConeSpec):
    return {
        "kind": spec.kind,
        "f": [polynomial_to_json(p) for p in spec.f_generators],
        "g": [polynomial_to_json(p) for p in spec.g_multipliers],
    }


def cone_spec_from_json(obj):
    kind = str(obj["kind"]).lower().replace("-", "_")
    items = list(obj["f"]) + list(obj.get("g", []))
    dim = int(obj.get("dim", common_dimension(items)))
    f = tuple(polynomial_from_json(p, dim) for p in obj["f"])
    g = tuple(polynomial_from_json(p, dim) for p in obj.get("g", []))
    return ConeSpec(kind, f, g)
