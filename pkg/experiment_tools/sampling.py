"""
Random rational test data: atomic measures in a box, ball or simplex, points outside
the unit cube, and strictly positive quadratics on [0,1]. Draws go through
pyro.distributions, so `auto_seed` makes them reproducible.
"""
import math
from fractions import Fraction

import torch
import pyro.distributions as dist

from moments.sequence import AtomicMeasure
from poly.polynomial import Polynomial

BOX = "box"
BALL = "ball"
SIMPLEX = "simplex"
REGIONS = (BOX, BALL, SIMPLEX)


def rationalize(x, max_denominator=1000):
    return Fraction(float(x)).limit_denominator(max_denominator)


def in_region(point, region):
    if region == BOX:
        return all(0 <= t <= 1 for t in point)
    if region == BALL:
        return sum(t * t for t in point) <= 1
    if region == SIMPLEX:
        return all(t >= 0 for t in point) and sum(point) <= 1
    raise ValueError(f"region={region} not supported.")


def _draw_point(dim, region):
    if region == BOX:
        return dist.Uniform(0.0, 1.0).sample((dim,))
    if region == BALL:
        while True:
            x = dist.Uniform(-1.0, 1.0).sample((dim,))
            if float(x.pow(2).sum()) < 1.0:
                return x
    if region == SIMPLEX:
        return dist.Dirichlet(torch.ones(dim + 1)).sample()[:dim]
    raise ValueError(f"region={region} not supported.")


def random_point(dim, region=BOX, max_denominator=1000):
    while True:
        point = tuple(rationalize(t, max_denominator) for t in _draw_point(dim, region))
        if in_region(point, region):
            return point


def _distance(p, q):
    return math.sqrt(sum(float(a - b) ** 2 for a, b in zip(p, q)))


def random_atomic_measure(
    dim,
    num_atoms,
    region=BOX,
    separation=0.0,
    max_denominator=1000,
    max_tries=10000,
):
    """num_atoms rational atoms in the region, pairwise at least `separation` apart,
    with Dirichlet weights (rationalized, kept positive)."""
    points = []
    tries = 0
    while len(points) < num_atoms:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(
                f"Could not place {num_atoms} atoms {separation} apart in {max_tries} draws."
            )
        point = random_point(dim, region, max_denominator)
        if all(_distance(point, q) >= max(separation, 1e-12) for q in points):
            points.append(point)
    weights = dist.Dirichlet(torch.ones(num_atoms)).sample()
    weights = [
        max(rationalize(w, max_denominator), Fraction(1, max_denominator)) for w in weights
    ]
    return AtomicMeasure(dim, tuple(zip(points, weights)))


def outside_point(dim, distance=Fraction(1, 10), max_denominator=1000):
    """A rational point at Euclidean distance >= `distance` from [0,1]^d."""
    point = list(random_point(dim, BOX, max_denominator))
    k = int(torch.randint(dim, tuple()))
    offset = distance + rationalize(dist.Uniform(0.0, 0.5).sample(), max_denominator)
    point[k] = 1 + offset if bool(dist.Bernoulli(0.5).sample()) else -offset
    return tuple(point)


def random_positive_quadratic(margin=Fraction(1, 4), max_denominator=100):
    """h = a x^2 + b x + c with a, b in [-1, 1] and min over [0,1] at least margin."""
    a, b = (rationalize(t, max_denominator) for t in dist.Uniform(-1.0, 1.0).sample((2,)))
    candidates = [Fraction(0), Fraction(1)]
    if a > 0 and 0 < -b / (2 * a) < 1:
        candidates.append(-b / (2 * a))
    low = min(a * t * t + b * t for t in candidates)
    c = margin - low + rationalize(dist.Uniform(0.0, 0.5).sample(), max_denominator)
    x = Polynomial.variable(1, 0)
    return a * x * x + b * x + c
