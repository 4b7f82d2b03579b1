import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional, Tuple

from moments.sequence import MomentSequence
from poly.polynomial import (
    Polynomial,
    add_indices,
    exponent_vectors,
    indices_of_degree,
    multi_indices,
)


@dataclass(frozen=True)
class HausdorffVerdict:
    accepted: bool
    checked: int
    # (m, n, value) of the first negative difference
    violation: Optional[Tuple[tuple, tuple, Fraction]] = None


def hausdorff_difference(s: MomentSequence, m, n):
    """((I-E_1)^{n_1}...(I-E_d)^{n_d} s)_m as the alternating binomial sum."""
    total = Fraction(0)
    for j in itertools.product(*(range(k + 1) for k in n)):
        weight = 1
        for n_i, j_i in zip(n, j):
            weight *= comb(n_i, j_i)
        sign = -1 if sum(j) % 2 else 1
        total += sign * weight * s[add_indices(m, j)]
    return total


def hausdorff_check(s: MomentSequence, up_to) -> HausdorffVerdict:
    """Multidimensional Hausdorff criterion on [0,1]^d, tested for all (m, n) with
    |m| + |n| <= min(N, up_to), by increasing |m| + |n|."""
    limit = min(s.max_degree, up_to)
    checked = 0
    for total in range(limit + 1):
        for n_degree in range(total + 1):
            for n in indices_of_degree(s.dimension, n_degree):
                for m in indices_of_degree(s.dimension, total - n_degree):
                    value = hausdorff_difference(s, m, n)
                    checked += 1
                    if value < 0:
                        return HausdorffVerdict(False, checked, (m, n, value))
    return HausdorffVerdict(True, checked)


@dataclass(frozen=True)
class SemiringMomentVerdict:
    accepted: bool
    checked: int
    violation: Optional[Tuple[tuple, Fraction]] = None


def semiring_moment_check(s: MomentSequence, generators, up_to) -> SemiringMomentVerdict:
    """L_s(f_1^{n_1}...f_k^{n_k}) >= 0 for every generator product of degree
    <= min(N, up_to); the first negative value is reported with its exponents."""
    limit = min(s.max_degree, up_to)
    degrees = [max(f.total_degree(), 0) for f in generators]
    one = Polynomial.constant(s.dimension, 1)
    powers = [[one] for _ in generators]
    checked = 0
    for exponents in exponent_vectors(len(generators), limit, degrees):
        product = one
        for i, e in enumerate(exponents):
            while len(powers[i]) <= e:
                powers[i].append(powers[i][-1] * generators[i])
            product = product * powers[i][e]
        value = s.apply(product)
        checked += 1
        if value < 0:
            return SemiringMomentVerdict(False, checked, (exponents, value))
    return SemiringMomentVerdict(True, checked)


@dataclass(frozen=True)
class SupportGrowthReport:
    """Finite-horizon look at L_s(g^{2n}) <= M c^{2n}; heuristic, never a proof."""

    ratios: List[Fraction]
    verdict: str  # "BOUNDED", "GROWING" or "INSUFFICIENT"
    heuristic: bool = field(default=True)


def support_growth_diagnostic(s: MomentSequence, g: Polynomial, c) -> SupportGrowthReport:
    c = Fraction(c)
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}.")
    degree = max(g.total_degree(), 0)
    if 2 * degree > s.max_degree:
        raise ValueError(
            f"g^2 has degree {2 * degree}, exceeding truncation {s.max_degree}."
        )
    n_max = s.max_degree // (2 * max(degree, 1))
    ratios = []
    square = g * g
    power = Polynomial.constant(s.dimension, 1)
    for n in range(1, n_max + 1):
        power = power * square
        ratios.append(s.apply(power) / c ** (2 * n))
    tail = ratios[-3:]
    if len(tail) < 2:
        return SupportGrowthReport(ratios, "INSUFFICIENT")
    growing = all(a < b for a, b in zip(tail, tail[1:]))
    return SupportGrowthReport(ratios, "GROWING" if growing else "BOUNDED")


@dataclass(frozen=True)
class IdealAnnihilationVerdict:
    accepted: bool
    violation: Optional[Tuple[tuple, Fraction]] = None


def ideal_annihilation_check(s: MomentSequence, h: Polynomial, n) -> IdealAnnihilationVerdict:
    """Accept iff L_s(h x^alpha) == 0 exactly for all |alpha| <= n."""
    if max(h.total_degree(), 0) + n > s.max_degree:
        raise ValueError(
            f"Truncation insufficient: deg h + n = {h.total_degree() + n} > N = {s.max_degree}."
        )
    for alpha in multi_indices(s.dimension, n):
        value = s.apply(h * Polynomial.monomial(alpha))
        if value != 0:
            return IdealAnnihilationVerdict(False, (alpha, value))
    return IdealAnnihilationVerdict(True)
