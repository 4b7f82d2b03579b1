from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from certs.certificate import (
    BERNSTEIN,
    FARKAS,
    HANDELMAN,
    POLYA,
    QUADRATIC_MODULE,
    SMODULE,
    Certificate,
    CertificateTerm,
    make_term,
    verify,
)
from certs.lp import LinearProgram, lp_solve
from cones import spec as cone_spec
from cones.spec import MAX_BASIS_SIZE, ConeSpec, enumerate_basis
from poly.parsing import format_rational
from poly.polynomial import Polynomial, grlex_key, multi_indices

DEFAULT_N_MAX = 30

INFEASIBLE = "infeasible"
NOT_FOUND_AT_DEGREE = "not_found_at_degree"
NOT_FOUND_UP_TO = "not_found_up_to"


@dataclass(frozen=True)
class NotCertified:
    """Negative outcome of a certificate search; falsy.

    `bound` is the degree bound D (Handelman, S-module) or n_max (Polya)."""

    variant: str
    reason: str
    bound: Optional[int] = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Candidate:
    exponents: tuple
    multiplier_index: int
    square: tuple
    value: Polynomial


def _check_dimensions(h, polys):
    for p in polys:
        if p.dimension != h.dimension:
            raise ValueError(
                f"Dimension mismatch: {p} has dimension {p.dimension}, target has {h.dimension}."
            )


def _check_linear(f):
    for p in f:
        if p.total_degree() > 1:
            raise ValueError(f"Nonlinear input rejected: {p} has degree {p.total_degree()}.")


def _degree_bound(h, D):
    degree = max(h.total_degree(), 0)
    if D is None:
        return 2 * degree
    if D < degree:
        raise ValueError(f"Degree bound D={D} is below deg h = {degree}.")
    return D


def candidates_from_basis(basis, with_squares=False):
    """Basis products, optionally times every diagonal square x^{2 beta} within the bound."""
    dim = basis.spec.dimension
    zero = (0,) * dim
    out = []
    for element in basis.products:
        room = basis.degree_bound - max(element.value.total_degree(), 0)
        betas = multi_indices(dim, room // 2) if with_squares else [zero]
        for beta in betas:
            value = element.value
            if any(beta):
                value = value * Polynomial.monomial(tuple(2 * b for b in beta))
            out.append(
                Candidate(element.exponents, element.multiplier_index, beta if with_squares else (), value)
            )
    return out


def solve_combination(target: Polynomial, candidates, free_constant=False):
    """Exact LP for nonnegative c with sum c_i p_i = target (+ lambda when
    free_constant, with lambda >= 0 minimized). Rows are monomials in graded-lex order.

    Returns (coefficients, lambda) or None when infeasible."""
    monomials = set(alpha for alpha, _ in target)
    for c in candidates:
        monomials.update(alpha for alpha, _ in c.value)
    zero = (0,) * target.dimension
    if free_constant:
        monomials.add(zero)
    monomials = sorted(monomials, key=grlex_key)

    names = [f"c{i}" for i in range(len(candidates))]
    rows = [[c.value.coefficient(alpha) for c in candidates] for alpha in monomials]
    objective = None
    if free_constant:
        names.append("lambda")
        for alpha, row in zip(monomials, rows):
            row.append(Fraction(-1) if alpha == zero else Fraction(0))
        objective = [Fraction(0)] * len(candidates) + [Fraction(1)]
    rhs = [target.coefficient(alpha) for alpha in monomials]
    result = lp_solve(LinearProgram(names, rows, rhs, objective))
    if not result.feasible:
        return None
    coefficients = result.values(names[: len(candidates)])
    lam = result.assignment["lambda"] if free_constant else None
    return coefficients, lam


def _certificate(variant, target, generators, multipliers, candidates, coefficients, extra=None):
    terms = tuple(
        CertificateTerm(coefficient, c.exponents, c.multiplier_index, c.square, c.value)
        for c, coefficient in zip(candidates, coefficients)
        if coefficient != 0
    )
    cert = Certificate(
        variant, target, tuple(generators), tuple(multipliers), terms, dict(extra or {})
    )
    if not verify(cert):
        raise RuntimeError(f"{variant} certificate failed exact verification.")
    return cert


def raise_constant(cert: Certificate, delta) -> Certificate:
    """Add delta >= 0 times the constant product 1 to both sides of the identity."""
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}.")
    if delta == 0:
        return cert
    dim = cert.target.dimension
    one = Polynomial.constant(dim, 1)
    j = cert.multipliers.index(one)
    exponents = (0,) * len(cert.generators)
    square = (0,) * dim if any(len(t.square) for t in cert.terms) else ()
    terms = list(cert.terms)
    for i, t in enumerate(terms):
        if t.multiplier_index == j and not any(t.exponents) and not any(t.square):
            terms[i] = CertificateTerm(t.coefficient + delta, t.exponents, j, t.square, t.value)
            break
    else:
        terms.append(make_term(cert.generators, cert.multipliers, delta, exponents, j, square))
    extra = dict(cert.extra)
    if "lambda" in extra:
        extra["lambda"] = format_rational(Fraction(extra["lambda"]) + delta)
    return Certificate(cert.variant, cert.target + delta, cert.generators, cert.multipliers, tuple(terms), extra)


def cone_certify(
    spec: ConeSpec,
    h: Polynomial,
    degree_bound,
    with_squares=None,
    free_constant=False,
    max_size=MAX_BASIS_SIZE,
):
    """Search h (or lambda + h with minimal lambda) as a nonnegative combination of the
    cone's enumerated basis, times diagonal squares for the quadratic kinds."""
    _check_dimensions(h, spec.f_generators)
    if with_squares is None:
        with_squares = spec.kind in cone_spec.QUADRATIC_KINDS
    variant = QUADRATIC_MODULE if with_squares else SMODULE
    candidates = candidates_from_basis(
        enumerate_basis(spec, degree_bound, max_size), with_squares
    )
    solved = solve_combination(h, candidates, free_constant)
    if solved is None:
        return NotCertified(variant, NOT_FOUND_AT_DEGREE, degree_bound)
    coefficients, lam = solved
    target = h + lam if free_constant else h
    extra = {"degree_bound": degree_bound}
    if free_constant:
        extra["lambda"] = format_rational(lam)
    return _certificate(
        variant, target, spec.f_generators, spec.g_multipliers, candidates, coefficients, extra
    )


### Certificate constructors ###


def farkas_certify(h: Polynomial, f):
    """h = lambda_0 + sum_j lambda_j f_j with lambda >= 0, for linear h and f."""
    f = tuple(f)
    _check_dimensions(h, f)
    _check_linear((h,) + f)
    dim = h.dimension
    k = len(f)
    candidates = [Candidate((0,) * k, 0, (), Polynomial.constant(dim, 1))]
    candidates += [
        Candidate(tuple(int(i == j) for j in range(k)), 0, (), p) for i, p in enumerate(f)
    ]
    solved = solve_combination(h, candidates)
    if solved is None:
        return NotCertified(FARKAS, INFEASIBLE)
    return _certificate(
        FARKAS, h, f, (Polynomial.constant(dim, 1),), candidates, solved[0]
    )


def handelman_certify(h: Polynomial, f, D=None):
    """h as a nonnegative combination of products f^n of linear generators, sum n_i <= D."""
    f = tuple(f)
    _check_dimensions(h, f)
    _check_linear(f)
    D = _degree_bound(h, D)
    spec = ConeSpec(cone_spec.SEMIRING, f)
    candidates = candidates_from_basis(enumerate_basis(spec, D))
    solved = solve_combination(h, candidates)
    if solved is None:
        return NotCertified(HANDELMAN, NOT_FOUND_AT_DEGREE, D)
    return _certificate(
        HANDELMAN, h, f, spec.g_multipliers, candidates, solved[0], {"degree_bound": D}
    )


def smodule_certify(h: Polynomial, f, g, D=None):
    """h as a nonnegative combination of g_j f^n; the multiplier 1 is always available."""
    f = tuple(f)
    g = tuple(g)
    _check_dimensions(h, f + g)
    _check_linear(f)
    D = _degree_bound(h, D)
    spec = ConeSpec(cone_spec.SMODULE, f, g)
    candidates = candidates_from_basis(enumerate_basis(spec, D))
    solved = solve_combination(h, candidates)
    if solved is None:
        return NotCertified(SMODULE, NOT_FOUND_AT_DEGREE, D)
    return _certificate(
        SMODULE, h, f, spec.g_multipliers, candidates, solved[0], {"degree_bound": D}
    )


def polya_certify(f: Polynomial, n_max=DEFAULT_N_MAX):
    """Least n <= n_max with (x_1 + ... + x_d)^n f free of negative coefficients."""
    if not f.is_homogeneous():
        raise ValueError(f"Polya certificates need a homogeneous polynomial, got {f}.")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}.")
    dim = f.dimension
    linear = sum((Polynomial.variable(dim, k) for k in range(dim)), Polynomial.zero(dim))
    expansion = f
    for n in range(n_max + 1):
        if n:
            expansion = expansion * linear
        if all(c >= 0 for _, c in expansion):
            terms = tuple(CertificateTerm(c, alpha) for alpha, c in expansion)
            cert = Certificate(
                POLYA, f, (), (Polynomial.constant(dim, 1),), terms, {"n": n}
            )
            if not verify(cert):
                raise RuntimeError(f"Polya certificate failed exact verification at n={n}.")
            return cert
    return NotCertified(POLYA, NOT_FOUND_UP_TO, n_max)


def bernstein_identity(k: int) -> Certificate:
    """x^2 + 1/(k-1) = (1/(2^k k(k-1))) sum_l C(k,l)(k-2l)^2 (1+x)^{k-l}(1-x)^l on [-1,1]."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}.")
    x = Polynomial.variable(1, 0)
    generators = (1 + x, 1 - x)
    multipliers = (Polynomial.constant(1, 1),)
    scale = Fraction(1, 2 ** k * k * (k - 1))
    terms = tuple(
        make_term(generators, multipliers, scale * comb(k, l) * (k - 2 * l) ** 2, (k - l, l))
        for l in range(k + 1)
        if k != 2 * l
    )
    cert = Certificate(
        BERNSTEIN, x * x + Fraction(1, k - 1), generators, multipliers, terms, {"k": k}
    )
    if not verify(cert):
        raise RuntimeError(f"Bernstein identity failed exact verification at k={k}.")
    return cert
