from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from poly.parsing import (
    format_rational,
    parse_rational,
    polynomial_from_json,
    polynomial_to_json,
)
from poly.polynomial import Polynomial

FARKAS = "farkas"
HANDELMAN = "handelman"
SMODULE = "smodule"
POLYA = "polya"
BERNSTEIN = "bernstein"
QUADRATIC_MODULE = "quadratic_module"
VARIANTS = (FARKAS, HANDELMAN, SMODULE, POLYA, BERNSTEIN, QUADRATIC_MODULE)


@dataclass(frozen=True)
class CertificateTerm:
    """coefficient * g_j * f_1^{n_1} ... f_k^{n_k} * x^{2 beta}.

    For Polya certificates `exponents` is the monomial exponent of the expansion term.
    """

    coefficient: Fraction
    exponents: Tuple[int, ...]
    multiplier_index: int = 0
    square: Tuple[int, ...] = ()
    value: Optional[Polynomial] = field(default=None, compare=False)


@dataclass(frozen=True)
class Certificate:
    variant: str
    target: Polynomial
    generators: Tuple[Polynomial, ...]
    multipliers: Tuple[Polynomial, ...]
    terms: Tuple[CertificateTerm, ...]
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant={self.variant} not supported.")

    def describe(self):
        return [
            f"{format_rational(t.coefficient)} * {describe_factors(self, t)}"
            for t in self.terms
        ]


def describe_factors(cert, term):
    if cert.variant == POLYA:
        return str(Polynomial.monomial(term.exponents))
    parts = []
    if term.multiplier_index:
        parts.append(f"g{term.multiplier_index}")
    parts.extend(
        f"f{i + 1}" if e == 1 else f"f{i + 1}^{e}"
        for i, e in enumerate(term.exponents)
        if e
    )
    if any(term.square):
        parts.append(f"({Polynomial.monomial(term.square)})^2")
    return " * ".join(parts) or "1"


def product_value(generators, multipliers, exponents, multiplier_index=0, square=()):
    """Recompute g_j * prod f_i^{n_i} * x^{2 beta} exactly from its description."""
    if len(exponents) != len(generators):
        raise ValueError(
            f"Exponent vector has length {len(exponents)}, expected {len(generators)}."
        )
    if not 0 <= multiplier_index < len(multipliers):
        raise IndexError(f"No multiplier g{multiplier_index}.")
    value = multipliers[multiplier_index]
    for f, e in zip(generators, exponents):
        if e:
            value = value * f ** e
    if square and any(square):
        value = value * Polynomial.monomial(tuple(2 * b for b in square))
    return value


def make_term(generators, multipliers, coefficient, exponents, multiplier_index=0, square=()):
    exponents = tuple(exponents)
    square = tuple(square)
    return CertificateTerm(
        Fraction(coefficient),
        exponents,
        multiplier_index,
        square,
        product_value(generators, multipliers, exponents, multiplier_index, square),
    )


def polya_expansion(f: Polynomial, n):
    dim = f.dimension
    linear = sum(
        (Polynomial.variable(dim, k) for k in range(dim)), Polynomial.zero(dim)
    )
    return linear ** n * f


def verify(cert: Certificate) -> bool:
    """Exact re-expansion of the identity the certificate claims."""
    if any(t.coefficient < 0 for t in cert.terms):
        return False
    if cert.variant == POLYA:
        expansion = polya_expansion(cert.target, int(cert.extra["n"]))
        claimed = sum(
            (Polynomial.monomial(t.exponents, t.coefficient) for t in cert.terms),
            Polynomial.zero(cert.target.dimension),
        )
        return claimed == expansion
    total = Polynomial.zero(cert.target.dimension)
    for term in cert.terms:
        try:
            value = product_value(
                cert.generators,
                cert.multipliers,
                term.exponents,
                term.multiplier_index,
                term.square,
            )
        except (ValueError, IndexError):
            return False
        if term.value is not None and term.value != value:
            return False
        total = total + value * term.coefficient
    return total == cert.target


def certificate_to_json(cert: Certificate):
    return {
        "variant": cert.variant,
        "target": polynomial_to_json(cert.target),
        "generators": [polynomial_to_json(f) for f in cert.generators],
        "multipliers": [polynomial_to_json(g) for g in cert.multipliers],
        "terms": [
            {
                "coeff": format_rational(t.coefficient),
                "exponents": list(t.exponents),
                "multiplier_index": t.multiplier_index,
                "square": list(t.square),
            }
            for t in cert.terms
        ],
        "extra": dict(cert.extra),
    }


def certificate_from_json(obj):
    target = polynomial_from_json(obj["target"])
    generators = tuple(polynomial_from_json(f, target.dimension) for f in obj["generators"])
    multipliers = tuple(
        polynomial_from_json(g, target.dimension) for g in obj.get("multipliers", [])
    ) or (Polynomial.constant(target.dimension, 1),)
    terms = tuple(
        CertificateTerm(
            parse_rational(t["coeff"]),
            tuple(t["exponents"]),
            int(t.get("multiplier_index", 0)),
            tuple(t.get("square", ())),
        )
        for t in obj["terms"]
    )
    return Certificate(obj["variant"], target, generators, multipliers, terms, dict(obj.get("extra", {})))
