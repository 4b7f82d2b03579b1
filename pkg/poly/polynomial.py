from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple, Union

MultiIndex = Tuple[int, ...]
Scalar = Union[int, Fraction]


def grlex_key(alpha):
    """Sort key for graded-lex order: by total degree, then x1 before x2."""
    return (sum(alpha), tuple(-a for a in alpha))


def multi_indices(dim, max_degree):
    """All exponent tuples of length `dim` with total degree <= `max_degree`,
    in ascending graded-lex order (1, x1, x2, x1^2, x1x2, x2^2, ...)."""
    if max_degree < 0:
        return []
    out = []
    for degree in range(max_degree + 1):
        out.extend(indices_of_degree(dim, degree))
    return out


def indices_of_degree(dim, degree):
    # lexicographically decreasing, so x1^degree comes first
    if dim == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in indices_of_degree(dim - 1, degree - first):
            out.append((first,) + rest)
    return out


def exponent_vectors(k, bound, weights=None):
    """All n in N_0^k with sum(n_i * w_i) <= bound and sum(n_i) <= bound.

    Used to enumerate generator products f_1^{n_1}...f_k^{n_k} of bounded degree;
    `weights` are the generator degrees (zero-degree generators are capped by the
    plain exponent sum).
    """
    weights = list(weights) if weights is not None else [1] * k
    if len(weights) != k:
        raise ValueError(f"Expected {k} weights, got {len(weights)}.")
    out = []

    def extend(prefix, used_weight, used_count):
        i = len(prefix)
        if i == k:
            out.append(tuple(prefix))
            return
        n = 0
        while used_weight + n * weights[i] <= bound and used_count + n <= bound:
            extend(prefix + [n], used_weight + n * weights[i], used_count + n)
            n += 1

    extend([], 0, 0)
    return sorted(out, key=grlex_key)


def add_indices(alpha, beta):
    return tuple(a + b for a, b in zip(alpha, beta))


def monomial_value(alpha, point):
    value = Fraction(1)
    for t, a in zip(point, alpha):
        if a:
            value *= Fraction(t) ** a
    return value


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    Immutable; terms map exponent tuples to nonzero Fractions.
    """

    __slots__ = ("_dim", "_terms", "_hash")

    def __init__(self, dim, terms=None):
        if dim < 1:
            raise ValueError(f"Polynomial dimension must be positive, got {dim}.")
        clean: Dict[MultiIndex, Fraction] = {}
        for alpha, coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim:
                raise ValueError(
                    f"Exponent {alpha} has length {len(alpha)}, expected {dim}."
                )
            if any(a < 0 for a in alpha):
                raise ValueError(f"Negative exponent in {alpha}.")
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[alpha] = clean.get(alpha, Fraction(0)) + coeff
        self._dim = dim
        self._terms = {a: c for a, c in clean.items() if c != 0}
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim, k):
        """The coordinate x_{k+1} (k is zero-based)."""
        if not 0 <= k < dim:
            raise ValueError(f"Invalid variable index {k} for dim={dim}.")
        alpha = [0] * dim
        alpha[k] = 1
        return cls(dim, {tuple(alpha): 1})

    @classmethod
    def monomial(cls, alpha, coeff=1):
        return cls(len(alpha), {tuple(alpha): coeff})

    # accessors --------------------------------------------------------------

    @property
    def dimension(self):
        return self._dim

    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._terms)

    def coefficient(self, alpha):
        return self._terms.get(tuple(alpha), Fraction(0))

    def monomials(self) -> List[MultiIndex]:
        """Exponents in descending graded-lex order (leading term first)."""
        return sorted(self._terms, key=lambda a: (-sum(a), tuple(-e for e in a)))

    def is_zero(self):
        return not self._terms

    def total_degree(self):
        # the zero polynomial has degree -1
        if not self._terms:
            return -1
        return max(sum(alpha) for alpha in self._terms)

    def is_homogeneous(self):
        return len({sum(alpha) for alpha in self._terms}) <= 1

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self._dim:
            raise ValueError(
                f"Point has length {len(point)}, polynomial dimension is {self._dim}."
            )
        point = [Fraction(t) for t in point]
        return sum(
            (c * monomial_value(alpha, point) for alpha, c in self._terms.items()),
            Fraction(0),
        )

    __call__ = evaluate

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other._dim != self._dim:
                raise ValueError(
                    f"Dimension mismatch: {self._dim} vs {other._dim}."
                )
            return other
        if isinstance(other, Rational):
            return Polynomial.constant(self._dim, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for alpha, c in other._terms.items():
            terms[alpha] = terms.get(alpha, Fraction(0)) + c
        return Polynomial(self._dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._dim, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Polynomial(
                self._dim, {a: c * other for a, c in self._terms.items()}
            )
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[MultiIndex, Fraction] = {}
        for alpha, ca in self._terms.items():
            for beta, cb in other._terms.items():
                gamma = add_indices(alpha, beta)
                terms[gamma] = terms.get(gamma, Fraction(0)) + ca * cb
        return Polynomial(self._dim, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"Exponent must be a nonnegative integer, got {n}.")
        result = Polynomial.constant(self._dim, 1)
        base = self
        # repeated squaring
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = Polynomial.constant(self._dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    def __iter__(self) -> Iterator[Tuple[MultiIndex, Fraction]]:
        for alpha in self.monomials():
            yield alpha, self._terms[alpha]

    def __repr__(self):
        return f"Polynomial(dim={self._dim}, '{render(self)}')"

    def __str__(self):
        return render(self)


def render(p: Polynomial) -> str:
    """Render in the text grammar, leading term first: `2/3*x1^2*x2 - x1 + 1`."""
    if p.is_zero():
        return "0"
    pieces = []
    for alpha, coeff in p:
        factors = []
        for i, a in enumerate(alpha):
            if a == 1:
                factors.append(f"x{i + 1}")
            elif a > 1:
                factors.append(f"x{i + 1}^{a}")
        magnitude = abs(coeff)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(magnitude)] + factors)
        sign = "-" if coeff < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
