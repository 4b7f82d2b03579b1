import re
from fractions import Fraction

from poly.polynomial import Polynomial

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)|(?P<var>x\d+|[xyz])|(?P<op>[-+*^]))"
)
_ALIASES = {"x": 1, "y": 2, "z": 3}


class PolynomialSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"Unexpected character {text[start]!r}", start)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _variable_index(name, position):
    if name in _ALIASES:
        return _ALIASES[name]
    index = int(name[1:])
    if index < 1:
        raise PolynomialSyntaxError(f"Variable {name} is not x1, x2, ...", position)
    return index


def parse_polynomial(text, dim=None):
    """Parse `text` in the term grammar (e.g. ``"1 - x1^2 - 2/3*x1*x2"``).

    `x`, `y`, `z` are accepted for x1, x2, x3. If `dim` is omitted the dimension is
    the largest variable index that occurs (at least 1).
    """
    tokens = _tokenize(text)
    i = 0
    raw_terms = []  # (coeff, {var_index: exponent})

    def peek():
        return tokens[i]

    while True:
        kind, value, position = peek()
        sign = 1
        if kind == "op" and value in "+-":
            sign = -1 if value == "-" else 1
            i += 1
            kind, value, position = peek()
        if kind == "end":
            raise PolynomialSyntaxError("Expected a term", position)

        coeff = Fraction(1)
        factors = {}
        have_coeff = False
        if kind == "num":
            if re.search(r"/0+$", value):
                raise PolynomialSyntaxError(f"Zero denominator in {value}", position)
            coeff = Fraction(value)
            have_coeff = True
            i += 1
            if peek()[0] == "op" and peek()[1] == "*":
                i += 1
                if peek()[0] != "var":
                    raise PolynomialSyntaxError("Expected a variable", peek()[2])
        while peek()[0] == "var":
            _, name, var_position = peek()
            i += 1
            exponent = 1
            if peek()[0] == "op" and peek()[1] == "^":
                i += 1
                kind, value, position = peek()
                if kind != "num" or not value.isdigit():
                    raise PolynomialSyntaxError("Expected an integer exponent", position)
                exponent = int(value)
                i += 1
            index = _variable_index(name, var_position)
            factors[index] = factors.get(index, 0) + exponent
            if peek()[0] == "op" and peek()[1] == "*":
                i += 1
                if peek()[0] != "var":
                    raise PolynomialSyntaxError("Expected a variable", peek()[2])
        if not have_coeff and not factors:
            raise PolynomialSyntaxError("Expected a term", peek()[2])
        raw_terms.append((sign * coeff, factors))

        kind, value, position = peek()
        if kind == "end":
            break
        if not (kind == "op" and value in "+-"):
            raise PolynomialSyntaxError(f"Unexpected token {value!r}", position)

    largest = max((max(f) for _, f in raw_terms if f), default=1)
    if dim is None:
        dim = largest
    elif largest > dim:
        raise ValueError(f"Variable x{largest} exceeds dimension {dim}.")
    result = Polynomial.zero(dim)
    for coeff, factors in raw_terms:
        alpha = [0] * dim
        for index, exponent in factors.items():
            alpha[index - 1] += exponent
        result = result + Polynomial.monomial(alpha, coeff)
    return result


def rational_from_parts(num, den=1):
    num, den = int(num), int(den)
    if den == 0:
        raise ValueError(f"Zero denominator in {num}/{den}.")
    return Fraction(num, den)


def parse_rational(value):
    """Exact rational from an int, an "a/b" / decimal string, or {"num", "den"}."""
    if isinstance(value, bool):
        raise TypeError("Cannot read a bool as a rational.")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return rational_from_parts(num, den)
        return Fraction(text)
    if isinstance(value, dict):
        return rational_from_parts(value["num"], value.get("den", 1))
    raise TypeError(f"Cannot read {value!r} as an exact rational.")


def format_rational(q):
    return str(Fraction(q))


def polynomial_to_json(p):
    return {
        "dim": p.dimension,
        "terms": [
            {"exp": list(alpha), "num": c.numerator, "den": c.denominator}
            for alpha, c in p
        ],
    }


def polynomial_from_json(obj, dim=None):
    """Read a polynomial from its JSON object, or from a string in the text grammar."""
    if isinstance(obj, str):
        return parse_polynomial(obj, dim=dim)
    if not isinstance(obj, dict) or "terms" not in obj:
        raise ValueError(f"Not a polynomial object: {obj!r}")
    obj_dim = int(obj.get("dim", dim or 0))
    if dim is not None and obj_dim != dim:
        raise ValueError(f"Polynomial has dim {obj_dim}, expected {dim}.")
    terms = {}
    for term in obj["terms"]:
        alpha = tuple(term["exp"])
        terms[alpha] = terms.get(alpha, Fraction(0)) + rational_from_parts(
            term["num"], term.get("den", 1)
        )
    return Polynomial(obj_dim, terms)


def common_dimension(items):
    """Largest variable index among polynomial texts/objects (for mixed inputs)."""
    dims = []
    for item in items:
        if isinstance(item, dict):
            dims.append(int(item["dim"]))
        else:
            dims.append(parse_polynomial(item).dimension)
    return max(dims, default=1)
