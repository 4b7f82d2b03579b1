from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from certs import constructors
from certs.certificate import (
    CertificateTerm,
    certificate_from_json,
    certificate_to_json,
    polya_expansion,
    verify,
)
from certs.constructors import (
    INFEASIBLE,
    NOT_FOUND_AT_DEGREE,
    NOT_FOUND_UP_TO,
    bernstein_identity,
    farkas_certify,
    handelman_certify,
    polya_certify,
    smodule_certify,
)
from cones.archimedean import grid_points, membership_by_evaluation
from cones.spec import SEMIRING, ConeSpec, simplex
from experiment_tools.pyro_tools import auto_seed
from experiment_tools.sampling import random_positive_quadratic
from poly.parsing import parse_polynomial
from poly.polynomial import Polynomial

x1 = Polynomial.variable(1, 0)
x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)


def tamper_coefficient(cert, delta=1):
    t = cert.terms[0]
    terms = (replace(t, coefficient=t.coefficient + delta),) + cert.terms[1:]
    return replace(cert, terms=terms)


def tamper_exponent(cert):
    t = cert.terms[0]
    exponents = (t.exponents[0] + 1,) + t.exponents[1:]
    terms = (CertificateTerm(t.coefficient, exponents, t.multiplier_index, t.square),) + cert.terms[1:]
    return replace(cert, terms=terms)


### Farkas ###


def test_farkas_examples():
    f = [x, 1 - x - y, y]
    cert = farkas_certify(1 - x, f)
    assert verify(cert)
    assert cert.target == 1 - x
    assert farkas_certify(Polynomial.constant(2, 1), f)
    assert not verify(tamper_coefficient(cert))
    refused = farkas_certify(Polynomial.constant(1, -1), [x1])
    assert not refused
    assert refused.reason == INFEASIBLE


def test_farkas_rejects_nonlinear_input():
    with pytest.raises(ValueError, match="Nonlinear"):
        farkas_certify(x * x, [x])
    with pytest.raises(ValueError, match="Nonlinear"):
        farkas_certify(x, [x * y])


def test_farkas_on_random_triangle_instances():
    """Linear h fixed by nonnegative vertex values certify; a negative vertex value refutes."""
    rng = np.random.default_rng(5)
    f = list(simplex(2).f_generators)
    spec = ConeSpec(SEMIRING, tuple(f))
    samples = grid_points(2, 0, 1, 4)
    for _ in range(30):
        v0, v1, v2 = (Fraction(int(n), int(d)) for n, d in zip(rng.integers(0, 10, 3), rng.integers(1, 5, 3)))
        h = v0 + (v1 - v0) * x + (v2 - v0) * y
        cert = farkas_certify(h, f)
        assert verify(cert)
        assert membership_by_evaluation(spec, h, samples)
        bad = h - (v1 + 1) * x
        assert not farkas_certify(bad, f)


### Handelman and S-module ###


def test_handelman_fixed_instance():
    h = x1 * x1 - x1 + 1
    cert = handelman_certify(h, [x1, 1 - x1], 2)
    assert verify(cert)
    assert all(sum(t.exponents) <= 2 for t in cert.terms)
    assert all(t.coefficient > 0 for t in cert.terms)
    assert not verify(tamper_coefficient(cert))
    assert not verify(tamper_exponent(cert))


def test_handelman_small_cases():
    cert = handelman_certify(x1, [x1, 1 - x1], 1)
    assert verify(cert)
    assert [(t.coefficient, t.exponents) for t in cert.terms] == [(1, (1, 0))]
    negative = handelman_certify(Polynomial.constant(1, -1), [x1, 1 - x1], 4)
    assert negative.reason == NOT_FOUND_AT_DEGREE
    assert negative.bound == 4


def test_handelman_degree_bound_checks():
    with pytest.raises(ValueError):
        handelman_certify(x1 ** 3, [x1, 1 - x1], 2)
    with pytest.raises(ValueError, match="Nonlinear"):
        handelman_certify(x1, [x1 * x1], 2)
    assert handelman_certify(x1 * x1 + 1, [x1, 1 - x1]).extra["degree_bound"] == 4


def test_handelman_random_positive_quadratics():
    auto_seed(17)
    f = [x1, 1 - x1]
    for _ in range(20):
        h = random_positive_quadratic()
        found = None
        for D in range(2, 9):
            cert = handelman_certify(h, f, D)
            if cert:
                assert verify(cert)
                found = D
                break
        assert found is not None, str(h)


def test_smodule_examples():
    one = Polynomial.constant(2, 1)
    h = y * (1 - x) + x
    cert = smodule_certify(h, [x, 1 - x], [one, y], 2)
    assert verify(cert)
    assert cert.multipliers == (one, y)
    assert any(t.multiplier_index == 1 for t in cert.terms)
    assert not smodule_certify(-y, [x, 1 - x], [y], 2)
    plain = smodule_certify(x * x - x + 1, [x, 1 - x], [], 2)
    assert verify(plain)


def test_certificate_json_round_trip_reverifies():
    cert = smodule_certify(y * (1 - x) + x, [x, 1 - x], [y], 2)
    obj = certificate_to_json(cert)
    assert obj["variant"] == "smodule"
    assert all(isinstance(t["coeff"], str) for t in obj["terms"])
    assert verify(certificate_from_json(obj))
    obj["terms"][0]["coeff"] = str(Fraction(obj["terms"][0]["coeff"]) + 1)
    assert not verify(certificate_from_json(obj))


### Polya ###


def test_polya_examples():
    cert = polya_certify(x * x - x * y + y * y)
    assert cert.extra["n"] == 1
    assert sum((Polynomial.monomial(t.exponents, t.coefficient) for t in cert.terms), Polynomial.zero(2)) == x ** 3 + y ** 3
    assert verify(cert)
    assert polya_certify(x * x + y * y).extra["n"] == 0
    failed = polya_certify((x - y) ** 2, 30)
    assert failed.reason == NOT_FOUND_UP_TO
    assert failed.bound == 30
    with pytest.raises(ValueError):
        polya_certify(x * x - x + 1)


def test_polya_certificates_are_monotone():
    for f in [x * x - x * y + y * y, parse_polynomial("x^2 - 3/2*x*y + y^2"), 3 * x ** 3 - x * x * y + y ** 3]:
        cert = polya_certify(f)
        n = cert.extra["n"]
        assert all(c >= 0 for _, c in polya_expansion(f, n + 1))
        assert all(c >= 0 for _, c in polya_expansion(f, n + 2))


def test_polya_checks_its_certificate(monkeypatch):
    monkeypatch.setattr(constructors, "verify", lambda cert: False)
    with pytest.raises(RuntimeError, match="exact verification"):
        polya_certify(x * x - x * y + y * y)
    monkeypatch.undo()
    assert verify(polya_certify(x * x - x * y + y * y))


### Bernstein ###


@pytest.mark.parametrize("k", range(2, 13))
def test_bernstein_identity(k):
    cert = bernstein_identity(k)
    assert verify(cert)
    assert cert.target == x1 * x1 + Fraction(1, k - 1)


def test_bernstein_small_cases():
    two = bernstein_identity(2)
    assert [(t.coefficient, t.exponents) for t in two.terms] == [
        (Fraction(1, 2), (2, 0)),
        (Fraction(1, 2), (0, 2)),
    ]
    three = bernstein_identity(3)
    assert [t.coefficient for t in three.terms] == [Fraction(9, 48), Fraction(3, 48), Fraction(3, 48), Fraction(9, 48)]
    with pytest.raises(ValueError):
        bernstein_identity(1)
