from fractions import Fraction

import pytest

from certs.certificate import verify
from cones.archimedean import (
    CONSISTENT,
    LINEAR,
    REFUTED,
    SQUARE,
    archimedean_witness_search,
    bounded_element_identities,
    bounded_product_identities,
    grid_points,
    ideal_generator_identity,
    membership_by_evaluation,
)
from cones.spec import (
    PREORDERING,
    QUADRATIC_MODULE,
    SEMIRING,
    SMODULE,
    ConeSpec,
    cone_spec_from_json,
    cone_spec_to_json,
    enumerate_basis,
    hausdorff_cube,
    interval_box,
    non_archimedean_example,
    simplex,
    unit_ball,
)
from poly.polynomial import Polynomial

x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)


def check_witness(witness):
    """Each certificate verifies exactly and proves lambda - x_k^2 or lambda +- x_k."""
    assert witness
    assert witness.lam > 0
    for cert in witness.certificates:
        assert verify(cert)
    dim = witness.certificate.target.dimension
    if witness.variable is None:
        total = sum((Polynomial.variable(dim, k) ** 2 for k in range(dim)), Polynomial.zero(dim))
        assert witness.certificate.target == witness.lam - total
        return
    xk = Polynomial.variable(dim, witness.variable)
    if witness.shape == SQUARE:
        assert witness.certificate.target == witness.lam - xk * xk
    else:
        assert witness.shape == LINEAR
        assert {c.target for c in witness.certificates} == {witness.lam + xk, witness.lam - xk}


### ConeSpec and basis enumeration ###


def test_cone_spec_normalizes_multipliers():
    spec = ConeSpec(SMODULE, (x,), (y,))
    assert spec.g_multipliers == (Polynomial.constant(2, 1), y)
    assert ConeSpec(SEMIRING, (x,), (y,)).g_multipliers == (Polynomial.constant(2, 1),)
    with pytest.raises(ValueError):
        ConeSpec("cone", (x,))
    with pytest.raises(ValueError):
        ConeSpec(SEMIRING, ())
    with pytest.raises(ValueError):
        ConeSpec(SEMIRING, (x, Polynomial.variable(1, 0)))


@pytest.mark.parametrize(
    "spec, degree_bound, size",
    [
        (interval_box([(0, 1)]), 2, 3),
        (simplex(2, PREORDERING), 2, 7),
        (simplex(2), 2, 10),
        (ConeSpec(SMODULE, (x,), (y,)), 1, 3),
        (unit_ball(2), 1, 1),
    ],
)
def test_enumerate_basis_sizes(spec, degree_bound, size):
    assert len(enumerate_basis(spec, degree_bound)) == size


def test_enumerate_basis_products():
    basis = enumerate_basis(hausdorff_cube(1), 2)
    assert basis.products[0].value == 1
    x1 = Polynomial.variable(1, 0)
    assert set(basis.values()) >= {x1 * x1, x1 * (1 - x1), (1 - x1) ** 2}
    for element in basis.products:
        assert sum(element.exponents) <= 2


@pytest.mark.parametrize(
    "spec, low, high",
    [
        (interval_box([(0, 1), (-1, 2)]), -1, 2),
        (simplex(2), 0, 1),
        (simplex(2, PREORDERING), 0, 1),
        (hausdorff_cube(2), 0, 1),
        (unit_ball(2), -1, 1),
        (non_archimedean_example(PREORDERING), 0, 2),
    ],
)
def test_basis_elements_nonnegative_on_k(spec, low, high):
    points = [p for p in grid_points(spec.dimension, low, high, 6) if spec.in_set(p)]
    assert points
    basis = enumerate_basis(spec, 4)
    for element in basis.products:
        assert all(element.value(p) >= 0 for p in points), str(element.value)



def test_enumerate_basis_cap():
    with pytest.raises(ValueError, match="Combinatorial cap"):
        enumerate_basis(simplex(2), 10, max_size=50)
    with pytest.raises(ValueError):
        enumerate_basis(simplex(2), -1)


def test_cone_spec_json():
    spec = ConeSpec(SMODULE, (x, 1 - x), (y,))
    assert cone_spec_from_json(cone_spec_to_json(spec)) == spec
    loaded = cone_spec_from_json({"kind": "Quadratic-Module", "f": ["1 - x^2 - y^2"]})
    assert loaded == unit_ball(2)
    assert cone_spec_from_json({"kind": "semiring", "f": ["x"], "dim": 3}).dimension == 3


### Archimedean witnesses ###


def test_interval_box_witnesses():
    report = archimedean_witness_search(interval_box([(0, 1), (-1, 2)]), 2)
    assert report.archimedean
    for witness in report.per_variable:
        check_witness(witness)
    frame = report.to_frame()
    assert list(frame["variable"]) == ["x1", "x2", "ALL"]


def test_unit_ball_witness():
    report = archimedean_witness_search(unit_ball(2), 2)
    assert report.archimedean
    first = report.per_variable[0]
    check_witness(first)
    assert first.shape == SQUARE
    assert first.lam == 1
    check_witness(report.all_variables)
    assert report.all_variables.lam == 1


def test_simplex_semiring_witnesses():
    report = archimedean_witness_search(simplex(2), 1)
    assert report.archimedean
    assert report.all_variables is None
    for witness in report.per_variable:
        check_witness(witness)
        assert witness.shape == LINEAR
        assert witness.lam == 1
    obj = report.to_json()
    assert obj["archimedean"] is True
    assert obj["variables"][0]["verdict"] == "Witness"
    assert obj["variables"][0]["lambda"] == "1"


@pytest.mark.parametrize(
    "spec, degree_bound, low, high",
    [
        (interval_box([(0, 1), (-1, 2)]), 2, -1, 2),
        (unit_ball(2), 2, -1, 1),
        (simplex(2), 1, 0, 1),
        (hausdorff_cube(2), 1, 0, 1),
    ],
)
def test_witness_targets_nonnegative_on_k(spec, degree_bound, low, high):
    points = [p for p in grid_points(spec.dimension, low, high, 8) if spec.in_set(p)]
    report = archimedean_witness_search(spec, degree_bound)
    assert report.archimedean
    witnesses = list(report.per_variable)
    if report.all_variables is not None:
        witnesses.append(report.all_variables)
    for witness in witnesses:
        for cert in witness.certificates:
            assert verify(cert)
            assert min(cert.target(p) for p in points) >= 0



@pytest.mark.parametrize("degree_bound", [2, 3, 4, 5, 6])
def test_non_archimedean_example_stays_inconclusive(degree_bound):
    report = archimedean_witness_search(non_archimedean_example(), degree_bound)
    assert not report.archimedean
    assert not report.all_variables
    for outcome in report.per_variable:
        assert not outcome
        assert outcome.degree_bound == degree_bound
    assert report.to_json()["variables"][0]["verdict"] == "Inconclusive"


### Identities ###


def test_bounded_element_identities():
    checks = bounded_element_identities(2, x + y)
    assert len(checks) == 3
    assert all(c.holds for c in checks)
    with pytest.raises(ValueError):
        bounded_element_identities(0, x)


def test_bounded_product_and_ideal_identities():
    assert all(c.holds for c in bounded_product_identities(1, x, Fraction(3, 2), y - x))
    with pytest.raises(ValueError):
        bounded_product_identities(1, x, -1, y)
    (check,) = ideal_generator_identity(x * y - 1, 1 - x * x - y * y)
    assert check.holds


### Membership by evaluation ###


def test_membership_by_evaluation():
    spec = simplex(2)
    points = grid_points(2, 0, 1, 4)
    assert len(points) == 25
    consistent = membership_by_evaluation(spec, x, points)
    assert consistent
    assert consistent.status == CONSISTENT
    assert consistent.checked == 15
    refuted = membership_by_evaluation(spec, x - Fraction(1, 2), grid_points(2, 0, 1, 2))
    assert not refuted
    assert refuted.status == REFUTED
    assert refuted.point == (0, 0)
    assert refuted.value == Fraction(-1, 2)
    with pytest.raises(ValueError):
        grid_points(2, steps=0)


def test_quadratic_module_kind_for_witness_certificates():
    report = archimedean_witness_search(ConeSpec(QUADRATIC_MODULE, (1 - x * x, 1 - y * y)), 2)
    assert report.archimedean
    assert report.per_variable[0].certificate.variant == "quadratic_module"
