from fractions import Fraction

import pytest

from experiment_tools.persist import RunReport, persist_output_to_filename, read_json, write_json
from experiment_tools.pyro_tools import auto_seed
from experiment_tools.sampling import (
    BALL,
    SIMPLEX,
    in_region,
    outside_point,
    random_atomic_measure,
    random_positive_quadratic,
    rationalize,
)
from gns_round_trip import match_atoms
from handelman_degree_sweep import minimal_degree
from moments.sequence import AtomicMeasure
from poly.polynomial import Polynomial


def test_run_report_round_trip(tmp_path):
    report = RunReport("hausdorff", {"sequence": "seq.json"}, "Accept", 0, {"checked": 3})
    path = write_json(report.to_json(), str(tmp_path / "nested" / "report.json"))
    obj = read_json(path)
    assert obj["command"] == "hausdorff"
    assert obj["exit_code"] == 0
    assert obj["tool_version"] == report.tool_version
    assert "git_hash" in obj


def test_persist_output(tmp_path):
    path = persist_output_to_filename({"n": 1}, "sweep", output_dir=str(tmp_path))
    obj = read_json(path)
    assert obj["n"] == 1
    assert "git-hash" in obj


def test_auto_seed_reproducible():
    assert auto_seed(5) == 5
    first = random_atomic_measure(2, 3, SIMPLEX)
    auto_seed(5)
    assert random_atomic_measure(2, 3, SIMPLEX) == first
    assert auto_seed(-1) >= 0


def test_samplers_stay_in_region():
    auto_seed(9)
    for _ in range(20):
        measure = random_atomic_measure(2, 4, BALL, separation=0.05)
        assert all(in_region(p, BALL) for p, _ in measure.atoms)
        far = outside_point(3)
        assert not in_region(far, "box")
        h = random_positive_quadratic()
        assert min(h((Fraction(t, 20),)) for t in range(21)) >= Fraction(1, 4)
    assert rationalize(0.5) == Fraction(1, 2)
    with pytest.raises(ValueError):
        in_region((0,), "torus")


def test_match_atoms():
    truth = AtomicMeasure.from_pairs(1, [((0,), Fraction(1, 2)), ((1,), Fraction(1, 2))])
    recovered = AtomicMeasure(1, (((1.0,), 0.5), ((1e-9,), 0.5)))
    point_error, weight_error = match_atoms(truth, recovered)
    assert point_error == pytest.approx(1e-9)
    assert weight_error == 0.0
    assert match_atoms(truth, AtomicMeasure(1, (((0.0,), 1.0),)))[0] == float("inf")


def test_minimal_degree():
    x = Polynomial.variable(1, 0)
    D, cert = minimal_degree(x * x - x + 1, [x, 1 - x], 8)
    assert D == 2
    assert cert.extra["degree_bound"] == 2
    assert minimal_degree(Polynomial.constant(1, -1), [x, 1 - x], 3) == (None, None)
