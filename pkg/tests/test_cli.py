import json
from fractions import Fraction

import pytest

import moment_tool
from certs.certificate import certificate_from_json, verify
from experiment_tools.persist import read_json, write_json
from moments.sequence import (
    AtomicMeasure,
    MomentSequence,
    from_atomic_measure,
    moment_sequence_to_json,
)

HALF = Fraction(1, 2)


def run(argv, capsys):
    code = moment_tool.main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def write_sequence(tmp_path):
    def write(s, name="seq.json"):
        return write_json(moment_sequence_to_json(s), str(tmp_path / name))

    return write


def lebesgue(N):
    return MomentSequence.from_function(1, N, lambda a: Fraction(1, a[0] + 1))


def raw(*values):
    return MomentSequence(1, len(values) - 1, {(n,): v for n, v in enumerate(values)})


### hankel ###


def test_hankel_lebesgue_accepts(write_sequence, capsys):
    path = write_sequence(lebesgue(5))
    code, report = run(["hankel", path, "--generator", "x", "--generator=1-x", "--level", "2"], capsys)
    assert code == 0
    assert report["verdict"] == "PSD"
    assert report["result"]["all_psd"] is True
    assert len(report["result"]["blocks"]) == 3


def test_hankel_violation_reports_witness(write_sequence, capsys):
    code, report = run(["hankel", write_sequence(raw(1, 0, -1))], capsys)
    assert code == 1
    assert report["verdict"] == "NotPSD"
    assert report["result"]["blocks"][0]["witness"] is not None


def test_hankel_preordering_products(write_sequence, capsys):
    path = write_sequence(lebesgue(6))
    code, report = run(["hankel", path, "--generator", "x", "--generator=1-x", "--level", "2", "--preordering"], capsys)
    assert code == 0
    # 1, x, 1-x and x(1-x)
    assert len(report["result"]["blocks"]) == 4


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert moment_tool.main(["hankel", str(bad)]) == 2
    assert moment_tool.main(["hausdorff", str(tmp_path / "missing.json")]) == 2
    assert moment_tool.main(["nonsense"]) == 2
    assert moment_tool.main(["certify", "--method", "polya", "--target", "x^2 - x + 1"]) == 2
    assert moment_tool.main(["certify", "--method", "farkas", "--target", "x +"]) == 2


def test_zero_denominator_is_input_error(tmp_path, capsys):
    assert moment_tool.main(["certify", "--method", "polya", "--target", "1/0*x^2"]) == 2
    assert "Zero denominator" in capsys.readouterr().err
    bad = write_json(
        {"dim": 1, "max_degree": 1, "values": [{"exp": [0], "num": 1, "den": 1}, {"exp": [1], "num": 1, "den": 0}]},
        str(tmp_path / "zero.json"),
    )
    assert moment_tool.main(["hankel", bad]) == 2
    assert moment_tool.main(["hausdorff", bad]) == 2
    assert "Zero denominator" in capsys.readouterr().err


### hausdorff ###


@pytest.mark.parametrize(
    "sequence, code",
    [
        (MomentSequence.from_function(1, 6, lambda a: HALF ** a[0]), 0),
        (MomentSequence.from_function(1, 6, lambda a: 2 ** a[0]), 1),
        (MomentSequence.from_function(2, 5, lambda a: HALF ** sum(a)), 0),
    ],
)
def test_hausdorff(sequence, code, write_sequence, capsys):
    result_code, report = run(["hausdorff", write_sequence(sequence)], capsys)
    assert result_code == code
    if code:
        assert report["verdict"] == "Reject"
        assert report["result"]["violation"]["m"] == [0]
        assert report["result"]["violation"]["n"] == [1]
    else:
        assert report["verdict"] == "Accept"


### certify ###


def test_certify_polya_writes_reverifiable_certificate(tmp_path, capsys):
    out = str(tmp_path / "certs" / "polya.json")
    code, report = run(["certify", "--method", "polya", "--target", "x^2 - x*y + y^2", "--out", out], capsys)
    assert code == 0
    assert report["verdict"] == "Certified"
    assert report["certificate"]["extra"]["n"] == 1
    assert verify(certificate_from_json(read_json(out)))


def test_certify_handelman(tmp_path, capsys):
    out = str(tmp_path / "handelman.json")
    argv = ["certify", "--method", "handelman", "--target", "x^2 - x + 1", "--generator", "x", "--generator=1-x", "--degree", "2", "--out", out]
    code, report = run(argv, capsys)
    assert code == 0
    cert = certificate_from_json(read_json(out))
    assert cert.variant == "handelman"
    assert verify(cert)


def test_certify_generators_file(tmp_path, capsys):
    generators = write_json({"f": ["x", "1 - x"]}, str(tmp_path / "f.json"))
    out = str(tmp_path / "smodule.json")
    code, report = run(["certify", "--method", "smodule", "--target", "y - x*y + x", "--generators", generators, "--multiplier", "y", "--degree", "2", "--out", out], capsys)
    assert code == 0
    assert report["verdict"] == "Certified"
    cert = certificate_from_json(read_json(out))
    assert cert.variant == "smodule"
    assert len(cert.generators) == 2
    assert verify(cert)


def test_certify_farkas_infeasible(capsys):
    code, report = run(["certify", "--method", "farkas", "--target=-1", "--generator", "x"], capsys)
    assert code == 1
    assert report["verdict"] == "infeasible"
    assert report["certificate"] is None


def test_certify_bernstein(capsys):
    code, report = run(["certify", "--method", "bernstein", "-k", "5"], capsys)
    assert code == 0
    assert verify(certificate_from_json(report["certificate"]))


### extract ###


def test_extract_two_atoms(write_sequence, tmp_path, capsys):
    s = from_atomic_measure(AtomicMeasure.from_pairs(1, [((0,), HALF), ((1,), HALF)]), 5)
    out = str(tmp_path / "measure.json")
    code, report = run(["extract", write_sequence(s), "--out", out], capsys)
    assert code == 0
    atoms = sorted(read_json(out)["atoms"], key=lambda a: a["point"][0])
    assert [a["point"][0] for a in atoms] == pytest.approx([0.0, 1.0], abs=1e-9)
    assert [a["weight"] for a in atoms] == pytest.approx([0.5, 0.5], abs=1e-9)
    assert report["result"]["flat"] is True


def test_extract_rank_one(write_sequence, capsys):
    s = from_atomic_measure(AtomicMeasure.from_pairs(1, [((Fraction(1, 3),), 1)]), 3)
    code, report = run(["extract", write_sequence(s), "--seed", "3"], capsys)
    assert code == 0
    (atom,) = report["result"]["atoms"]
    assert atom["point"][0] == pytest.approx(1 / 3)
    assert report["result"]["seed"] == 3


def test_extract_not_positive(write_sequence, capsys):
    code, report = run(["extract", write_sequence(raw(1, 0, -1))], capsys)
    assert code == 1
    assert report["verdict"] == "NotPositive"
    assert report["result"]["eigenvalue"] == pytest.approx(-1.0)
    assert len(report["result"]["witness"]) == 2


### archimedean ###


@pytest.mark.parametrize(
    "cone, degree, code",
    [
        ({"kind": "semiring", "f": ["x", "y", "1 - x - y"]}, 1, 0),
        ({"kind": "quadratic_module", "f": ["1 - x^2 - y^2"]}, 2, 0),
        ({"kind": "quadratic_module", "f": ["2*x - 1", "2*y - 1", "1 - x*y"]}, 2, 1),
    ],
)
def test_archimedean(cone, degree, code, tmp_path, capsys):
    path = write_json(cone, str(tmp_path / "cone.json"))
    result_code, report = run(["archimedean", path, "--degree", str(degree)], capsys)
    assert result_code == code
    assert report["verdict"] == ("Witness" if code == 0 else "Inconclusive")
    assert report["result"]["archimedean"] is (code == 0)
