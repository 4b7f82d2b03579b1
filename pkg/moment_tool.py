"""
moment_tool.py <command> ...

Command-line surface for moment sequences, positivity certificates and atomic
measure extraction. The JSON report goes to stdout, a short table to stderr.
Exit codes: 0 accept/success, 1 negative verdict, 2 usage or input error.
"""
import argparse
import json
import os
import sys
import time
import warnings

import mlflow
import pandas as pd

from certs.certificate import certificate_from_json, certificate_to_json, verify
from certs.constructors import (
    DEFAULT_N_MAX,
    bernstein_identity,
    farkas_certify,
    handelman_certify,
    polya_certify,
    smodule_certify,
)
from cones.archimedean import archimedean_witness_search
from cones.spec import PREORDERING, ConeSpec, cone_spec_from_json, enumerate_basis
from experiment_tools.persist import RunReport, dumps, read_json, write_json
from gns.extraction import (
    DEFAULT_SEED,
    DEFAULT_TOL,
    CommutationError,
    EigenvalueCollisionError,
    extract,
    extraction_to_json,
)
from gns.model import NotPositiveError, build, positive_gram
from moments.criteria import hausdorff_check
from moments.hankel import DEFAULT_PSD_TOL, cone_positivity_check
from moments.sequence import moment_sequence_from_json
from poly.parsing import (
    common_dimension,
    format_rational,
    polynomial_from_json,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


def _float(x):
    return float(f"{float(x):.17g}")


def _read_sequence(path):
    return moment_sequence_from_json(read_json(path))


def _generator_items(texts=None, path=None):
    items = list(texts or [])
    if path:
        obj = read_json(path)
        if isinstance(obj, dict):
            obj = obj["f"]
        items.extend(obj)
    return items


def _polynomials(items, dim):
    return [polynomial_from_json(item, dim) for item in items]


### Subcommands ###


def run_hankel(args):
    s = _read_sequence(args.sequence)
    generators = _polynomials(_generator_items(args.generator, args.generators), s.dimension)
    top = max([max(g.total_degree(), 0) for g in generators] + [0])
    level = args.level
    if level is None:
        level = max((s.max_degree - top) // 2, 0)
    if args.preordering and generators:
        basis = enumerate_basis(ConeSpec(PREORDERING, tuple(generators)), s.max_degree - 2 * level)
        generators = basis.values()
    report = cone_positivity_check(s, generators, level, args.tol)
    print(report.to_frame(), file=sys.stderr)
    verdict = "PSD" if report.all_psd else "NotPSD"
    return verdict, (EXIT_OK if report.all_psd else EXIT_NEGATIVE), report.to_json(), None


def run_hausdorff(args):
    s = _read_sequence(args.sequence)
    up_to = s.max_degree if args.up_to is None else args.up_to
    verdict = hausdorff_check(s, up_to)
    result = {"accepted": verdict.accepted, "checked": verdict.checked}
    if verdict.violation is not None:
        m, n, value = verdict.violation
        result["violation"] = {"m": list(m), "n": list(n), "value": format_rational(value)}
    print(pd.DataFrame([result]), file=sys.stderr)
    if verdict.accepted:
        return "Accept", EXIT_OK, result, None
    return "Reject", EXIT_NEGATIVE, result, None


def run_certify(args):
    method = args.method
    if method == "bernstein":
        cert = bernstein_identity(args.k)
    else:
        if args.target is None:
            raise ValueError(f"--target is required for method={method}.")
        f_items = _generator_items(args.generator, args.generators)
        g_items = list(args.multiplier or [])
        dim = common_dimension([args.target] + f_items + g_items)
        h = polynomial_from_json(args.target, dim)
        f = _polynomials(f_items, dim)
        if method == "farkas":
            cert = farkas_certify(h, f)
        elif method == "handelman":
            cert = handelman_certify(h, f, args.degree)
        elif method == "smodule":
            cert = smodule_certify(h, f, _polynomials(g_items, dim), args.degree)
        elif method == "polya":
            cert = polya_certify(h, args.n_max)
        else:
            raise ValueError(f"method={method} not supported.")
    if not cert:
        result = {"variant": cert.variant, "reason": cert.reason, "bound": cert.bound}
        print(pd.DataFrame([result]), file=sys.stderr)
        return cert.reason, EXIT_NEGATIVE, result, None
    if not verify(cert):
        raise RuntimeError("Constructed certificate does not verify.")
    print(pd.DataFrame({"term": cert.describe()}), file=sys.stderr)
    return "Certified", EXIT_OK, {"terms": len(cert.terms)}, certificate_to_json(cert)


def run_extract(args):
    s = _read_sequence(args.sequence)
    level = (s.max_degree - 1) // 2 if args.level is None else args.level
    try:
        if args.level is None:
            # positivity is checked on the largest Gram matrix the data allows
            positive_gram(s, s.max_degree // 2)
        model = build(s, level)
        extraction = extract(model, args.tol, args.seed)
    except NotPositiveError as e:
        result = {
            "error": str(e),
            "eigenvalue": _float(e.eigenvalue),
            "witness": [_float(x) for x in e.witness],
        }
        return "NotPositive", EXIT_NEGATIVE, result, None
    except (CommutationError, EigenvalueCollisionError) as e:
        return "ExtractionFailed", EXIT_NEGATIVE, {"error": str(e)}, None
    result = extraction_to_json(extraction)
    frame = pd.DataFrame(
        [
            {**{f"x{j + 1}": float(t) for j, t in enumerate(point)}, "weight": float(w)}
            for point, w in extraction.measure.atoms
        ]
    )
    print(frame, file=sys.stderr)
    return "Extracted", EXIT_OK, result, None


def run_archimedean(args):
    spec = cone_spec_from_json(read_json(args.cone))
    report = archimedean_witness_search(spec, args.degree)
    print(report.to_frame(), file=sys.stderr)
    if report.archimedean:
        return "Witness", EXIT_OK, report.to_json(), None
    return "Inconclusive", EXIT_NEGATIVE, report.to_json(), None


def _log_to_mlflow(report: RunReport, experiment_name):
    mlflow.set_experiment(experiment_name)
    with mlflow.start_run():
        mlflow.log_param("command", report.command)
        for key, value in report.inputs.items():
            mlflow.log_param(key, value)
        mlflow.log_param("verdict", report.verdict)
        mlflow.log_metric("exit_code", report.exit_code)
        for key, value in report.timings.items():
            mlflow.log_metric(f"time_{key}", value)
        if not os.path.exists("mlflow_outputs"):
            os.makedirs("mlflow_outputs")
        path = write_json(report.to_json(), f"mlflow_outputs/{report.command}_report.json")
        mlflow.log_artifact(path)


def _write_output(report: RunReport, path):
    if report.certificate is not None:
        write_json(report.certificate, path)
        # written certificates must survive a reload
        if not verify(certificate_from_json(read_json(path))):
            raise RuntimeError(f"Certificate written to {path} does not re-verify.")
    elif report.command == "extract" and report.exit_code == EXIT_OK:
        write_json(report.result, path)
    else:
        write_json(report.to_json(), path)


COMMANDS = {
    "hankel": run_hankel,
    "hausdorff": run_hausdorff,
    "certify": run_certify,
    "extract": run_extract,
    "archimedean": run_archimedean,
}


def make_parser():
    parser = argparse.ArgumentParser(
        description="Moment problems on compact semi-algebraic sets."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, type=str)
    common.add_argument("--mlflow-experiment-name", default=None, type=str)
    sub = parser.add_subparsers(dest="command", required=True)

    hankel = sub.add_parser("hankel", parents=[common], help="Localized Hankel PSD test.")
    hankel.add_argument("sequence", type=str)
    hankel.add_argument("--generators", default=None, type=str)
    hankel.add_argument("--generator", action="append", default=None)
    hankel.add_argument("--level", default=None, type=int)
    hankel.add_argument("--tol", default=DEFAULT_PSD_TOL, type=float)
    hankel.add_argument("--preordering", action="store_true")

    hausdorff = sub.add_parser("hausdorff", parents=[common], help="Hausdorff criterion on [0,1]^d.")
    hausdorff.add_argument("sequence", type=str)
    hausdorff.add_argument("--up-to", default=None, type=int)

    certify = sub.add_parser("certify", parents=[common], help="Positivity certificates.")
    certify.add_argument(
        "--method",
        required=True,
        type=str,
        choices=["farkas", "handelman", "smodule", "polya", "bernstein"],
    )
    certify.add_argument("--target", default=None, type=str)
    certify.add_argument("--generator", action="append", default=None)
    certify.add_argument("--generators", default=None, type=str)
    certify.add_argument("--multiplier", action="append", default=None)
    certify.add_argument("--degree", default=None, type=int)
    certify.add_argument("--n-max", default=DEFAULT_N_MAX, type=int)
    certify.add_argument("-k", default=2, type=int, help="Bernstein degree.")

    extract_parser = sub.add_parser("extract", parents=[common], help="GNS atom extraction.")
    extract_parser.add_argument("sequence", type=str)
    extract_parser.add_argument("--level", default=None, type=int)
    extract_parser.add_argument("--seed", default=DEFAULT_SEED, type=int)
    extract_parser.add_argument("--tol", default=DEFAULT_TOL, type=float)

    archimedean = sub.add_parser("archimedean", parents=[common], help="Archimedean witnesses.")
    archimedean.add_argument("cone", type=str)
    archimedean.add_argument("--degree", default=2, type=int)
    return parser


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    inputs = {k: v for k, v in vars(args).items() if k not in ("command",)}
    start = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            verdict, code, result, certificate = COMMANDS[args.command](args)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if caught:
        result = dict(result)
        result["warnings"] = [str(w.message) for w in caught]
    report = RunReport(
        command=args.command,
        inputs=inputs,
        verdict=verdict,
        exit_code=code,
        result=result,
        certificate=certificate,
        timings={"total": time.perf_counter() - start},
    )
    if args.out:
        _write_output(report, args.out)
    if args.mlflow_experiment_name:
        _log_to_mlflow(report, args.mlflow_experiment_name)
    print(dumps(report.to_json()))
    return code


if __name__ == "__main__":
    sys.exit(main())
