import os
import argparse
from fractions import Fraction

import pandas as pd
from tqdm import trange

import mlflow

from certs.certificate import certificate_to_json, verify
from certs.constructors import handelman_certify
from experiment_tools.persist import persist_output_to_filename
from experiment_tools.pyro_tools import auto_seed
from experiment_tools.sampling import random_positive_quadratic
from poly.polynomial import Polynomial


def minimal_degree(h, f, max_degree):
    """Smallest D <= max_degree with a Handelman certificate, or None."""
    for D in range(max(h.total_degree(), 0), max_degree + 1):
        cert = handelman_certify(h, f, D)
        if cert:
            if not verify(cert):
                raise RuntimeError(f"Certificate for {h} at D={D} failed to verify.")
            return D, cert
    return None, None


def single_run(
    seed,
    num_instances,
    max_degree,
    margin,
    mlflow_experiment_name,
):
    seed = auto_seed(seed)
    margin = Fraction(margin)
    mlflow.set_experiment(mlflow_experiment_name)
    mlflow.log_param("seed", seed)
    mlflow.log_param("num_instances", num_instances)
    mlflow.log_param("max_degree", max_degree)
    mlflow.log_param("margin", str(margin))

    x = Polynomial.variable(1, 0)
    f = [x, 1 - x]
    rows = []
    certificates = {}
    for i in trange(num_instances, desc="instances"):
        h = random_positive_quadratic(margin)
        D, cert = minimal_degree(h, f, max_degree)
        rows.append(
            {
                "h": str(h),
                "min_degree": D,
                "terms": None if cert is None else len(cert.terms),
            }
        )
        if D is not None:
            certificates[str(h)] = certificate_to_json(cert)
            mlflow.log_metric("min_degree", D, step=i)

    res = pd.DataFrame(rows)
    if not os.path.exists("mlflow_outputs"):
        os.makedirs("mlflow_outputs")
    res.to_csv("mlflow_outputs/handelman_degree_sweep.csv")
    mlflow.log_artifact(
        "mlflow_outputs/handelman_degree_sweep.csv", artifact_path="evaluation"
    )
    found = res["min_degree"].notna()
    mlflow.log_metric("certified_rate", float(found.mean()))
    if found.any():
        mlflow.log_metric("min_degree_max", float(res.loc[found, "min_degree"].max()))

    path = persist_output_to_filename(
        {"seed": seed, "margin": str(margin), "certificates": certificates},
        f"{mlflow_experiment_name}_{seed}",
    )
    mlflow.log_artifact(path, artifact_path="certificates")

    print("Results:\n", res)
    print(f"Run completed {mlflow.active_run().info.artifact_uri}.")
    return res


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Minimal Handelman degree for random positive quadratics on [0,1]."
    )
    parser.add_argument("--seed", default=-1, type=int)
    parser.add_argument("--num-instances", default=20, type=int)
    parser.add_argument("--max-degree", default=8, type=int)
    parser.add_argument("--margin", default="1/4", type=str)
    parser.add_argument(
        "--mlflow-experiment-name", default="handelman_degree_sweep", type=str
    )
    args = parser.parse_args()

    single_run(
        seed=args.seed,
        num_instances=args.num_instances,
        max_degree=args.max_degree,
        margin=args.margin,
        mlflow_experiment_name=args.mlflow_experiment_name,
    )
