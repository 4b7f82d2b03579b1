import os
import argparse
import math

import numpy as np
import pandas as pd
from tqdm import trange

import mlflow

from experiment_tools.pyro_tools import auto_seed
from experiment_tools.sampling import REGIONS, random_atomic_measure
from gns.extraction import DEFAULT_TOL, extract, verify_representation
from gns.model import build
from moments.sequence import from_atomic_measure


def match_atoms(truth, recovered):
    """Greedy nearest matching; returns the largest point and weight errors."""
    remaining = list(recovered.atoms)
    point_error, weight_error = 0.0, 0.0
    for point, weight in truth.atoms:
        if not remaining:
            return math.inf, math.inf
        distances = [
            math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(point, q)))
            for q, _ in remaining
        ]
        i = int(np.argmin(distances))
        q, w = remaining.pop(i)
        point_error = max(point_error, distances[i])
        weight_error = max(weight_error, abs(float(weight) - float(w)))
    return point_error, weight_error


def single_run(
    seed,
    num_trials,
    dim,
    max_atoms,
    level,
    region,
    separation,
    tol,
    mlflow_experiment_name,
):
    seed = auto_seed(seed)
    mlflow.set_experiment(mlflow_experiment_name)
    mlflow.log_param("seed", seed)
    mlflow.log_param("num_trials", num_trials)
    mlflow.log_param("dim", dim)
    mlflow.log_param("max_atoms", max_atoms)
    mlflow.log_param("level", level)
    mlflow.log_param("region", region)
    mlflow.log_param("separation", separation)

    rows = []
    for i in trange(num_trials, desc="round trips"):
        num_atoms = 1 + i % max_atoms
        truth = random_atomic_measure(dim, num_atoms, region, separation)
        s = from_atomic_measure(truth, 2 * level + 1)
        model = build(s, level)
        result = extract(model, tol, seed + i)
        representation = verify_representation(result, s, 2 * level)
        point_error, weight_error = match_atoms(truth, result.measure)
        rows.append(
            {
                "num_atoms": num_atoms,
                "recovered": len(result.measure.atoms),
                "rank": model.quotient_rank,
                "flat": result.flat,
                "residual": result.residual,
                "max_mismatch": representation.max_mismatch,
                "point_error": point_error,
                "weight_error": weight_error,
            }
        )
        mlflow.log_metric("residual", result.residual, step=i)

    res = pd.DataFrame(rows)
    res["count_match"] = res["num_atoms"] == res["recovered"]
    if not os.path.exists("mlflow_outputs"):
        os.makedirs("mlflow_outputs")
    res.to_csv("mlflow_outputs/gns_round_trip.csv")
    mlflow.log_artifact("mlflow_outputs/gns_round_trip.csv", artifact_path="evaluation")
    mlflow.log_metric("residual_max", float(res["residual"].max()))
    mlflow.log_metric("point_error_max", float(res["point_error"].max()))
    mlflow.log_metric("weight_error_max", float(res["weight_error"].max()))
    mlflow.log_metric("count_match_rate", float(res["count_match"].mean()))

    print("Results:\n", res.describe().T)
    print(f"Run completed {mlflow.active_run().info.artifact_uri}.")
    return res


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="GNS round trip: atomic measure -> moments -> extracted atoms."
    )
    parser.add_argument("--seed", default=-1, type=int)
    parser.add_argument("--num-trials", default=20, type=int)
    parser.add_argument("--dim", default=2, type=int)
    parser.add_argument("--max-atoms", default=4, type=int)
    parser.add_argument("--level", default=4, type=int)
    parser.add_argument("--region", default="box", type=str, choices=REGIONS)
    parser.add_argument("--separation", default=0.1, type=float)
    parser.add_argument("--tol", default=DEFAULT_TOL, type=float)
    parser.add_argument("--mlflow-experiment-name", default="gns_round_trip", type=str)
    args = parser.parse_args()

    single_run(
        seed=args.seed,
        num_trials=args.num_trials,
        dim=args.dim,
        max_atoms=args.max_atoms,
        level=args.level,
        region=args.region,
        separation=args.separation,
        tol=args.tol,
        mlflow_experiment_name=args.mlflow_experiment_name,
    )
