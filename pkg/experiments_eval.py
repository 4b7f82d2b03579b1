import os
import argparse

import mlflow

from experiment_tools.output_utils import runs_table

SUMMARIES = {
    "gns_round_trip": (
        ["seed", "dim", "max_atoms", "level", "region"],
        ["residual_max", "point_error_max", "weight_error_max", "count_match_rate"],
    ),
    "handelman_degree_sweep": (
        ["seed", "num_instances", "max_degree", "margin"],
        ["certified_rate", "min_degree_max"],
    ),
}


def evaluate_experiment(experiment_name, filter_string=""):
    """Tabulate every finished run of experiment_name; saved next to the other outputs."""
    experiment = mlflow.get_experiment_by_name(experiment_name)
    if experiment is None:
        raise ValueError(f"experiment={experiment_name} not found.")
    params, metrics = SUMMARIES.get(experiment_name, ([], []))
    res = runs_table(experiment.experiment_id, params, metrics, filter_string)
    if not os.path.exists("mlflow_outputs"):
        os.makedirs("mlflow_outputs")
    path = f"mlflow_outputs/{experiment_name}_summary.csv"
    res.to_csv(path)
    print("Experiment: ", experiment_name)
    print("Results:\n", res)
    return res


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Summarize finished moment-problem experiment runs."
    )
    parser.add_argument(
        "--experiment-name",
        default="gns_round_trip",
        type=str,
        choices=list(SUMMARIES),
    )
    parser.add_argument("--filter-string", default="", type=str)
    args = parser.parse_args()

    evaluate_experiment(
        experiment_name=args.experiment_name,
        filter_string=args.filter_string,
    )
