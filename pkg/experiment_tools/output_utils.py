import pandas as pd
from mlflow.tracking import MlflowClient


def get_mlflow_meta(experiment_id, order_by=["metrics.residual_max"], filter_string=""):
    # get the details of all FINISHED runs under experiment_id
    client = MlflowClient()
    filter_string = f"{filter_string} attribute.status='FINISHED'"
    return client.search_runs(
        experiment_id, order_by=order_by, filter_string=filter_string
    )


def runs_table(experiment_id, params=(), metrics=(), filter_string=""):
    """One row per finished run with the requested params and metrics as columns.
    - can filter by passing a filter_string of the form:
            # filter_string = "params.region='box' params.num_atoms='3'"
    """
    meta = get_mlflow_meta(experiment_id, filter_string=filter_string)
    rows = []
    for run in meta:
        row = {"run_id": run.info.run_id}
        row.update({p: run.data.params.get(p) for p in params})
        row.update({m: run.data.metrics.get(m) for m in metrics})
        rows.append(row)
    return pd.DataFrame(rows, columns=["run_id", *params, *metrics])
