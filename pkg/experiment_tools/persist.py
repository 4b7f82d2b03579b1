import datetime
import json
import os
import subprocess
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

TOOL_VERSION = "0.1.0"


def get_git_revision_hash():
    # reports are also written outside of a git checkout
    try:
        return (
            subprocess.check_output(
                ["git", "rev-parse", "HEAD"], stderr=subprocess.DEVNULL
            )
            .decode()
            .strip()
        )
    except (OSError, subprocess.CalledProcessError):
        return None


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    verdict: str
    exit_code: int
    result: Dict[str, Any] = field(default_factory=dict)
    certificate: Optional[Dict[str, Any]] = None
    timings: Dict[str, float] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION
    created: str = field(
        default_factory=lambda: datetime.datetime.now().isoformat(timespec="seconds")
    )
    git_hash: Optional[str] = field(default_factory=get_git_revision_hash)

    def to_json(self):
        return asdict(self)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False)


def write_json(obj, path):
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, "w") as f:
        f.write(dumps(obj))
        f.write("\n")
    return path


def read_json(path):
    with open(path) as f:
        return json.load(f)


def persist_output_to_filename(output, experiment_name, output_dir="./run_outputs/moments/"):
    """Write an experiment's output dict as JSON, tagged with the git revision."""
    if not experiment_name:
        experiment_name = datetime.datetime.now().isoformat()
    output = dict(output)
    output["git-hash"] = get_git_revision_hash()
    return write_json(output, os.path.join(output_dir, experiment_name + ".json"))
