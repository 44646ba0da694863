import os
import io
import json
import math
import logging
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
import click
import numpy as np
import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table


# -----------------------------------------------------------------------------
# Constants
# -----------------------------------------------------------------------------
CONFIG_EXTENSIONS: Tuple[str, ...] = (".yaml", ".yml", ".json")
DEFAULT_CONFIG_FILE = "config.yaml"
ARTIFACTS_LOG = ".artifacts.log"
FLOAT_FORMAT = "%.17g"
OUTPUT_FORMATS = ("csv", "json")

DEFAULT_CONFIG: Dict[str, Any] = {
    "seed": 42,
    "n_jobs": 1,
    "log_level": "INFO",
    "progress": True,
    "optimizer": {
        "r_max": 1.0 - 1e-6,
        "annealing": {
            "initial_temperature_fraction": 0.1,
            "cooling_factor": 0.95,
            "proposals_per_stage": 50,
            "final_temperature_ratio": 1e-6,
            "anneal_fraction": 0.6,
        },
        "refinement": {"initial_step": 0.01, "shrink": 0.5, "tolerance": 1e-5},
    },
    "mesh": {"kind": "polar", "density": 8.0, "refine": True, "refine_factor": 10},
}


# -----------------------------------------------------------------------------
# Config files
# -----------------------------------------------------------------------------


def write_config(config_data, format, config_filename):
    """Write configuration data to a file in the specified format (YAML or JSON)."""
    try:
        logging.info(f"Attempting to write configuration to {config_filename} in {format} format.")
        with open(config_filename, "w", encoding="utf-8") as config_file:
            if format == "yaml":
                config_file.write("# ocs configuration; environment variables OCS_* are overridden by this file\n")
                yaml.safe_dump(config_data, config_file, sort_keys=False)
            elif format == "json":
                json.dump(config_data, config_file, indent=4)
            else:
                raise ValueError("Unsupported config format. Use 'yaml' or 'json'.")
        logging.info(f"Configuration successfully written to {config_filename}.")
    except ValueError as ve:
        logging.error(f"Unsupported format error: {ve}")
        raise
    except IOError as ioe:
        logging.error(f"I/O error while writing to {config_filename}: {ioe}")
        raise


def load_config(config_file: Optional[str] = DEFAULT_CONFIG_FILE, required: bool = False) -> Dict[str, Any]:
    """Read a YAML or JSON config file into a dict.

    A missing file yields an empty dict unless ``required`` is set. Parse errors
    are raised as ``ValueError`` so commands can map them to a configuration exit code.
    """
    if not config_file:
        return {}
    path = Path(config_file).expanduser()
    if not path.is_file():
        if required:
            raise ValueError(f"Configuration file '{config_file}' not found.")
        logging.debug(f"No configuration file at {config_file}; using defaults.")
        return {}
    if path.suffix.lower() not in CONFIG_EXTENSIONS:
        raise ValueError(f"Unsupported config extension '{path.suffix}' (allowed: {', '.join(CONFIG_EXTENSIONS)}).")

    try:
        with open(path, "r", encoding="utf-8") as f:
            if path.suffix.lower() == ".json":
                data = json.load(f)
            else:
                data = yaml.safe_load(f)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        logging.error(f"Error parsing configuration file {config_file}: {e}")
        raise ValueError(f"Error parsing configuration file '{config_file}': {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"Configuration file '{config_file}' must contain a mapping at the top level.")
    logging.info(f"Configuration loaded from {config_file}")
    return data


# -----------------------------------------------------------------------------
# Artifacts
# -----------------------------------------------------------------------------


def log_artifact(file_path):
    """Log the generated artifact file path to `.artifacts.log`."""
    artifact_log_path = os.path.join(os.getcwd(), ARTIFACTS_LOG)
    try:
        with open(artifact_log_path, "a", encoding="utf-8") as log_file:
            log_file.write(str(file_path) + "\n")
    except IOError as e:
        logging.warning(f"Could not write to artifact log file: {e}")


# -----------------------------------------------------------------------------
# Serialization
# -----------------------------------------------------------------------------


def convert_numpy_types(obj):
    """Convert NumPy / pandas types to native Python types for JSON serialization.

    Non-finite floats are kept as floats (``json`` writes them as Infinity/NaN).
    """
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [convert_numpy_types(x) for x in obj.tolist()]
    if isinstance(obj, pd.DataFrame):
        return [convert_numpy_types(r) for r in obj.to_dict(orient="records")]
    if isinstance(obj, pd.Series):
        return [convert_numpy_types(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(key): convert_numpy_types(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [convert_numpy_types(item) for item in obj]
    return obj


def timestamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def frame_to_csv(df: pd.DataFrame) -> str:
    buffer = io.StringIO()
    buffer.write(f"# generated_at={timestamp()}\n")
    df.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def payload_to_json(payload) -> str:
    document = {"generated_at": timestamp(), "result": convert_numpy_types(payload)}
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def read_frame(path) -> pd.DataFrame:
    """Read a CSV written by :func:`write_output` back into a DataFrame."""
    return pd.read_csv(path, comment="#")


def read_payload(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)["result"]


def write_output(result, out_path: Optional[str], format: str = "csv"):
    """Serialize a DataFrame or JSON-able payload to ``out_path`` (or stdout).

    DataFrames go to CSV or to a JSON array of records; anything else is written as JSON.
    """
    if format not in OUTPUT_FORMATS:
        raise ValueError(f"Unsupported output format '{format}'. Use one of {OUTPUT_FORMATS}.")

    if isinstance(result, pd.DataFrame) and format == "csv":
        text = frame_to_csv(result)
    else:
        text = payload_to_json(result)

    if not out_path:
        click.echo(text, nl=False)
        return None

    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logging.info(f"Results written to {path}")
    log_artifact(str(path))
    return str(path)


def print_table(df: pd.DataFrame, title: str):
    """Render a DataFrame as a rich table on stderr (keeps stdout machine-readable)."""
    table = Table(title=title)
    for column in df.columns:
        table.add_column(str(column), justify="right")
    for row in df.itertuples(index=False):
        table.add_row(*[_format_cell(value) for value in row])
    Console(stderr=True).print(table)


def _format_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf"
        return f"{value:.4g}"
    return str(value)


# -----------------------------------------------------------------------------
# CLI argument parsing
# -----------------------------------------------------------------------------


def parse_int_list(text: str) -> List[int]:
    """Parse '10,15,20' or '5-25' or a mix ('1-3,10') into a sorted list of unique ints."""
    values = set()
    for chunk in str(text).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk:
            start, stop = chunk.split("-", 1)
            lo, hi = int(start), int(stop)
            if hi < lo:
                raise ValueError(f"Empty range '{chunk}'.")
            values.update(range(lo, hi + 1))
        else:
            values.add(int(chunk))
    if not values:
        raise ValueError("At least one value is required.")
    return sorted(values)


def parse_float_list(text: str) -> List[float]:
    values = [float(chunk) for chunk in str(text).split(",") if chunk.strip()]
    if not values:
        raise ValueError("At least one value is required.")
    return values


# -----------------------------------------------------------------------------
# Command helpers
# -----------------------------------------------------------------------------
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


def status(message: str, fg: str = "green"):
    """Status line on stderr so stdout only carries results."""
    click.secho(message, fg=fg, err=True)


@contextmanager
def command_errors(action: str):
    """Map library errors to the CLI exit codes: 2 for bad input or config, 3 for numerical failures."""
    try:
        yield
    except ArithmeticError as e:
        click.secho(f"Error: {action} failed numerically: {e}", fg="red", err=True)
        logging.error(f"Numerical failure during {action}: {e}")
        sys.exit(EXIT_NUMERICAL_ERROR)
    except (ValueError, IndexError, ValidationError, OSError) as e:
        click.secho(f"Error: invalid input for {action}: {e}", fg="red", err=True)
        logging.error(f"Configuration error during {action}: {e}")
        sys.exit(EXIT_CONFIG_ERROR)
