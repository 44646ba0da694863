import logging
from typing import List, Optional

import click

from ocs_cli.core.patterns import PATTERN_NAMES
from ocs_cli.core.settings import Settings, load_settings
from ocs_cli.utils.utils import DEFAULT_CONFIG_FILE, OUTPUT_FORMATS, parse_int_list


def config_option(f):
    return click.option(
        "--config",
        "-c",
        "config_file",
        default=DEFAULT_CONFIG_FILE,
        show_default=True,
        help="Path to a YAML or JSON configuration file. A missing file means defaults plus OCS_* environment variables.",
    )(f)


def output_options(default_format: str = "csv"):
    def decorator(f):
        f = click.option(
            "--format",
            "output_format",
            type=click.Choice(OUTPUT_FORMATS),
            default=default_format,
            show_default=True,
            help="Serialization of the result: CSV table or JSON document.",
        )(f)
        return click.option(
            "--out",
            "out_path",
            type=click.Path(dir_okay=False),
            default=None,
            help="Write the result to this file (recorded in .artifacts.log). Prints to stdout when omitted.",
        )(f)

    return decorator


def seed_option(f):
    return click.option(
        "--seed", type=int, default=None, help="Seed for every random draw of the run. Defaults to the configured seed (42)."
    )(f)


def n_jobs_option(f):
    return click.option(
        "--n-jobs", type=int, default=None, help="Parallel workers for independent orders or trials (joblib). Defaults to the configured value."
    )(f)


def pattern_option(multiple: bool = False, default="ocs"):
    return click.option(
        "--pattern",
        "patterns" if multiple else "pattern",
        type=click.Choice(PATTERN_NAMES),
        multiple=multiple,
        default=default,
        show_default=True,
        help="Node pattern: ocs (fitted-radii Bos array), spiral (Vogel stand-in baseline) or carnicer (power-law radii)."
        + (" Repeat the option for several patterns." if multiple else ""),
    )


def orders_option(default: str):
    return click.option(
        "--orders",
        "orders_text",
        default=default,
        show_default=True,
        help="Maximal radial orders, as a comma separated list and/or ranges, e.g. '10,15,20' or '5-25'.",
    )


def resolve_settings(config_file: Optional[str]) -> Settings:
    settings = load_settings(config_file)
    logging.getLogger().setLevel(settings.log_level.upper())
    return settings


def resolve_orders(orders_text: str) -> List[int]:
    try:
        return parse_int_list(orders_text)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--orders")
