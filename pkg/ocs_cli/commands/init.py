import os
import sys
import logging
import time

import click

from ocs_cli.utils.utils import DEFAULT_CONFIG, EXIT_CONFIG_ERROR, log_artifact, write_config


@click.command(
    help="""Initialize a configuration file (YAML or JSON) with the default settings.

The file holds the seed, worker count, output directory, log level, the
radii-optimizer schedule and the Lebesgue mesh parameters. Environment
variables OCS_* (e.g. OCS_SEED, OCS_MESH__DENSITY) provide values for keys
the file leaves out.

Usage examples:
  ocs init
  ocs init --format json
  ocs init --output experiments/config.yaml --force
"""
)
@click.option(
    "--format",
    default="yaml",
    type=click.Choice(["yaml", "json"]),
    help="Specify the format of the configuration file to be created (yaml or json). Default is yaml.",
)
@click.option("--output", "-o", "config_filename", default=None, help="Target file. Defaults to config.yaml or config.json.")
@click.option("--force", is_flag=True, help="Overwrite an existing configuration file.")
def init(format: str, config_filename: str, force: bool):
    """Initialize a configuration file."""
    click.secho("Initializing configuration...", fg="green")
    start_time = time.time()
    config_filename = config_filename or f"config.{format}"

    if os.path.exists(config_filename) and not force:
        click.secho(f"Error: {config_filename} already exists. Use --force to overwrite it.", fg="red")
        logging.error(f"Refusing to overwrite {config_filename}")
        sys.exit(EXIT_CONFIG_ERROR)

    try:
        directory = os.path.dirname(config_filename)
        if directory:
            os.makedirs(directory, exist_ok=True)
        write_config(DEFAULT_CONFIG, format, config_filename)
        log_artifact(config_filename)
    except (OSError, ValueError) as e:
        click.secho(f"Error: could not write {config_filename}: {e}", fg="red")
        sys.exit(EXIT_CONFIG_ERROR)

    click.secho(f"Configuration file created at: {config_filename}", fg="green")
    logging.info("Configuration file created! (Time taken: %.2fs)", time.time() - start_time)
    click.secho("\nAvailable commands:", fg="blue")
    click.secho("   ocs nodes          - Generate sampling nodes", fg="white")
    click.secho("   ocs cond-table     - Condition numbers per order and pattern", fg="white")
    click.secho("   ocs recover        - Coefficient recovery experiment", fg="white")
    click.secho("   ocs optimize       - Optimize ring radii", fg="white")
    click.secho("   ocs lebesgue-curve - Lebesgue constants versus order", fg="white")
