import click
import pandas as pd

from ocs_cli.commands.options import config_option, n_jobs_option, orders_option, output_options, resolve_orders, resolve_settings
from ocs_cli.core.experiments import ExperimentConfig, run_rotation_sweep
from ocs_cli.utils.utils import command_errors, status, write_output


@click.command(
    "rotate-sweep",
    help="""Rotate one OCS ring at a time and record the largest change of kappa2.

For every ring the phase sweeps the grid 2*pi/count * a/A, a = 0..A-1, with
all other rings fixed. The outermost ring leaves kappa2 unchanged.

Usage examples:
  ocs rotate-sweep
  ocs rotate-sweep --orders 25 --alphas 64 --out rotation_25.csv
""",
)
@config_option
@orders_option("25,30")
@click.option("--alphas", type=int, default=32, show_default=True, help="Number of phase values per ring.")
@n_jobs_option
@output_options()
def rotate_sweep(config_file, orders_text, alphas, n_jobs, out_path, output_format):
    """Ring rotation sweep."""
    with command_errors("rotate-sweep"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="rotate-sweep", orders=resolve_orders(orders_text), output=out_path, format=output_format
        )
        status(f"Sweeping ring rotations for orders {config.orders}...")
        table = pd.concat(
            [run_rotation_sweep(n, alphas, n_jobs=n_jobs or settings.n_jobs, progress=settings.progress) for n in config.orders],
            ignore_index=True,
        )
        write_output(table, config.output, config.format)
