import click
import pandas as pd

from ocs_cli.commands.options import (
    config_option,
    n_jobs_option,
    orders_option,
    output_options,
    pattern_option,
    resolve_orders,
    resolve_settings,
    seed_option,
)
from ocs_cli.core.experiments import DEFAULT_MAGNITUDES, ExperimentConfig, run_perturbation_sweep
from ocs_cli.utils.utils import command_errors, parse_float_list, status, write_output


@click.command(
    "perturb-sweep",
    help="""Condition number under random perturbations of ring radii and of single nodes.

Mode 'radii' scales every ring radius by (1 + u*magnitude), u ~ U[-1, 1];
mode 'points' moves each node uniformly within a disk of radius magnitude.
Rows give the maximum and mean kappa2 over the trials per mode and magnitude.

Usage examples:
  ocs perturb-sweep
  ocs perturb-sweep --orders 20 --magnitudes 0,1e-4,1e-3 --trials 50 --seed 3
""",
)
@config_option
@orders_option("20,25,30")
@pattern_option()
@click.option(
    "--magnitudes",
    default=",".join(f"{m:g}" for m in DEFAULT_MAGNITUDES),
    show_default=True,
    help="Comma separated, ascending, non-negative perturbation magnitudes.",
)
@click.option("--trials", type=int, default=20, show_default=True, help="Random perturbations per mode and magnitude.")
@seed_option
@n_jobs_option
@output_options()
def perturb_sweep(config_file, orders_text, pattern, magnitudes, trials, seed, n_jobs, out_path, output_format):
    """Perturbation sweep."""
    with command_errors("perturb-sweep"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="perturb-sweep",
            orders=resolve_orders(orders_text),
            patterns=[pattern],
            trials=trials,
            seed=settings.seed if seed is None else seed,
            output=out_path,
            format=output_format,
        )
        grid = parse_float_list(magnitudes)
        status(f"Perturbing {pattern} nodes for orders {config.orders} over magnitudes {grid}...")
        table = pd.concat(
            [
                run_perturbation_sweep(
                    n, grid, config.trials, config.seed, pattern, n_jobs=n_jobs or settings.n_jobs, progress=settings.progress
                )
                for n in config.orders
            ],
            ignore_index=True,
        )
        write_output(table, config.output, config.format)
