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
from ocs_cli.core.experiments import ExperimentConfig, run_recovery_experiment
from ocs_cli.utils.utils import command_errors, print_table, status, write_output


@click.command(
    help="""Coefficient recovery from exact samples at the pattern nodes.

Every trial draws N Zernike coefficients uniformly in [-1, 1], samples the
expansion at the nodes, interpolates and records the RMS coefficient error.
The mean and standard deviation over the trials are reported per order,
together with the worst-recovered coefficient and its aberration name.
--coefficients writes the mean absolute error of every coefficient.

Usage examples:
  ocs recover --orders 30 --trials 100
  ocs recover --orders 10,20,30 --trials 20 --seed 7 --format json
  ocs recover --orders 10 --coefficients coefficients.csv
""",
)
@config_option
@orders_option("30")
@pattern_option()
@click.option("--trials", type=int, default=100, show_default=True, help="Number of random coefficient vectors per order.")
@click.option(
    "--coefficients",
    "coefficients_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="CSV file for the per-coefficient errors (order, j, n, m, label, mean_abs_error).",
)
@seed_option
@n_jobs_option
@output_options()
def recover(config_file, orders_text, pattern, trials, coefficients_path, seed, n_jobs, out_path, output_format):
    """Coefficient recovery from exact samples."""
    with command_errors("recover"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="recover",
            orders=resolve_orders(orders_text),
            patterns=[pattern],
            trials=trials,
            seed=settings.seed if seed is None else seed,
            output=out_path,
            format=output_format,
        )
        status(f"Recovering random expansions for orders {config.orders} ({config.trials} trials each)...")
        results = [
            run_recovery_experiment(
                n, config.trials, config.seed, pattern, n_jobs=n_jobs or settings.n_jobs, progress=settings.progress
            )
            for n in config.orders
        ]
        table = pd.DataFrame([stats.to_dict() for stats in results])
        print_table(table, "Coefficient recovery (RMS error)")
        write_output(table, config.output, config.format)

        if coefficients_path:
            frame = pd.concat([stats.coefficient_frame() for stats in results], ignore_index=True)
            write_output(frame, coefficients_path, "csv")
