import click

from ocs_cli.commands.options import (
    config_option,
    n_jobs_option,
    orders_option,
    output_options,
    pattern_option,
    resolve_orders,
    resolve_settings,
)
from ocs_cli.core.experiments import ExperimentConfig, run_slope_condition_curve
from ocs_cli.core.patterns import CARNICER_DEFAULT_EXPONENT
from ocs_cli.utils.utils import command_errors, print_table, status, write_output


@click.command(
    "slope-cond",
    help="""Condition number of the slope (gradient) collocation matrix.

The innermost node is removed so N - 1 nodes give a 2(N-1) x (N-1) system
over the non-piston polynomials.

Usage examples:
  ocs slope-cond
  ocs slope-cond --orders 25-30 --pattern ocs --pattern spiral --format json
""",
)
@config_option
@orders_option("1-30")
@pattern_option(multiple=True, default=("ocs", "spiral"))
@click.option("--exponent", type=float, default=CARNICER_DEFAULT_EXPONENT, show_default=True, help="Exponent of the carnicer radii.")
@n_jobs_option
@output_options()
def slope_cond(config_file, orders_text, patterns, exponent, n_jobs, out_path, output_format):
    """Slope-matrix condition numbers."""
    with command_errors("slope-cond"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="slope-cond",
            orders=resolve_orders(orders_text),
            patterns=list(patterns),
            output=out_path,
            format=output_format,
        )
        status(f"Computing slope-matrix condition numbers for orders {config.orders[0]}..{config.orders[-1]}...")
        table = run_slope_condition_curve(
            config.orders, config.patterns, exponent, n_jobs=n_jobs or settings.n_jobs, progress=settings.progress
        )
        print_table(table[["n", "pattern", "rows", "cols", "kappa2"]], "Slope-matrix condition numbers")
        write_output(table, config.output, config.format)
