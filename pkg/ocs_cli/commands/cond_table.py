import click

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
from ocs_cli.core.experiments import DEFAULT_TABLE_BUDGET, RADII_SOURCES, ExperimentConfig, run_condition_table
from ocs_cli.core.patterns import CARNICER_DEFAULT_EXPONENT
from ocs_cli.utils.utils import command_errors, print_table, status, write_output


@click.command(
    "cond-table",
    help="""Condition numbers of the elevation collocation matrix per order and pattern.

Each row holds n, N, pattern, a stand_in flag (spiral rows are the documented
Vogel-spiral stand-in), the OCS radii source, kappa2, kappa_inf (square
matrices up to N = 496) and the extreme singular values. Singular
configurations are reported as +inf.

--radii optimized replaces the fitted OCS radii by the radii found with the
annealing optimizer (one run per order with --seed and --budget). The cubic
radii formula is a smooth fit through optimal radii, so the fitted radii give
larger kappa2 at low orders.

Usage examples:
  ocs cond-table
  ocs cond-table --orders 10,15,20 --pattern ocs --pattern spiral
  ocs cond-table --orders 10,15 --radii optimized --budget 3000
  ocs cond-table --orders 5-30 --pattern ocs --pattern carnicer --out table.csv
""",
)
@config_option
@orders_option("10,15,20,22,27,30")
@pattern_option(multiple=True, default=("ocs",))
@click.option("--exponent", type=float, default=CARNICER_DEFAULT_EXPONENT, show_default=True, help="Exponent of the carnicer radii.")
@click.option(
    "--radii",
    type=click.Choice(RADII_SOURCES),
    default="fitted",
    show_default=True,
    help="Radii of the ocs pattern: the fitted cubic formula or per-order optimized radii.",
)
@click.option(
    "--budget",
    type=int,
    default=DEFAULT_TABLE_BUDGET,
    show_default=True,
    help="Objective evaluations per order when --radii optimized.",
)
@seed_option
@n_jobs_option
@output_options()
def cond_table(config_file, orders_text, patterns, exponent, radii, budget, seed, n_jobs, out_path, output_format):
    """Condition numbers of the elevation collocation matrix."""
    with command_errors("cond-table"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="cond-table",
            orders=resolve_orders(orders_text),
            patterns=list(patterns),
            seed=settings.seed if seed is None else seed,
            output=out_path,
            format=output_format,
        )
        status(f"Computing condition numbers for orders {config.orders} ({', '.join(config.patterns)}, {radii} radii)...")
        table = run_condition_table(
            config.orders,
            config.patterns,
            exponent=exponent,
            kappa_inf_max_dim=settings.kappa_inf_max_dim,
            radii=radii,
            seed=config.seed,
            budget=budget,
            settings=settings.optimizer,
            n_jobs=n_jobs or settings.n_jobs,
            progress=settings.progress,
        )
        print_table(table[["n", "N", "pattern", "radii", "kappa2", "kappa_inf"]], "Elevation-matrix condition numbers")
        write_output(table, config.output, config.format)
