import click
import pandas as pd

from ocs_cli.commands.options import config_option, output_options, resolve_settings, seed_option
from ocs_cli.core.experiments import ExperimentConfig
from ocs_cli.core.optimizer import MIN_BUDGET, optimize_radii
from ocs_cli.utils.utils import command_errors, status, write_output


@click.command(
    help="""Optimize the ring radii of the order-n Bos array for minimal kappa2.

Starts from the fitted radii, anneals, then refines by coordinate search.
The result (radii, kappa2, starting kappa2, evaluation count) is written as
JSON; --trace writes the best kappa2 after each improvement as CSV.

Usage examples:
  ocs optimize --order 10
  ocs optimize --order 20 --seed 3 --budget 5000 --trace trace_20.csv --out radii_20.json
""",
)
@config_option
@click.option("--order", "-n", type=int, required=True, help="Maximal radial order n (1..30 is the fitted range).")
@seed_option
@click.option("--budget", type=click.IntRange(min=MIN_BUDGET), default=2000, show_default=True, help="Maximum number of kappa2 evaluations.")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None, help="CSV file for (evaluation, best_kappa2).")
@output_options(default_format="json")
def optimize(config_file, order, seed, budget, trace_path, out_path, output_format):
    """Optimize the ring radii."""
    with command_errors("optimize"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="optimize",
            orders=[order],
            seed=settings.seed if seed is None else seed,
            output=out_path,
            format=output_format,
        )
        status(f"Optimizing radii for n={order} (seed={config.seed}, budget={budget})...")
        result = optimize_radii(order, config.seed, budget, settings.optimizer, n_jobs=settings.n_jobs)
        status(f"kappa2: {result.seed_kappa2:.6g} (fitted radii) -> {result.kappa2:.6g} (optimized)", fg="cyan")
        if config.format == "csv":
            row = {key: value for key, value in result.to_dict().items() if key not in ("radii", "seed_radii")}
            row.update({f"r{i + 1}": r for i, r in enumerate(result.radii)})
            payload = pd.DataFrame([row])
        else:
            payload = result.to_dict()
        write_output(payload, config.output, config.format)
        if trace_path:
            write_output(result.trace_frame(), trace_path, "csv")
