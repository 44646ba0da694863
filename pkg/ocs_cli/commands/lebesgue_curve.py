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
from ocs_cli.core.experiments import ExperimentConfig, run_lebesgue_curve
from ocs_cli.core.lebesgue import MeshSpec, lagrange_basis, lebesgue_mesh_values
from ocs_cli.core.patterns import pattern_nodes
from ocs_cli.utils.utils import command_errors, print_table, status, write_output


@click.command(
    "lebesgue-curve",
    help="""Lebesgue constants of a pattern and their linear fit against N.

Lambda is the maximum over a disk mesh of sum_i |l_i|, with the Lagrange
polynomials l_i obtained by linear solves. The mesh has ceil(c*n) lines
(c = --density); the maximum is refined around the discrete maximizer.
CSV output holds the per-order table; JSON output also carries the fit.

Usage examples:
  ocs lebesgue-curve --orders 5-25
  ocs lebesgue-curve --orders 0,5,10 --density 16 --no-refine --format json
  ocs lebesgue-curve --orders 12 --mesh-dump lebesgue_mesh_12.csv
""",
)
@config_option
@orders_option("5-25")
@pattern_option()
@click.option("--density", type=float, default=None, help="Mesh density constant c (>= 4). Defaults to the configured value (8).")
@click.option("--mesh-kind", type=click.Choice(["polar", "cartesian"]), default=None, help="Polar (Chebyshev-clustered radii) or Cartesian grid.")
@click.option("--refine/--no-refine", default=None, help="Refine around the discrete maximizer. Enabled by default.")
@click.option(
    "--mesh-dump",
    type=click.Path(dir_okay=False),
    default=None,
    help="Also write (x, y, lebesgue) over the mesh of the highest requested order as CSV, for contour plots.",
)
@n_jobs_option
@output_options()
def lebesgue_curve(config_file, orders_text, pattern, density, mesh_kind, refine, mesh_dump, n_jobs, out_path, output_format):
    """Lebesgue constants versus order."""
    with command_errors("lebesgue-curve"):
        settings = resolve_settings(config_file)
        config = ExperimentConfig(
            experiment="lebesgue-curve",
            orders=resolve_orders(orders_text),
            patterns=[pattern],
            output=out_path,
            format=output_format,
        )
        mesh = MeshSpec(
            kind=mesh_kind or settings.mesh.kind,
            density=settings.mesh.density if density is None else density,
            refine=settings.mesh.refine if refine is None else refine,
            refine_factor=settings.mesh.refine_factor,
        )
        status(f"Estimating Lebesgue constants for orders {config.orders} on a {mesh.kind} mesh (c={mesh.density:g})...")
        table, fit = run_lebesgue_curve(config.orders, mesh, pattern, n_jobs=n_jobs or settings.n_jobs, progress=settings.progress)
        print_table(table[["n", "N", "lambda", "mesh_size"]], "Lebesgue constants")
        status(f"Linear fit: Lambda = {fit['slope']:.4g} * N + {fit['intercept']:.4g}, R^2 = {fit['r2']:.4f}", fg="cyan")

        if config.format == "json":
            write_output({"table": table, "fit": fit}, config.output, "json")
        else:
            write_output(table, config.output, "csv")

        if mesh_dump:
            n = max(config.orders)
            if n < 1:
                raise ValueError("A mesh dump needs an order >= 1.")
            basis = lagrange_basis(pattern_nodes(pattern, n), n)
            write_output(lebesgue_mesh_values(basis, mesh), mesh_dump, "csv")
