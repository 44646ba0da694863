import logging

import click

from ocs_cli.commands.options import config_option, output_options, pattern_option, resolve_settings
from ocs_cli.core.collocation import build_elevation_matrix, build_slope_matrix, condition_numbers
from ocs_cli.core.patterns import (
    CARNICER_DEFAULT_EXPONENT,
    drop_innermost,
    nodes_to_frame,
    pattern_nodes,
    pattern_rings,
    pattern_to_frame,
)
from ocs_cli.utils.utils import command_errors, status, write_output


@click.command(
    help="""Generate the sampling nodes of a pattern on the unit disk.

Columns are index, rho, theta (radians), x, y; nodes are listed from the
outermost ring inwards with ascending angles.

--export-matrix writes the collocation matrix of the nodes (elevation mode, or
slope mode with --drop-innermost) as CSV with one Z<j> column per basis
function, and --report the JSON condition report of that matrix. --rings
writes ring, radius, count and phase of a ring-based pattern.

Usage examples:
  ocs nodes --order 10
  ocs nodes --order 12 --pattern carnicer --exponent 1.5 --format json
  ocs nodes --order 20 --drop-innermost --out nodes_slope.csv
  ocs nodes --order 10 --export-matrix A.csv --report A.json --rings rings.csv
"""
)
@config_option
@click.option("--order", "-n", type=int, required=True, help="Maximal radial order n; the pattern has N = (n+1)(n+2)/2 nodes.")
@pattern_option()
@click.option(
    "--exponent",
    type=float,
    default=CARNICER_DEFAULT_EXPONENT,
    show_default=True,
    help="Exponent a in r_j = 1 - (2(j-1)/n)^a, used by the carnicer pattern only. Must lie in (1, 2).",
)
@click.option("--drop-innermost", "drop", is_flag=True, help="Remove the innermost node (the N - 1 node layout used for slope sampling).")
@click.option("--export-matrix", "matrix_path", type=click.Path(dir_okay=False), default=None, help="CSV file for the collocation matrix.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None, help="JSON file for the condition report.")
@click.option("--rings", "rings_path", type=click.Path(dir_okay=False), default=None, help="CSV file for the ring layout (ocs, carnicer).")
@output_options()
def nodes(
    config_file: str,
    order: int,
    pattern: str,
    exponent: float,
    drop: bool,
    matrix_path,
    report_path,
    rings_path,
    out_path,
    output_format: str,
):
    """Generate the sampling nodes of a pattern."""
    with command_errors("nodes"):
        settings = resolve_settings(config_file)
        status(f"Generating {pattern} nodes for n={order}...")
        node_set = pattern_nodes(pattern, order, exponent)
        if drop:
            node_set = drop_innermost(node_set)
        logging.info(f"{len(node_set)} nodes generated ({pattern}, n={order})")
        write_output(nodes_to_frame(node_set), out_path, output_format)

        if rings_path:
            write_output(pattern_to_frame(pattern_rings(pattern, order, exponent)), rings_path, "csv")

        if matrix_path or report_path:
            build = build_slope_matrix if drop else build_elevation_matrix
            matrix = build(node_set, order)
            if matrix_path:
                write_output(matrix.to_frame(), matrix_path, "csv")
            if report_path:
                report = condition_numbers(matrix, settings.kappa_inf_max_dim)
                write_output(report.to_dict(), report_path, "json")
