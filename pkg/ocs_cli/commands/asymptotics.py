import click
import pandas as pd

from ocs_cli.commands.options import config_option, output_options, resolve_settings
from ocs_cli.core.asymptotics import VARIANTS, asymptotics_report
from ocs_cli.utils.utils import command_errors, status, write_output


@click.command(
    help="""Evaluate the logarithmic-energy functional L(G) of a radial node distribution.

Variants: fitted (G(x) = p(sin(pi x/2)) with p the squared radii cubic),
g1 (sin^2(pi x/2)) and g2 (1 - (x^2 - 1)^2). Asymptotically optimal
distributions reach -2/3; the gap to that value is reported alongside L.

Usage examples:
  ocs asymptotics
  ocs asymptotics --variant g1
  ocs asymptotics --variant all --out asymptotics.json
""",
)
@config_option
@click.option(
    "--variant",
    type=click.Choice(VARIANTS + ("all",), case_sensitive=False),
    default="fitted",
    show_default=True,
    help="Radial distribution to evaluate, or 'all' for the three of them.",
)
@output_options(default_format="json")
def asymptotics(config_file, variant, out_path, output_format):
    """Evaluate L(G)."""
    with command_errors("asymptotics"):
        resolve_settings(config_file)
        variants = VARIANTS if variant.lower() == "all" else (variant.lower(),)
        status(f"Integrating L(G) for {', '.join(variants)}...")
        reports = [asymptotics_report(v) for v in variants]
        payload = reports[0] if len(reports) == 1 else reports
        if output_format == "csv":
            payload = pd.DataFrame(reports)
        write_output(payload, out_path, output_format)
