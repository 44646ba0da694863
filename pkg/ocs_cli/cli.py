import os
import logging

import rich_click as click
from dotenv import load_dotenv

# Load environment variables (OCS_*) from .env file
load_dotenv()

# Configure logging
logging.basicConfig(
    level=os.environ.get("OCS_LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)

from ocs_cli.commands.init import init  # noqa: E402
from ocs_cli.commands.clean import clean  # noqa: E402
from ocs_cli.commands.nodes import nodes  # noqa: E402
from ocs_cli.commands.cond_table import cond_table  # noqa: E402
from ocs_cli.commands.recover import recover  # noqa: E402
from ocs_cli.commands.rotate_sweep import rotate_sweep  # noqa: E402
from ocs_cli.commands.perturb_sweep import perturb_sweep  # noqa: E402
from ocs_cli.commands.slope_cond import slope_cond  # noqa: E402
from ocs_cli.commands.lebesgue_curve import lebesgue_curve  # noqa: E402
from ocs_cli.commands.optimize import optimize  # noqa: E402
from ocs_cli.commands.asymptotics import asymptotics  # noqa: E402
from ocs_cli.commands.radii_compare import radii_compare  # noqa: E402
from ocs_cli.commands.completion import completion  # noqa: E402


@click.group()
def cli():
    """Optimal concentric sampling on the unit disk: Zernike collocation, conditioning and Lebesgue constants."""
    pass


# Register the commands
cli.add_command(init)
cli.add_command(clean)

cli.add_command(nodes)
cli.add_command(cond_table)
cli.add_command(recover)
cli.add_command(rotate_sweep)
cli.add_command(perturb_sweep)
cli.add_command(slope_cond)
cli.add_command(lebesgue_curve)
cli.add_command(optimize)
cli.add_command(asymptotics)
cli.add_command(radii_compare)
cli.add_command(completion)

if __name__ == "__main__":
    cli()
