#!/usr/bin/env python
"""
Local CI runner for ocs-sampling.

Installs the package, lints, checks formatting and runs the fast test
suite. Pass --slow to also run the long acceptance runs in tests/integration.
"""

import sys
import subprocess
from pathlib import Path

PACKAGE = "ocs_cli"


class Colors:
    """ANSI color codes for terminal output."""

    RED = "\033[0;31m"
    GREEN = "\033[0;32m"
    YELLOW = "\033[1;33m"
    NC = "\033[0m"  # No Color


def print_header(message):
    print(f"\n{'=' * 50}")
    print(f"{message}")
    print(f"{'=' * 50}\n")


def print_status(returncode, message):
    if returncode == 0:
        print(f"{Colors.GREEN}{message} passed{Colors.NC}\n")
        return True
    print(f"{Colors.RED}{message} failed{Colors.NC}\n")
    return False


def run_command(cmd, check_name):
    """Run a command and check its return code."""
    print(f"Running: {' '.join(cmd)}")
    try:
        result = subprocess.run(cmd, check=False)
        return print_status(result.returncode, check_name)
    except Exception as e:
        print(f"{Colors.RED}Error running {check_name}: {e}{Colors.NC}\n")
        return False


def main(argv):
    run_slow = "--slow" in argv
    print_header("Local CI Test Suite")

    if not Path("pyproject.toml").exists():
        print(f"{Colors.RED}Error: pyproject.toml not found. Run this from the project root.{Colors.NC}")
        sys.exit(1)

    all_passed = True

    print_header("Installing Dependencies")
    if not run_command([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"], "Requirements installation"):
        print(f"{Colors.YELLOW}Warning: Some dependencies may not be installed{Colors.NC}")
    if not run_command([sys.executable, "-m", "pip", "install", "-e", "."], "Package installation"):
        print(f"{Colors.YELLOW}Warning: Package may not be installed{Colors.NC}")
    run_command([sys.executable, "-m", "pip", "install", "flake8", "black"], "Lint tools installation")

    print_header("Linting")
    if not run_command(
        ["flake8", PACKAGE, "--count", "--select=E9,F63,F7,F82", "--show-source", "--statistics"],
        "flake8 linting (critical errors)",
    ):
        all_passed = False
    run_command(
        ["flake8", PACKAGE, "--count", "--exit-zero", "--max-complexity=12", "--max-line-length=127", "--statistics"],
        "flake8 linting (style checks)",
    )

    print_header("Code Formatting Checks")
    if not run_command(["black", "--check", PACKAGE, "tests", "--line-length=127"], "Black formatting"):
        print(f"{Colors.YELLOW}Tip: Run 'black {PACKAGE} tests --line-length=127' to fix formatting.{Colors.NC}\n")
        all_passed = False

    print_header("Running Unit Tests")
    if not run_command(
        [sys.executable, "-m", "pytest", "tests/", "-m", "not slow", f"--cov={PACKAGE}", "--cov-report=xml"],
        "Unit tests with coverage",
    ):
        all_passed = False

    if run_slow:
        print_header("Running Acceptance Tests")
        if not run_command([sys.executable, "-m", "pytest", "tests/integration", "-m", "slow"], "Acceptance tests"):
            all_passed = False

    print_header("Test Summary")
    if all_passed:
        print(f"{Colors.GREEN}All CI checks passed!{Colors.NC}\n")
        sys.exit(0)
    print(f"{Colors.RED}Some checks failed. Please fix the issues above.{Colors.NC}\n")
    sys.exit(1)


if __name__ == "__main__":
    main(sys.argv[1:])
