#!/usr/bin/env python3
"""Management script for scaffold-gms development tasks."""

import shutil
import subprocess
from pathlib import Path

import click
from rich.console import Console

console = Console()
ROOT = Path(__file__).resolve().parent.parent


def run(*args: str) -> int:
    return subprocess.run(["poetry", "run", *args], cwd=ROOT).returncode


@click.group()
def cli():
    """scaffold-gms development tools."""


@cli.command()
def setup():
    """Set up the development environment."""
    console.print("[blue]Setting up development environment...[/blue]")
    subprocess.run(["poetry", "install"], cwd=ROOT)
    run("pre-commit", "install")
    console.print("[green]Setup complete![/green]")


@cli.command()
@click.option("--all", "run_all", is_flag=True, help="Include the slow exhaustive grids")
@click.option("--cov", is_flag=True, help="Collect coverage for scaffold_gms")
def test(run_all: bool, cov: bool):
    """Run tests with pytest."""
    console.print("[blue]Running tests...[/blue]")
    args = ["pytest"]
    if not run_all:
        args += ["-m", "not slow"]
    if cov:
        args += ["--cov=scaffold_gms", "--cov-report=term-missing"]
    raise SystemExit(run(*args))


@cli.command()
def acceptance():
    """Run the acceptance grids and write acceptance_results.json."""
    console.print("[blue]Running acceptance criteria...[/blue]")
    raise SystemExit(run("python", "scripts/acceptance_test.py"))


@cli.command("format")
def format_code():
    """Format code with black and isort."""
    console.print("[blue]Formatting code...[/blue]")
    run("black", ".")
    run("isort", ".")
    console.print("[green]Formatting complete![/green]")


@cli.command()
def lint():
    """Run linting checks."""
    console.print("[blue]Running linting checks...[/blue]")
    run("flake8", "scaffold_gms", "tests")
    run("mypy", "scaffold_gms")


@cli.command()
def clean():
    """Clean up generated files."""
    console.print("[blue]Cleaning up...[/blue]")
    for pattern in ("**/__pycache__", "**/*.pyc", ".pytest_cache", ".hypothesis", ".coverage", "htmlcov",
                    "dist", "build", "*.egg-info", "acceptance_results.json"):
        for path in ROOT.glob(pattern):
            if path.is_dir():
                shutil.rmtree(path, ignore_errors=True)
            else:
                path.unlink(missing_ok=True)
    console.print("[green]Cleanup complete![/green]")


if __name__ == "__main__":
    cli()
