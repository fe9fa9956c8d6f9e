"""Command-line front end."""

from cli.commands import cli, main, run

__all__ = ["cli", "main", "run"]
