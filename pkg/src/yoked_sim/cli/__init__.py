"""Command-line interface for the yoked surface toolkit."""

from yoked_sim.cli.main import build_parser, main

__all__ = ["build_parser", "main"]
