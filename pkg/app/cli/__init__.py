# CLI package initialization
"""Command line surface: subcommand handlers and exporters."""

from app.cli.commands import HANDLERS, CommandContext

__all__ = ["HANDLERS", "CommandContext"]
