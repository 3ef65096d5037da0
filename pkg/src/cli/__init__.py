from src.cli.app import build_parser, main, run
from src.cli.commands import get_command, register_command

__all__ = ["build_parser", "main", "run", "get_command", "register_command"]
