"""Command modules for the weightlin CLI.

Each computation command is a plain function registered on the root app;
configuration lives in its own typer group.
"""

from .analyze import analyze_command
from .config import app as config_app
from .fields import bracket_command, pullback_command
from .flows import exp_command, flow_command
from .linearize import linearize_command

__all__ = [
    "config_app",
    "analyze_command",
    "linearize_command",
    "flow_command",
    "exp_command",
    "bracket_command",
    "pullback_command",
]
