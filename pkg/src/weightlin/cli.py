import sys
from typing import Annotated

import typer

from . import __version__
from .commands import (
    analyze_command,
    bracket_command,
    config_app,
    exp_command,
    flow_command,
    linearize_command,
    pullback_command,
)
from .constants import APP_NAME, EXIT_UNEXPECTED
from .context import get_context
from .logging import error_console, setup_logging

app = typer.Typer(
    name=APP_NAME,
    help="Weighted formal linearization of polynomial vector fields.",
    no_args_is_help=True,
    rich_markup_mode=None,
)

# Register command groups
app.add_typer(config_app, name="config")

# Register standalone commands
app.command("analyze")(analyze_command)
app.command("linearize")(linearize_command)
app.command("flow")(flow_command)
app.command("exp")(exp_command)
app.command("bracket")(bracket_command)
app.command("pullback")(pullback_command)


def version_callback(value: bool) -> None:
    if value:
        print(f"{APP_NAME} {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Enable verbose output.", is_eager=True)] = False,
    profile: Annotated[str | None, typer.Option("--profile", "-p", help="Profile name to use.")] = None,
    version: Annotated[
        bool | None,
        typer.Option("--version", "-V", help="Show version and exit.", callback=version_callback, is_eager=True),
    ] = None,
) -> None:
    """weightlin - weighted linearization of formal vector fields."""
    setup_logging(verbose=verbose)
    ctx = get_context()
    ctx.verbose = verbose
    ctx.profile = profile
    ctx.reset()


def cli() -> None:
    try:
        app()
    except Exception as e:
        error_console.print(f"[red]Error: {e}[/red]")
        if get_context().verbose:
            error_console.print_exception()
        sys.exit(EXIT_UNEXPECTED)
