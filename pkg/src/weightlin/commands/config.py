"""Configuration commands.

Show and edit the per-profile job defaults stored in the config file.
"""

from typing import Annotated

import typer
from rich.table import Table

from ..algebra.base import WeightlinError
from ..config import get_config_path, save_setting
from ..context import get_context
from ..logging import console
from ..models.settings import SETTING_KEYS
from ..output import handle_error, output_json

app = typer.Typer(name="config", help="Job defaults per profile.")


@app.command("show")
def show(
    json_output: Annotated[bool, typer.Option("--json", help="Output as JSON.")] = False,
) -> None:
    """Show the effective settings of the active profile."""
    ctx = get_context()
    try:
        settings = ctx.settings
    except WeightlinError as e:
        raise typer.Exit(handle_error(e, json_output, "config")) from None

    if json_output:
        output_json({"profile": settings.profile, "path": str(get_config_path()), "settings": settings.to_dict()})
        return

    console.print(f"[bold]Profile:[/bold] {settings.profile}")
    console.print(f"[bold]Config file:[/bold] {get_config_path()}")
    table = Table(show_header=True, header_style="bold")
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="green")
    for key, value in settings.to_dict().items():
        table.add_row(key, "auto" if value is None else str(value))
    console.print(table)


@app.command("set")
def set_value(
    key: Annotated[str, typer.Argument(help=f"Setting name: {', '.join(SETTING_KEYS)}.")],
    value: Annotated[str, typer.Argument(help="New value ('auto' clears t_cap).")],
) -> None:
    """Store a default in the active profile."""
    ctx = get_context()
    try:
        settings = save_setting(key.replace("-", "_"), value, ctx.profile)
    except WeightlinError as e:
        raise typer.Exit(handle_error(e, False, "config")) from None

    ctx.reset()
    console.print(f"[green]Saved {key} for profile '{settings.profile}'[/green]")
