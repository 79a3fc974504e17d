"""Global context management for the CLI.

Provides a shared context object that holds the global options and the lazily
loaded settings across all CLI commands.
"""

from dataclasses import dataclass, field

from .models.settings import Settings

__all__ = ["Context", "get_context"]


@dataclass
class Context:
    """CLI context passed to all commands."""

    verbose: bool = False
    profile: str | None = None
    _settings: Settings | None = field(default=None, repr=False)

    @property
    def settings(self) -> Settings:
        """Get the current settings, loading from file/env if needed."""
        if self._settings is None:
            from .config import load_settings

            self._settings = load_settings(self.profile)
        return self._settings

    @settings.setter
    def settings(self, value: Settings | None) -> None:
        self._settings = value

    def reset(self) -> None:
        """Forget cached settings (after a profile switch or a config write)."""
        self._settings = None


_ctx = Context()


def get_context() -> Context:
    return _ctx
