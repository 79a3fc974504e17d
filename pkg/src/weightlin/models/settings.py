"""Settings model.

Holds the job defaults resolved from a configuration profile and the environment.
"""

from dataclasses import asdict, dataclass
from typing import Any

from ..constants import DEFAULT_FORMAT, DEFAULT_METHOD, DEFAULT_ORDER, DEFAULT_THREADS

__all__ = ["Settings", "SETTING_KEYS"]

SETTING_KEYS = ("order", "t_cap", "method", "format", "threads")


@dataclass
class Settings:
    """Job defaults for one profile."""

    profile: str = "default"
    order: int = DEFAULT_ORDER
    t_cap: int | None = None  # None derives the cap from the cutoff and weights
    method: str = DEFAULT_METHOD
    format: str = DEFAULT_FORMAT
    threads: int = DEFAULT_THREADS

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data.pop("profile")
        return data
