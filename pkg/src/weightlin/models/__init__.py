"""weightlin data models.

This module contains dataclasses and enums describing jobs and settings.
Models are simple data containers; the algebra lives in ``weightlin.algebra``.
"""

from .job import Command, InvalidJobError, JobSpec, Method, OutputFormat
from .settings import Settings

__all__ = [
    # Job
    "Command",
    "Method",
    "OutputFormat",
    "JobSpec",
    "InvalidJobError",
    # Settings
    "Settings",
]
