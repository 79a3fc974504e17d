"""Shared constants used across the application.

This module contains defaults, exit codes and report metadata that are shared
by the runner, the output layer and the commands.
"""

__all__ = [
    "APP_NAME",
    "REPORT_VERSION",
    "CONVENTION_NOTE",
    "DEFAULT_ORDER",
    "DEFAULT_METHOD",
    "DEFAULT_FORMAT",
    "DEFAULT_THREADS",
    "FLOAT_TOLERANCE",
    "EXIT_OK",
    "EXIT_UNEXPECTED",
    "EXIT_NOT_ADMISSIBLE",
    "EXIT_SINGULAR",
    "EXIT_INPUT",
    "EXIT_NON_EVALUATIVE",
    "TIME_SYMBOL",
]

APP_NAME = "weightlin"

# Report file format version
REPORT_VERSION = "1.0"

CONVENTION_NOTE = (
    "phi_inverse gives the new coordinate functions; phi pulls the field back to its weighted linear approximation"
)

# Job defaults (overridable per profile and environment)
DEFAULT_ORDER = 10
DEFAULT_METHOD = "moser"
DEFAULT_FORMAT = "text"
DEFAULT_THREADS = 1

# Equality tolerance of the floating-point resonance scan
FLOAT_TOLERANCE = 1e-9

# Process exit codes
EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_NOT_ADMISSIBLE = 2
EXIT_SINGULAR = 3
EXIT_INPUT = 4
EXIT_NON_EVALUATIVE = 5

# Reserved identifier for time in time-dependent field expressions
TIME_SYMBOL = "t"
