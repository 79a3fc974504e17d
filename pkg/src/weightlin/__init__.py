"""weightlin - exact weighted linearization of formal vector fields.

This package provides a computer-algebra engine and a command-line interface for
decomposing vector fields into weighted graded slices, certifying the adjoint
conditions and constructing linearizing formal diffeomorphisms.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
