"""Third moments of qudit Clifford orbits, magic states and 3-designs."""

from ._backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
