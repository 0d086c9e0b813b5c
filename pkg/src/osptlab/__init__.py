"""Exact and numerical computations for overpartition string statistics."""

from . import asymptotics, circle, combinatorics, qseries
from .qseries import TruncatedSeries

__all__ = ["asymptotics", "circle", "combinatorics", "qseries", "TruncatedSeries"]
__version__ = "0.1.0"
