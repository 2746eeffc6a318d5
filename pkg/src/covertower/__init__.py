"""Finite covers of graphs from group data, towers of covers, and the
exact combinatorics that tie the two fibre actions together."""

from __future__ import annotations

__version__ = "0.1.0"

from . import borel, covers, errors, graphs, groups, tower

__all__ = ["borel", "covers", "errors", "graphs", "groups", "tower", "__version__"]
