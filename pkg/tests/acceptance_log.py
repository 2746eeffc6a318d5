"""Shared buffer for acceptance criterion results.

test_acceptance records one line per criterion here; conftest echoes the
lines in the terminal summary, where pytest's output capture cannot
swallow them.
"""

from __future__ import annotations

LINES: list[str] = []


def record(line: str) -> None:
    LINES.append(line)
