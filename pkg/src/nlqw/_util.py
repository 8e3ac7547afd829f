"""Small shared helpers for CSV and path handling."""

import os


def fmt_float(x) -> str:
    """Shortest round-trip decimal form of a float, stable across runs."""
    return repr(float(x))


def ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
