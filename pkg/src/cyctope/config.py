"""Resource caps.

``max_elements`` bounds structure sizes (triple sets grow cubically);
``max_cells`` bounds simplex counts and boundary-matrix sizes. The
``CYCTOPE_MAX_CELLS`` environment variable overrides the cell cap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InputError

DEFAULT_MAX_ELEMENTS = 256
DEFAULT_MAX_CELLS = 2_000_000


@dataclass
class Limits:
    max_elements: int = DEFAULT_MAX_ELEMENTS
    max_cells: int = DEFAULT_MAX_CELLS


def _cells_from_env() -> int:
    raw = os.environ.get("CYCTOPE_MAX_CELLS")
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"CYCTOPE_MAX_CELLS must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("CYCTOPE_MAX_CELLS must be positive")
    return value


def apply_env() -> None:
    """Re-read ``CYCTOPE_MAX_CELLS``; a malformed value is an :class:`InputError`."""
    limits.max_cells = _cells_from_env()


limits = Limits()
try:
    apply_env()
except InputError:
    pass  # reported by the CLI, which calls apply_env() again
