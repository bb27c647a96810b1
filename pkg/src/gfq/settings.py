"""Library-wide numerical conventions."""

import os

#: Value of hbar used when a function is not given one explicitly.
HBAR: float = float(os.environ.get("GFQ_HBAR", "2.0"))


def get_hbar(hbar=None):
    """Return ``hbar`` if given, otherwise the library default."""
    if hbar is None:
        return HBAR
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    return float(hbar)
