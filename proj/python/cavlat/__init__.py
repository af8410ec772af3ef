"""Cold-atom lattices in linear and ring cavities.

Every entry point takes a configuration as ``key = value`` text, the same
format the command line tool reads. Use :func:`load` for a file on disk.
"""

from pathlib import Path

from ._cavlat import (
    ConfigError,
    NumericalError,
    compare,
    free_space,
    lattice_site_phase,
    report,
    scan,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "compare",
    "free_space",
    "lattice_site_phase",
    "load",
    "report",
    "scan",
]


def load(path):
    """Reads a configuration or result file into configuration text."""
    return Path(path).read_text()
