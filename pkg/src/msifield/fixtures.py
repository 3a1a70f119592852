"""Bundled Brisbane precipitation case-study tables and their access helpers.

The package ships the published summary tables of the 25-26 January 2013
Brisbane storm (strip sums, subinterval partition values, 30-minute series,
sub-rectangle totals) as CSV fixtures.  The raw radar grid itself is not
distributed; every grid-dependent quantity is covered by these tables.

Set the ``MSI_FIXTURES`` environment variable to override the fixture
directory, e.g. to substitute experimental tables with the same layout.
"""
from __future__ import annotations

import hashlib
import os
from importlib import resources
from pathlib import Path

import numpy as np

from . import io as msio
from .model import Axis, Breakpoints, StripSeries
from .predict import RectangleTotals

__all__ = [
    "fixture_dir",
    "fixture_path",
    "list_fixtures",
    "validate_fixtures",
    "load_vertical_strip_sums",
    "load_horizontal_strip_sums",
    "load_time_series",
    "load_vertical_partitions",
    "load_horizontal_partitions",
    "load_time_partitions",
    "load_subrectangle_totals",
    "VERTICAL_BREAKPOINTS",
    "HORIZONTAL_BREAKPOINTS",
    "TIME_BREAKPOINTS",
    "VERTICAL_SCALES",
    "HORIZONTAL_SCALES",
    "TIME_SCALES",
    "CASE_STUDY_LAMBDA",
    "CASE_STUDY_HURST",
    "CASE_STUDY_HPRIME1",
    "CASE_STUDY_HPRIME2",
]

ENV_VAR = "MSI_FIXTURES"

# Case-study reference values (fitted parameters of the Brisbane tables).
VERTICAL_BREAKPOINTS = Breakpoints((0, 14, 31, 52))
HORIZONTAL_BREAKPOINTS = Breakpoints((0, 10, 23, 40))
TIME_BREAKPOINTS = Breakpoints((38, 44, 60, 79))
VERTICAL_SCALES = (1.214, 1.235)
HORIZONTAL_SCALES = (1.300, 1.307)
TIME_SCALES = (2.667, 1.187)
CASE_STUDY_LAMBDA = (1.224, 1.303)
CASE_STUDY_HURST = (1.435, 1.765)
CASE_STUDY_HPRIME1 = (0.36, 0.70, 0.59)
CASE_STUDY_HPRIME2 = (0.90, 1.14, 0.84)

_CHECKSUMS = {
    "table1.csv": "9e22117b6201b6792004e52e0eff4344a2d660210d27c1294e6982620539b606",
    "table2.csv": "b80cd75dbd42032c2962a005e19c5f73d2e1f7ca393692541ec9c1f2bc56ef76",
    "table3.csv": "18d28e23aefc5b67f2a4eca940b54c95b008646eac1354a63ae568eb7e90a320",
    "table4.csv": "2d321406e5d6a08b71af255720d52d455c79a8d0b056e40ea2b1ad21b9b66c9c",
    "table7.csv": "9a04870d6a77694c91d285b7a15a2db76b957f970bd569e3dea5fbd8e24e1d40",
    "table8.csv": "fa93241805a53cd6bcace5bc17f432f565d52fd952203de374ebdb00df6ab562",
    "table10.csv": "210845cf57cfb247efb2a8b5260fa43423d2d18f5cffd895b87b0fec2cac2c9b",
}

_DESCRIPTIONS = {
    "table1.csv": "accumulated precipitation on the 60 vertical strips (mm)",
    "table2.csv": "accumulated precipitation on the 50 horizontal strips (mm)",
    "table3.csv": "vertical partition values per (interval, subinterval), 7 per row",
    "table4.csv": "horizontal partition values per (interval, subinterval), 5 per row",
    "table7.csv": "30-minute accumulated precipitation over two days (96 steps)",
    "table8.csv": "time-axis partition values per (interval, subinterval), 3 per row",
    "table10.csv": "sub-rectangle totals, one row per rectangle (k1,k2), columns i=1..4",
}


def fixture_dir() -> Path:
    """Directory holding the fixture CSVs (``MSI_FIXTURES`` overrides)."""
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(resources.files(__package__) / "fixtures")


def fixture_path(name: str) -> Path:
    path = fixture_dir() / name
    if not path.exists():
        raise FileNotFoundError(f"fixture {name!r} not found in {fixture_dir()}")
    return path


def list_fixtures() -> dict[str, str]:
    """Fixture file names with one-line descriptions."""
    return dict(_DESCRIPTIONS)


def validate_fixtures() -> dict[str, bool]:
    """Compare each bundled CSV against its frozen SHA-256 checksum."""
    out = {}
    for name, expected in _CHECKSUMS.items():
        digest = hashlib.sha256(fixture_path(name).read_bytes()).hexdigest()
        out[name] = digest == expected
    return out


def load_vertical_strip_sums() -> StripSeries:
    return msio.load_series(fixture_path("table1.csv"), Axis.VERTICAL)


def load_horizontal_strip_sums() -> StripSeries:
    return msio.load_series(fixture_path("table2.csv"), Axis.HORIZONTAL)


def load_time_series() -> StripSeries:
    return msio.load_series(fixture_path("table7.csv"), Axis.TIME)


def load_vertical_partitions() -> dict[tuple[int, int], np.ndarray]:
    return msio.load_partition_values(fixture_path("table3.csv"))


def load_horizontal_partitions() -> dict[tuple[int, int], np.ndarray]:
    return msio.load_partition_values(fixture_path("table4.csv"))


def load_time_partitions() -> dict[tuple[int, int], np.ndarray]:
    return msio.load_partition_values(fixture_path("table8.csv"))


def load_subrectangle_totals() -> RectangleTotals:
    return msio.load_rectangle_totals(fixture_path("table10.csv"))
