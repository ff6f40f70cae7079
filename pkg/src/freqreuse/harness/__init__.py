"""Configuration, sweeps, validation reports and figure data."""

from .config import ConfigError, HarnessConfig, load_config, parse_config, parse_grid
from .figures import FIGURE_KINDS, bounds_table, emit_figure_data, figure_table
from .sweep import OUTPUT_FIELDS, SweepSpec, first_crossing, run_sweep
from .tables import Table, read_csv
from .validation import ValidationReport, run_validation

__all__ = [
    "ConfigError",
    "HarnessConfig",
    "load_config",
    "parse_config",
    "parse_grid",
    "FIGURE_KINDS",
    "bounds_table",
    "emit_figure_data",
    "figure_table",
    "OUTPUT_FIELDS",
    "SweepSpec",
    "first_crossing",
    "run_sweep",
    "Table",
    "read_csv",
    "ValidationReport",
    "run_validation",
]
