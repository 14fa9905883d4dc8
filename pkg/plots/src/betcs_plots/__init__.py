"""Figure rendering for betcs experiment CSVs."""

from .figures import (
    DataError,
    FigureSpec,
    RecordTable,
    SchemaError,
    assert_nested_widths,
    load_records,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "FigureSpec",
    "RecordTable",
    "SchemaError",
    "assert_nested_widths",
    "load_records",
    "render",
]
