"""Linear-probing hash table with stable slot handles and minimal tombstones.

The heavy lifting lives in the compiled ``_stableprobe`` extension; this
package re-exports its public surface.
"""

from ._stableprobe import (
    DeletePolicy,
    LruCache,
    MetricsRecord,
    SlotState,
    StaleHandleError,
    Table,
    TableFullError,
    TabulatedHash,
    Variant,
    WorkloadConfig,
    parse_csv,
    run_invariant_check,
    run_workload,
    to_csv,
)

__all__ = [
    "DeletePolicy",
    "LruCache",
    "MetricsRecord",
    "SlotState",
    "StaleHandleError",
    "Table",
    "TableFullError",
    "TabulatedHash",
    "Variant",
    "WorkloadConfig",
    "parse_csv",
    "run_invariant_check",
    "run_workload",
    "to_csv",
]

__version__ = "0.1.0"
