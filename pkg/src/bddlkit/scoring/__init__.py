from bddlkit.scoring.metrics import (
    NORMALIZED_METRICS,
    MetricsReport,
    human_report,
    machine_report,
    normalize_to_human,
    score_trajectory,
    success_score,
    with_normalization,
)
from bddlkit.scoring.trajectory import (
    LOG_VERSION,
    LogHeader,
    LogRecord,
    LogWriter,
    ObjectRecord,
    StaticObject,
    TrajectoryLog,
    dump_log,
    parse_log,
    read_log,
    snapshot_record,
    state_from_record,
    static_table,
    write_log,
)

__all__ = [
    "LOG_VERSION",
    "NORMALIZED_METRICS",
    "LogHeader",
    "LogRecord",
    "LogWriter",
    "MetricsReport",
    "ObjectRecord",
    "StaticObject",
    "TrajectoryLog",
    "dump_log",
    "human_report",
    "machine_report",
    "normalize_to_human",
    "parse_log",
    "read_log",
    "score_trajectory",
    "snapshot_record",
    "state_from_record",
    "static_table",
    "success_score",
    "with_normalization",
    "write_log",
]
