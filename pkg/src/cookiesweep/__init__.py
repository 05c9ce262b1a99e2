"""cookiesweep: find cookie notices, model their controls, and compute the
clicks that disable non-essential cookies."""

__version__ = "0.1.0"

from .db import EnforcementDb, EnforcementRecord, RecordStatus
from .detector import ClassifierHandle, detect_notice
from .measure import MeasurementReport, measure
from .pipeline import PipelineConfig, run_pipeline

__all__ = [
    "ClassifierHandle",
    "EnforcementDb",
    "EnforcementRecord",
    "MeasurementReport",
    "PipelineConfig",
    "RecordStatus",
    "detect_notice",
    "measure",
    "run_pipeline",
    "__version__",
]
