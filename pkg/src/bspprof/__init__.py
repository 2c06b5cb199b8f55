"""Profiler toolkit for BSP / vertex-centric distributed graph computations.

Pipeline: simulate (or load) a per-superstep traffic trace, validate and
store it, aggregate it over time and over the rack/host/worker hierarchy,
lay it out as a crossing-minimized chord diagram, and serve it over HTTP.
"""

from .model import (InclusionTree, JobStats, Level, SuperstepGraph, TraceJob,
                    UnitId, ValidationReport, job_stats, validate_trace)

__all__ = [
    "InclusionTree",
    "JobStats",
    "Level",
    "SuperstepGraph",
    "TraceJob",
    "UnitId",
    "ValidationReport",
    "job_stats",
    "validate_trace",
]

__version__ = "0.1.0"
