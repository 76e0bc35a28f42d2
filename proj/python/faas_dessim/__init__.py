"""Trace-driven FaaS simulator and predictive-validation statistics."""

import json as _json

from ._core import (  # noqa: F401
    ConfigError,
    DegenerateSampleError,
    DessimError,
    FormatError,
    InputError,
    ParameterError,
    SimulationResult,
    TraceEntry,
    TraceFile,
    __version__,
    ecdf,
    exponential_interarrivals,
    ks_distance,
    moments,
    percentile,
    percentile_ci,
    poisson_interarrivals,
    read_results,
    read_trace_csv,
    run_simulation,
    synth_trace,
    trim_warmup,
    write_results,
    write_trace_csv,
)
from ._core import compare as _compare_json


def compare(measured, simulated, **kwargs):
    """Compare measured and simulated run sets; returns the report as a dict."""
    return _json.loads(_compare_json(measured, simulated, **kwargs))
