"""Streaming Koopman operator identification (recursive EDMD)."""

import json as _json

from ._core import (
    ContractError,
    DataError,
    Dictionary,
    DivergenceError,
    Error,
    IoError,
    KoopmanModel,
    NumericalError,
    ParseError,
    Predictor,
    SnapshotPairs,
    StreamState,
    dmd_fit,
    edmd_fit,
    eig,
    eigenfunction_on_grid,
    fit_stream,
    ingest_csv,
    lstsq,
    per_step_mse,
    pinv,
    ridge_fit,
    ring_laplacian,
    rolling_mse,
    save_snapshots_csv,
    spectrum,
)
from ._core import simulate as _simulate

__version__ = "0.1.0"


def simulate(system, **params):
    """Simulate a built-in system ("vdp", "ring" or "burgers") and return SnapshotPairs."""
    return _simulate(system, _json.dumps(params))
