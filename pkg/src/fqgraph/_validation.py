"""Input validation shared by the estimator layer and the CLI."""
from __future__ import annotations

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .field import Field, make_field


def check_field(q) -> Field:
    return q if isinstance(q, Field) else make_field(q)


def check_dimension(d) -> int:
    try:
        d = int(d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"dimension must be an integer, got {d!r}") from exc
    if d < 1:
        raise ConfigError(f"dimension must be positive, got {d}")
    return d


def check_grid_function(f, q: int, d: int, nonnegative: bool = False) -> np.ndarray:
    """Return ``f`` as an array of shape (q,)*d; flat inputs of length q**d are reshaped."""
    a = np.asarray(f)
    if a.dtype.kind not in "biuf":
        raise ConfigError(f"grid functions must be real-valued, got dtype {a.dtype}")
    if a.ndim == 1 and a.size == q**d:
        a = a.reshape((q,) * d)
    if a.shape != (q,) * d:
        raise DimensionMismatch(f"expected shape {(q,) * d} or ({q**d},), got {a.shape}")
    if a.dtype.kind == "f" and not np.isfinite(a).all():
        raise ConfigError("grid functions must be finite")
    if nonnegative and (a < 0).any():
        raise ConfigError("grid functions must be nonnegative")
    return a


def check_batch(X, q: int, d: int, blocks: int = 1) -> np.ndarray:
    """2-D sample matrix of shape (n_samples, blocks * q**d)."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D sample matrix, got {X.ndim} dimensions")
    width = blocks * q**d
    if X.shape[1] != width:
        raise DimensionMismatch(f"expected {width} features per sample, got {X.shape[1]}")
    if X.dtype.kind not in "biuf":
        raise ConfigError(f"samples must be real-valued, got dtype {X.dtype}")
    if X.dtype.kind == "f" and not np.isfinite(X).all():
        raise ConfigError("samples must be finite")
    return X
