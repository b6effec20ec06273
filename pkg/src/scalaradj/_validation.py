"""Small input-validation helpers used across modules."""

import numpy as np

from .errors import DataError, DegenerateVectorError, DimensionError


def as_vector(x, name="vector"):
    """Coerce to a finite 1-D float64 array."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise DataError(f"{name} contains non-finite values")
    return v


def check_same_dim(u, v):
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")


def check_nonzero(v, name="vector"):
    if not np.any(v):
        raise DegenerateVectorError(f"{name} has zero norm")


def as_feature_matrix(X, name="X"):
    """Coerce to a finite 2-D float64 array; 1-D input becomes a column."""
    M = np.asarray(X, dtype=np.float64)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise DataError(f"{name} must be 2-D, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise DataError(f"{name} contains non-finite values")
    return M
