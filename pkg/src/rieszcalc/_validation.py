"""Input validation helpers for complex-valued data.

scikit-learn's ``check_array`` refuses complex input, so the estimators in
this package use these instead.
"""

import numbers

import numpy as np


def as_complex(value, name="value"):
    """Coerce a scalar to a finite Python complex.

    Accepts numbers and ``[re, im]`` pairs (the on-disk encoding).
    """
    if isinstance(value, (list, tuple)) or (
            isinstance(value, np.ndarray) and value.ndim == 1):
        if len(value) != 2:
            raise ValueError(f"{name} must be a [re, im] pair, got {value!r}")
        value = complex(float(value[0]), float(value[1]))
    if not isinstance(value, numbers.Number):
        raise TypeError(f"{name} must be a number, got {type(value).__name__}")
    z = complex(value)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


def check_complex_vector(values, name="values", min_length=0):
    arr = np.asarray(values)
    if arr.dtype == object:
        arr = np.array([as_complex(v, name) for v in values], dtype=complex)
    arr = np.atleast_1d(arr).astype(complex)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"{name} needs at least {min_length} entries, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_square_matrix(matrix, name="matrix"):
    arr = np.asarray(getattr(matrix, "entries", matrix), dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"{name} must be a nonempty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_positive(value, name):
    value = float(value)
    if not (np.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def readonly(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr
