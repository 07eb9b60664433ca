"""Small input-validation and angle helpers shared across the package."""

import numbers

import numpy as np

TWO_PI = 2.0 * np.pi


def canonicalize_angle(theta):
    """Map an angle (scalar or array) to the canonical range [-pi, pi)."""
    return np.mod(np.asarray(theta, dtype=float) + np.pi, TWO_PI) - np.pi


def as_angle_array(values, num_params=None, name="params"):
    """Coerce to a 1-D float array of angles, optionally checking its length."""
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if num_params is not None and arr.size != num_params:
        raise ValueError(
            f"{name} has length {arr.size}, expected {num_params}"
        )
    return arr


def check_positive_int(value, name):
    if not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_qubit_index(q, num_qubits):
    if not 0 <= q < num_qubits:
        raise ValueError(f"qubit index {q} out of range for {num_qubits} qubits")


def check_unitary(matrix, tol=1e-12):
    """Raise if `matrix` is not square and unitary within `tol`."""
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"matrix must be square, got shape {mat.shape}")
    deviation = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
    if deviation > tol:
        raise ValueError(f"matrix is not unitary (deviation {deviation:.2e})")
    return mat
