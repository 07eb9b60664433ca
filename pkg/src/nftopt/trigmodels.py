"""Closed-form trigonometric restrictions of the circuit cost function.

Freezing all but one independent parameter leaves a pure sine curve
a1*cos(theta - a2) + a3.  Freezing all but a subset M leaves a tensor-product
form b . [kron_j (cos theta_j, sin theta_j, 1)].  A parameter reused S times
leaves a degree-S trigonometric polynomial with 2S+1 coefficients.  All three
families are fitted exactly from function values on small node sets and
minimized classically.
"""

from dataclasses import dataclass

import numpy as np

from .validation import canonicalize_angle

# per-axis 3-point solve on values at offsets {0, +2pi/3, -2pi/3}:
# rows give (p, q, r) with f(phi) = p*cos(phi) + q*sin(phi) + r
_THREE_POINT = np.array(
    [
        [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0],
        [0.0, 1.0 / np.sqrt(3.0), -1.0 / np.sqrt(3.0)],
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    ]
)


@dataclass
class SineModel:
    """a1*cos(theta - a2) + a3 with a1 >= 0 and a2 canonical."""

    amplitude: float
    phase: float
    offset: float

    def __post_init__(self):
        if self.amplitude < 0:
            self.amplitude = -self.amplitude
            self.phase = self.phase + np.pi
        self.phase = float(canonicalize_angle(self.phase))

    def __call__(self, theta):
        return self.amplitude * np.cos(np.asarray(theta) - self.phase) + self.offset


def fit_sine_three_points(theta0, z0, z_plus, z_minus):
    """Fit the sine restriction from L(theta0) and L(theta0 +- pi/2)."""
    values = np.array([theta0, z0, z_plus, z_minus], dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("sine fit requires finite inputs")
    offset = 0.5 * (z_plus + z_minus)
    c_cos = z0 - offset
    c_sin = 0.5 * (z_plus - z_minus)
    amplitude = float(np.hypot(c_cos, c_sin))
    phase = float(canonicalize_angle(theta0 + np.arctan2(c_sin, c_cos)))
    return SineModel(amplitude, phase, offset)


def sine_argmin(model, current_angle=0.0, amplitude_tol=0.0):
    """Global minimizer of a SineModel over [-pi, pi).

    A restriction flatter than `amplitude_tol` keeps `current_angle` and
    reports the offset as the minimum.
    """
    if model.amplitude <= amplitude_tol:
        return float(canonicalize_angle(current_angle)), model.offset
    theta_star = float(canonicalize_angle(model.phase + np.pi))
    return theta_star, model.offset - model.amplitude


def _apply_along_axis(mat, arr, axis):
    return np.moveaxis(np.tensordot(mat, arr, axes=(1, axis)), 0, axis)


def _basis(theta):
    return np.array([np.cos(theta), np.sin(theta), 1.0])


def _basis_d1(theta):
    return np.array([-np.sin(theta), np.cos(theta), 0.0])


def _basis_d2(theta):
    return np.array([-np.cos(theta), -np.sin(theta), 0.0])


@dataclass
class TrigTensorModel:
    """b . [kron_j (cos theta_j, sin theta_j, 1)] over a parameter subset.

    `coeffs` has shape (3,)*len(indices) with per-axis basis order
    (cos, sin, 1), expressed in absolute angles.
    """

    indices: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        self.indices = tuple(int(j) for j in self.indices)
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (3,) * len(self.indices):
            raise ValueError(
                f"coefficient tensor shape {self.coeffs.shape} does not match "
                f"{len(self.indices)} indices"
            )

    @property
    def subset_size(self):
        return len(self.indices)

    def __call__(self, angles):
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        value = self.coeffs
        for theta in angles:
            value = np.tensordot(_basis(theta), value, axes=(0, 0))
        return float(value)

    def gradient(self, angles):
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        m = self.subset_size
        grad = np.empty(m)
        for k in range(m):
            value = self.coeffs
            for ax, theta in enumerate(angles):
                vec = _basis_d1(theta) if ax == k else _basis(theta)
                value = np.tensordot(vec, value, axes=(0, 0))
            grad[k] = value
        return grad

    def hessian(self, angles):
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        m = self.subset_size
        hess = np.empty((m, m))
        for k in range(m):
            for l in range(k, m):
                value = self.coeffs
                for ax, theta in enumerate(angles):
                    if ax == k and ax == l:
                        vec = _basis_d2(theta)
                    elif ax in (k, l):
                        vec = _basis_d1(theta)
                    else:
                        vec = _basis(theta)
                    value = np.tensordot(vec, value, axes=(0, 0))
                hess[k, l] = hess[l, k] = value
        return hess


def fit_trig_tensor(indices, thetas0, grid_values):
    """Fit the tensor-product restriction from a {0, +-2pi/3}^|M| grid.

    `grid_values` maps alpha tuples in {0, +1, -1}^|M| to cost values at
    angles thetas0 + (2pi/3)*alpha; the alpha = 0 entry is the cached value.
    An ndarray of shape (3,)*|M| with axis order (0, +1, -1) is also accepted.
    """
    indices = tuple(int(j) for j in indices)
    thetas0 = np.atleast_1d(np.asarray(thetas0, dtype=float))
    m = len(indices)
    if thetas0.size != m:
        raise ValueError("thetas0 must have one angle per subset index")
    if isinstance(grid_values, np.ndarray):
        values = np.asarray(grid_values, dtype=float)
        if values.shape != (3,) * m:
            raise ValueError(f"grid array must have shape {(3,) * m}")
    else:
        values = np.full((3,) * m, np.nan)
        pos = {0: 0, 1: 1, -1: 2}
        for alpha, value in grid_values.items():
            alpha = (alpha,) if np.isscalar(alpha) else tuple(alpha)
            values[tuple(pos[a] for a in alpha)] = value
        if np.any(np.isnan(values)):
            raise ValueError("missing grid point(s) in trig-tensor fit")
    coeffs = values
    for axis, theta0 in enumerate(thetas0):
        c, s = np.cos(theta0), np.sin(theta0)
        rotate_back = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        coeffs = _apply_along_axis(rotate_back @ _THREE_POINT, coeffs, axis)
    return TrigTensorModel(indices, coeffs)


def minimize_trig_tensor(model, current_angles=None, grid_per_axis=64,
                         newton_iters=50, tol=1e-10):
    """Global minimum of a TrigTensorModel over the |M|-torus.

    Dense grid search followed by damped-Newton refinement; falls back to
    the best grid point if refinement does not improve.
    """
    m = model.subset_size
    grid = np.linspace(-np.pi, np.pi, grid_per_axis, endpoint=False)
    basis = np.stack([np.cos(grid), np.sin(grid), np.ones_like(grid)])
    values = model.coeffs
    for _ in range(m):
        # contract leading coefficient axis against the grid basis; grid
        # axes accumulate at the end
        values = np.tensordot(basis, values, axes=(0, 0))
        values = np.moveaxis(values, 0, -1)
    flat_best = int(np.argmin(values))
    best_idx = np.unravel_index(flat_best, values.shape)
    best_angles = grid[list(best_idx)]
    best_value = float(values[best_idx])

    angles = best_angles.copy()
    value = best_value
    for _ in range(newton_iters):
        grad = model.gradient(angles)
        if np.max(np.abs(grad)) < tol:
            break
        hess = model.hessian(angles)
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            step = -grad
        damping = 1.0
        improved = False
        for _ in range(20):
            candidate = angles + damping * step
            cand_value = model(candidate)
            if cand_value < value:
                angles, value = candidate, cand_value
                improved = True
                break
            damping *= 0.5
        if not improved:
            break
    if value <= best_value:
        best_angles, best_value = angles, value
    return canonicalize_angle(best_angles), float(best_value)


@dataclass
class FourierModel:
    """sum_s a_s cos(s*theta) + b_s sin(s*theta) + c, s = 1..order."""

    order: int
    a: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.a.shape != (self.order,) or self.b.shape != (self.order,):
            raise ValueError("coefficient vectors must have length `order`")

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        s = np.arange(1, self.order + 1)
        angles = np.multiply.outer(theta, s)
        return (
            np.cos(angles) @ self.a + np.sin(angles) @ self.b + self.c
        )

    def derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        s = np.arange(1, self.order + 1)
        angles = np.multiply.outer(theta, s)
        return -np.sin(angles) @ (s * self.a) + np.cos(angles) @ (s * self.b)

    def second_derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        s = np.arange(1, self.order + 1)
        angles = np.multiply.outer(theta, s)
        return -np.cos(angles) @ (s**2 * self.a) - np.sin(angles) @ (s**2 * self.b)


def fit_fourier(order, theta0, values):
    """Fit Eq.-style Fourier coefficients from the uniform (2S+1)-node grid.

    `values[s]` is the cost at theta0 + 2*pi*s/(2S+1) for s = 0..2S.
    """
    values = np.asarray(values, dtype=float)
    n = 2 * order + 1
    if values.shape != (n,):
        raise ValueError(f"expected {n} node values, got {values.shape}")
    spectrum = np.fft.fft(values) / n
    c = float(spectrum[0].real)
    s = np.arange(1, order + 1)
    a_shift = 2.0 * spectrum[1 : order + 1].real
    b_shift = -2.0 * spectrum[1 : order + 1].imag
    # shift from the node frame phi = theta - theta0 back to absolute angles
    cos_s, sin_s = np.cos(s * theta0), np.sin(s * theta0)
    a = a_shift * cos_s - b_shift * sin_s
    b = a_shift * sin_s + b_shift * cos_s
    return FourierModel(order, a, b, c)


def minimize_fourier(model, grid_per_order=256, newton_iters=50, tol=1e-10):
    """Global minimum of a FourierModel over [-pi, pi).

    Ties between equal minima break toward the smallest canonical angle.
    """
    grid = np.linspace(-np.pi, np.pi, grid_per_order * model.order, endpoint=False)
    values = model(grid)
    best = int(np.argmin(values))
    theta = float(grid[best])
    value = float(values[best])
    for _ in range(newton_iters):
        d1 = float(model.derivative(theta))
        if abs(d1) < tol:
            break
        d2 = float(model.second_derivative(theta))
        if d2 <= 0:
            break
        candidate = theta - d1 / d2
        cand_value = float(model(candidate))
        if cand_value >= value:
            break
        theta, value = candidate, cand_value
    return float(canonicalize_angle(theta)), value
