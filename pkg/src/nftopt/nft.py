"""Sequential minimal optimization of parameterized-circuit cost functions.

Each update restricts the cost to one parameter (or a small subset), fits
the closed-form trigonometric restriction from a handful of estimations,
and jumps straight to the restriction's global minimum.  The minimum value
is carried over as the cached cost of the next update instead of being
re-measured; to stop statistical error from accumulating, the cache is
re-estimated directly once every `reestimate_every` updates.

Step accounting (one step = one cost estimation): 1 for the initial cache
seed, then per update 2 (single), 3^|M| - 1 (multi), or 2*S_j (shared),
plus 1 on each re-estimation update.
"""

import numpy as np
from sklearn.base import BaseEstimator

from .trace import RunTrace
from .trigmodels import (
    fit_fourier,
    fit_sine_three_points,
    fit_trig_tensor,
    minimize_fourier,
    minimize_trig_tensor,
    sine_argmin,
)
from .validation import as_angle_array, canonicalize_angle

_EXACT_FLAT_TOL = 1e-12
_PI_2 = np.pi / 2
_TWO_PI_3 = 2 * np.pi / 3

VARIANTS = ("single", "multi", "shared")


class NftOptimizer(BaseEstimator):
    """Closed-form sinusoidal coordinate descent over circuit parameters.

    Parameters
    ----------
    variant : "single", "multi", or "shared"
        Which restriction is fitted per update.  "single" and "multi"
        require every parameter to appear in exactly one gate; "shared"
        handles parameters reused any number of times.
    subset_size : int
        Subset size |M| for the "multi" variant (1 to 3).
    sweep : "sequential" or "random"
        Parameter (or subset) selection order.
    reestimate_every : int
        Re-measure the cached cost on every k-th update.
    max_steps : int
        Step budget; an update never starts if it would overrun it.
    max_updates : int, optional
        Alternative budget in update iterations.
    seed : int, optional
        RNG seed for the random sweep order.
    record_exact : bool
        Also store the exact cost at every trace point (simulator only).
    """

    def __init__(self, variant="single", subset_size=2, sweep="sequential",
                 reestimate_every=32, max_steps=1024, max_updates=None,
                 seed=None, record_exact=False):
        self.variant = variant
        self.subset_size = subset_size
        self.sweep = sweep
        self.reestimate_every = reestimate_every
        self.max_steps = max_steps
        self.max_updates = max_updates
        self.seed = seed
        self.record_exact = record_exact

    def _validate(self, cost):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.sweep not in ("sequential", "random"):
            raise ValueError(f"unknown sweep order {self.sweep!r}")
        if self.variant == "multi" and not 1 <= self.subset_size <= 3:
            raise ValueError("subset_size must be between 1 and 3")
        if self.reestimate_every < 1:
            raise ValueError("reestimate_every must be >= 1")
        counts = np.asarray(cost.usage_counts)
        if self.variant in ("single", "multi") and np.any(counts != 1):
            raise ValueError(
                f"variant {self.variant!r} requires every parameter to be "
                "used exactly once; use variant='shared'"
            )

    def _subsets(self, num_params, rng):
        """Yield the parameter subset of each update, indefinitely."""
        if self.variant == "multi":
            size = self.subset_size
        else:
            size = 1
        if self.sweep == "sequential":
            while True:
                for start in range(0, num_params, size):
                    yield tuple(range(start, min(start + size, num_params)))
        else:
            while True:
                if size == 1:
                    yield (int(rng.integers(num_params)),)
                else:
                    k = min(size, num_params)
                    yield tuple(rng.choice(num_params, size=k, replace=False))

    def _update_cost_in_steps(self, subset, usage_counts):
        if self.variant == "single":
            return 2
        if self.variant == "multi":
            return 3 ** len(subset) - 1
        return 2 * int(usage_counts[subset[0]])

    def fit(self, cost, initial_params):
        """Run the optimizer against a CountedCost; returns self.

        Fitted attributes: `params_`, `cost_`, `trace_`, `n_updates_`.
        """
        self._validate(cost)
        x = canonicalize_angle(as_angle_array(initial_params, cost.num_params))
        rng = np.random.default_rng(self.seed)
        flat_tol = 0.0 if cost.stochastic else _EXACT_FLAT_TOL
        usage_counts = np.asarray(cost.usage_counts)

        trace = RunTrace()
        cached = cost.estimate(x)
        trace.append(cost.steps, x, cached,
                     cost.exact(x) if self.record_exact else None)

        n_updates = 0
        for subset in self._subsets(x.size, rng):
            if self.max_updates is not None and n_updates >= self.max_updates:
                break
            needed = self._update_cost_in_steps(subset, usage_counts)
            if (n_updates + 1) % self.reestimate_every == 0:
                needed += 1
            if cost.steps + needed > self.max_steps:
                break

            if self.variant == "single":
                x, cached = self._single_update(cost, x, cached, subset[0], flat_tol)
            elif self.variant == "multi":
                x, cached = self._multi_update(cost, x, cached, subset, flat_tol)
            else:
                x, cached = self._shared_update(
                    cost, x, cached, subset[0], int(usage_counts[subset[0]]), flat_tol
                )
            n_updates += 1
            if n_updates % self.reestimate_every == 0:
                cached = cost.estimate(x)
            trace.append(cost.steps, x, cached,
                         cost.exact(x) if self.record_exact else None)

        self.trace_ = trace
        self.params_ = x
        self.cost_ = cached
        self.n_updates_ = n_updates
        return self

    @staticmethod
    def _at(x, subset, angles):
        shifted = x.copy()
        shifted[list(subset)] = angles
        return shifted

    def _single_update(self, cost, x, cached, j, flat_tol):
        theta0 = x[j]
        z_plus = cost.estimate(self._at(x, (j,), theta0 + _PI_2))
        z_minus = cost.estimate(self._at(x, (j,), theta0 - _PI_2))
        model = fit_sine_three_points(theta0, cached, z_plus, z_minus)
        theta_star, minimum = sine_argmin(model, theta0, flat_tol)
        return self._at(x, (j,), theta_star), minimum

    def _multi_update(self, cost, x, cached, subset, flat_tol):
        m = len(subset)
        thetas0 = x[list(subset)]
        values = np.empty((3,) * m)
        offsets = np.array([0.0, _TWO_PI_3, -_TWO_PI_3])
        for idx in np.ndindex(*values.shape):
            if all(i == 0 for i in idx):
                values[idx] = cached
                continue
            angles = thetas0 + offsets[list(idx)]
            values[idx] = cost.estimate(self._at(x, subset, angles))
        model = fit_trig_tensor(subset, thetas0, values)
        non_constant = model.coeffs.copy()
        non_constant[(2,) * m] = 0.0
        if np.max(np.abs(non_constant)) <= flat_tol:
            return x, cached
        angles_star, minimum = minimize_trig_tensor(model, thetas0)
        return self._at(x, subset, angles_star), minimum

    def _shared_update(self, cost, x, cached, j, s_j, flat_tol):
        theta0 = x[j]
        n = 2 * s_j + 1
        values = np.empty(n)
        values[0] = cached
        for s in range(1, n):
            values[s] = cost.estimate(
                self._at(x, (j,), theta0 + 2 * np.pi * s / n)
            )
        model = fit_fourier(s_j, theta0, values)
        if max(np.max(np.abs(model.a)), np.max(np.abs(model.b))) <= flat_tol:
            return x, cached
        theta_star, minimum = minimize_fourier(model)
        return self._at(x, (j,), theta_star), minimum
