"""Comparison optimizers driven through the same step-counted cost interface.

SPSA gain constants default to the widely used canonical values; they stand
in for unspecified library defaults and are not tuned per task.  Powell, CG,
and BFGS are deliberately not reimplemented; shift-rule gradient descent is
the gradient-based stand-in at matched step accounting.
"""

import numpy as np
from sklearn.base import BaseEstimator

from .trace import RunTrace
from .validation import as_angle_array


def param_shift_gradient(cost, params, j):
    """Shift-rule partial derivative [L(t+pi/2) - L(t-pi/2)] / 2; 2 steps.

    Only valid for parameters used by a single gate.
    """
    if cost.usage_counts[j] != 1:
        raise ValueError(
            f"parameter {j} is shared ({cost.usage_counts[j]} uses); the "
            "plain shift rule does not apply"
        )
    params = as_angle_array(params, cost.num_params)
    plus = params.copy()
    plus[j] += np.pi / 2
    minus = params.copy()
    minus[j] -= np.pi / 2
    return 0.5 * (cost.estimate(plus) - cost.estimate(minus))


class SpsaOptimizer(BaseEstimator):
    """Simultaneous perturbation stochastic approximation.

    Gain sequences a_k = a / (k + 1 + A)^alpha and c_k = c / (k + 1)^gamma;
    each iteration spends exactly 2 steps.
    """

    def __init__(self, a=0.628, c=0.1, alpha=0.602, gamma=0.101, A=0.0,
                 max_steps=1024, seed=None, record_exact=False):
        self.a = a
        self.c = c
        self.alpha = alpha
        self.gamma = gamma
        self.A = A
        self.max_steps = max_steps
        self.seed = seed
        self.record_exact = record_exact

    def fit(self, cost, initial_params):
        if min(self.a, self.c) < 0 or not (0 < self.alpha <= 1) or not (0 < self.gamma <= 1):
            raise ValueError("invalid SPSA gain constants")
        x = as_angle_array(initial_params, cost.num_params).copy()
        rng = np.random.default_rng(self.seed)
        trace = RunTrace()
        k = 0
        while cost.steps + 2 <= self.max_steps:
            a_k = self.a / (k + 1 + self.A) ** self.alpha
            c_k = self.c / (k + 1) ** self.gamma
            delta = rng.integers(0, 2, size=x.size) * 2.0 - 1.0
            loss_plus = cost.estimate(x + c_k * delta)
            loss_minus = cost.estimate(x - c_k * delta)
            gradient = (loss_plus - loss_minus) / (2.0 * c_k) * delta
            x = x - a_k * gradient
            trace.append(cost.steps, x, 0.5 * (loss_plus + loss_minus),
                         cost.exact(x) if self.record_exact else None)
            k += 1
        self.trace_ = trace
        self.params_ = x
        self.n_iterations_ = k
        return self


class _BudgetExhausted(Exception):
    pass


class NelderMeadOptimizer(BaseEstimator):
    """Standard Nelder-Mead simplex search with counted evaluations.

    Torus coordinates are treated as unconstrained reals; the initial
    simplex is `initial_edge` along each coordinate axis.
    """

    def __init__(self, reflection=1.0, expansion=2.0, contraction=0.5,
                 shrink=0.5, initial_edge=0.5, max_steps=1024,
                 record_exact=False):
        self.reflection = reflection
        self.expansion = expansion
        self.contraction = contraction
        self.shrink = shrink
        self.initial_edge = initial_edge
        self.max_steps = max_steps
        self.record_exact = record_exact

    def _check_config(self):
        if self.initial_edge == 0:
            raise ValueError("initial simplex edge must be non-zero")
        if not (self.reflection > 0 and self.expansion > 1
                and 0 < self.contraction < 1 and 0 < self.shrink < 1):
            raise ValueError("invalid Nelder-Mead coefficients")

    def _eval(self, cost, x):
        if cost.steps + 1 > self.max_steps:
            raise _BudgetExhausted
        return cost.estimate(x)

    def fit(self, cost, initial_params):
        self._check_config()
        x0 = as_angle_array(initial_params, cost.num_params)
        n = x0.size
        simplex = [x0.copy()]
        for i in range(n):
            vertex = x0.copy()
            vertex[i] += self.initial_edge
            simplex.append(vertex)
        simplex = np.array(simplex)

        trace = RunTrace()
        try:
            values = np.array([self._eval(cost, v) for v in simplex])
            while True:
                order = np.argsort(values, kind="stable")
                simplex, values = simplex[order], values[order]
                trace.append(cost.steps, simplex[0], values[0],
                             cost.exact(simplex[0]) if self.record_exact else None)
                centroid = simplex[:-1].mean(axis=0)
                reflected = centroid + self.reflection * (centroid - simplex[-1])
                f_reflected = self._eval(cost, reflected)
                if f_reflected < values[0]:
                    expanded = centroid + self.expansion * (reflected - centroid)
                    f_expanded = self._eval(cost, expanded)
                    if f_expanded < f_reflected:
                        simplex[-1], values[-1] = expanded, f_expanded
                    else:
                        simplex[-1], values[-1] = reflected, f_reflected
                elif f_reflected < values[-2]:
                    simplex[-1], values[-1] = reflected, f_reflected
                else:
                    if f_reflected < values[-1]:
                        simplex[-1], values[-1] = reflected, f_reflected
                    contracted = centroid + self.contraction * (simplex[-1] - centroid)
                    f_contracted = self._eval(cost, contracted)
                    if f_contracted < values[-1]:
                        simplex[-1], values[-1] = contracted, f_contracted
                    else:
                        for i in range(1, n + 1):
                            simplex[i] = simplex[0] + self.shrink * (simplex[i] - simplex[0])
                            values[i] = self._eval(cost, simplex[i])
        except _BudgetExhausted:
            pass
        best = int(np.argmin(values))
        self.trace_ = trace
        self.params_ = simplex[best]
        self.cost_ = float(values[best])
        return self


class GradientDescentOptimizer(BaseEstimator):
    """Plain gradient descent on the full shift-rule gradient (2J steps/iter)."""

    def __init__(self, learning_rate=0.1, max_steps=1024, record_exact=False):
        self.learning_rate = learning_rate
        self.max_steps = max_steps
        self.record_exact = record_exact

    def fit(self, cost, initial_params):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        x = as_angle_array(initial_params, cost.num_params).copy()
        n = x.size
        trace = RunTrace()
        while cost.steps + 2 * n <= self.max_steps:
            gradient = np.array(
                [param_shift_gradient(cost, x, j) for j in range(n)]
            )
            x = x - self.learning_rate * gradient
            # the shift-rule reads never hit x itself; log the exact value
            trace.append(cost.steps, x, cost.exact(x),
                         cost.exact(x) if self.record_exact else None)
        self.trace_ = trace
        self.params_ = x
        return self
