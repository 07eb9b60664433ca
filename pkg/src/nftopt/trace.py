"""Per-run optimization traces keyed by the global step counter."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TracePoint:
    step: int
    params: np.ndarray
    cost_estimate: float
    exact_cost: float = None


@dataclass
class RunTrace:
    """Ordered (step, params, cost) records; steps are strictly increasing."""

    points: list = field(default_factory=list)

    def append(self, step, params, cost_estimate, exact_cost=None):
        if self.points and step <= self.points[-1].step:
            raise ValueError(
                f"steps must be strictly increasing: {step} after "
                f"{self.points[-1].step}"
            )
        self.points.append(
            TracePoint(int(step), np.array(params, dtype=float), float(cost_estimate), exact_cost)
        )

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def final_step(self):
        return self.points[-1].step

    @property
    def final_params(self):
        return self.points[-1].params

    def point_at_step(self, step):
        """Last recorded point with step <= `step` (first point if none)."""
        best = self.points[0]
        for point in self.points:
            if point.step > step:
                break
            best = point
        return best
