"""
Adaptive Gauss-Legendre panel quadrature for integrands on the unit circle.

Integrals of the form (1/2pi) * integral over theta in (0, 2pi) of f(theta)
are evaluated on [gap, 2pi - gap]. The two end slivers are added with a
midpoint rule, so the integrand is never evaluated at theta = 0 or 2pi, where
the Green's functions only have one-sided limits.

Each panel is estimated with an order-point rule on the whole panel and on its
two halves; the difference is the panel error. The panel with the largest
error is split until the summed error drops below
max(abs_tol, rel_tol * |I|). Refinement order is deterministic, so identical
specs give bit-identical results.

Version: 1.0.0
"""

import dataclasses
import heapq
import logging

from typing import Callable, Tuple

import numpy as np

from dimerint.core.errors import QuadratureError
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclasses.dataclass(frozen=True)
class QuadratureSpec:
    """
    Tolerances and budget of the adaptive integrator.

    Parameters
    ----------
    abs_tol: float, default=1e-10
        Absolute error target.

    rel_tol: float, default=1e-10
        Relative error target; the looser of the two targets applies.

    max_panels: int, default=4096
        Panel budget.

    endpoint_gap: float, default=1e-9
        Clearance kept from theta = 0 and theta = 2pi.

    order: int, default=16
        Gauss-Legendre nodes per panel.

    initial_panels: int, default=16
        Equal panels the refinement starts from.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_panels: int = 4096
    endpoint_gap: float = 1e-9
    order: int = 16
    initial_panels: int = 16

    def __post_init__(self):
        ParameterValidators.validate_positive_real(self.abs_tol, "abs_tol")
        ParameterValidators.validate_real_parameter(self.rel_tol, "rel_tol",
                                                    lower=0.0, strict=False)
        ParameterValidators.validate_real_parameter(self.endpoint_gap, "endpoint_gap",
                                                    lower=0.0, upper=1e-3)
        ParameterValidators.validate_integer_parameter(self.order, "order",
                                                       min_val=2, max_val=128)
        ParameterValidators.validate_integer_parameter(self.initial_panels, "initial_panels",
                                                       min_val=1)
        ParameterValidators.validate_integer_parameter(self.max_panels, "max_panels",
                                                       min_val=self.initial_panels)

    def replace(self, **changes) -> "QuadratureSpec":
        return dataclasses.replace(self, **changes)


def _panel_rule(func: Integrand,
                nodes: np.ndarray,
                weights: np.ndarray,
                lo: float,
                hi: float) -> Tuple[complex, complex]:
    """
    Return (whole-panel estimate, two-halves estimate) on [lo, hi].
    """

    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    quarter = 0.5 * half

    points = np.concatenate([mid + half * nodes,
                             0.5 * (lo + mid) + quarter * nodes,
                             0.5 * (mid + hi) + quarter * nodes])
    values = np.asarray(func(points), dtype=np.complex128)
    k = nodes.size

    whole = half * np.dot(weights, values[:k])
    halves = quarter * (np.dot(weights, values[k:2 * k]) + np.dot(weights, values[2 * k:]))
    return complex(whole), complex(halves)


def adaptive_integrate(func: Integrand,
                       lo: float,
                       hi: float,
                       spec: QuadratureSpec) -> Tuple[complex, float, int]:
    """
    Integrate a vectorised complex integrand over [lo, hi].

    Parameters
    ----------
    func: callable
        Maps a 1-d array of abscissae to integrand values.

    lo, hi: float
        Interval bounds.

    spec: QuadratureSpec
        Tolerances and panel budget.

    Returns
    -------
    value: complex
        The integral.

    error: float
        Summed error estimate.

    panels: int
        Number of panels used.

    Raises
    ------
    QuadratureError
        If the error target is not met within spec.max_panels panels.
    """

    nodes, weights = np.polynomial.legendre.leggauss(spec.order)
    edges = np.linspace(lo, hi, spec.initial_panels + 1)

    # Heap entries: (-error, sequence, lo, hi, estimate)
    heap = []
    total, total_error = 0j, 0.0
    sequence = 0
    for a, b in zip(edges[:-1], edges[1:]):
        whole, halves = _panel_rule(func, nodes, weights, a, b)
        error = abs(whole - halves)
        heapq.heappush(heap, (-error, sequence, a, b, halves))
        sequence += 1
        total += halves
        total_error += error

    while total_error > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if len(heap) >= spec.max_panels:
            raise QuadratureError(len(heap), total_error)

        neg_error, _, a, b, estimate = heapq.heappop(heap)
        total -= estimate
        total_error += neg_error

        mid = 0.5 * (a + b)
        for c, d in ((a, mid), (mid, b)):
            whole, halves = _panel_rule(func, nodes, weights, c, d)
            error = abs(whole - halves)
            heapq.heappush(heap, (-error, sequence, c, d, halves))
            sequence += 1
            total += halves
            total_error += error

    # Re-sum to shed the drift of the running totals
    value = sum(entry[4] for entry in sorted(heap, key=lambda e: e[2]))
    error = sum(-entry[0] for entry in heap)
    return complex(value), float(error), len(heap)


def circle_average(func: Integrand,
                   spec: QuadratureSpec) -> Tuple[complex, float]:
    """
    Return (1/2pi) * integral of func over theta in (0, 2pi) and its error
    estimate.

    The integrand may have different one-sided limits at 0 and 2pi.
    """

    gap = spec.endpoint_gap
    value, error, panels = adaptive_integrate(func, gap, 2 * np.pi - gap, spec)

    slivers = np.asarray(func(np.array([0.5 * gap, 2 * np.pi - 0.5 * gap])),
                         dtype=np.complex128)
    value += gap * complex(slivers.sum())

    logger.debug(f"Circle average used {panels} panels, error estimate {error:.3e}.")
    return value / (2 * np.pi), error / (2 * np.pi)
