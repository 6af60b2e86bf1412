"""
Leading-order asymptotics of inverse Kasteleyn entries and the probes that
compare them with quadrature.

Seven regimes are covered. Each leading term factors as a constant built from
one-sided limits at omega -> 1 times a scaling in the asymptotic variable:

    COR1  m -> inf, n and n0 fixed      -Im L / pi                  * 1/m
    COR2  n -> +inf, n0 <= 0            Re g(0+) / (pi a)           * 1/n
    COR3  n -> -inf, n0 > 0             Im g(0+) / (pi kappa)       * P^n / n
    COR4  n -> +inf, 0 < n0 < n         Re g(0+) / (pi a)           * 1/n
    COR5  n -> -inf, n < n0 < 0         Im g(0+) / (pi kappa)       * P^n / n
    COR6  n = pN, n0 = N, N -> inf      two-term interface form     * 1/N
    COR7  n = -pN, n0 = -N, N -> inf    -Im L' / (pi kappa (p + 1)) * P^(-(p+1)N) / N

Here L is the limit of the inverse-Kasteleyn kernel, g the kernel little-g of
the far region, P = r_1+(1) and kappa = (a + b) / sqrt((a - b)^2 - 4). The
exponential forms need b - a > 2. COR6 and COR7 are stated for the up/up
component only.

Version: 1.0.0
"""

import dataclasses
import enum
import functools
import logging
import math

from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from dimerint.core.errors import LimitConvergenceError, PreconditionError
from dimerint.core.greens import (Region, as_arrow, interface_coeff_split,
                                  kernel_eval, little_g)
from dimerint.core.inverse import invk_entry
from dimerint.core.lattice import Arrow, WeightParams
from dimerint.core.parallel import ordered_map
from dimerint.core.quadrature import QuadratureSpec
from dimerint.core.spectral import roots, z_funcs
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

LIMIT_STEPS = (1e-3, 1e-4, 1e-5)
LIMIT_TOLERANCE = 1e-6

# Exponentially small entries are integrated against a relative target only
EXPONENTIAL_QUADRATURE = {"abs_tol": 1e-300, "rel_tol": 1e-9}


class Regime(enum.Enum):
    COR1 = "cor1"
    COR2 = "cor2"
    COR3 = "cor3"
    COR4 = "cor4"
    COR5 = "cor5"
    COR6 = "cor6"
    COR7 = "cor7"

    @property
    def is_exponential(self) -> bool:
        return self in (Regime.COR3, Regime.COR5, Regime.COR7)

    @property
    def variable(self) -> str:
        """
        Name of the asymptotic variable.
        """

        if self is Regime.COR1:
            return "m"
        if self in (Regime.COR6, Regime.COR7):
            return "N"
        return "n"


@dataclasses.dataclass(frozen=True)
class AsymptoticCase:
    """
    One asymptotic regime with its fixed arguments.

    Parameters
    ----------
    kind: Regime
        The regime.

    params: WeightParams
        Edge weights.

    i, j: Arrow, default=Arrow.UP
        White and black sublattice labels.

    n: int, default=None
        Fixed white column (COR1 only).

    n0: int, default=None
        Fixed source column (COR1 to COR5).

    m: int, default=0
        Fixed row offset (every regime except COR1).

    p: float, default=None
        Column ratio (COR6 and COR7), p > 1.

    Raises
    ------
    PreconditionError
        If the fixed arguments do not fit the regime.
    """

    kind: Regime
    params: WeightParams
    i: Arrow = Arrow.UP
    j: Arrow = Arrow.UP
    n: Optional[int] = None
    n0: Optional[int] = None
    m: int = 0
    p: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Regime(self.kind))
        object.__setattr__(self, "i", as_arrow(self.i))
        object.__setattr__(self, "j", as_arrow(self.j))
        ParameterValidators.validate_integer_parameter(self.m, "m")

        kind = self.kind
        if kind is Regime.COR1:
            if self.n is None or self.n0 is None:
                raise PreconditionError("cor1 needs both n and n0.")
            ParameterValidators.validate_integer_parameter(self.n, "n")
            ParameterValidators.validate_integer_parameter(self.n0, "n0")
        elif kind in (Regime.COR6, Regime.COR7):
            if self.p is None:
                raise PreconditionError(f"{kind.value} needs p.")
            ParameterValidators.validate_real_parameter(self.p, "p")
            if self.p <= 1:
                raise PreconditionError(f"{kind.value} needs p > 1, got {self.p}.")
            if self.i is not Arrow.UP or self.j is not Arrow.UP:
                raise PreconditionError(f"{kind.value} is stated for the up/up component only.")
        else:
            if self.n0 is None:
                raise PreconditionError(f"{kind.value} needs n0.")
            ParameterValidators.validate_integer_parameter(self.n0, "n0")
            if kind is Regime.COR2 and self.n0 > 0:
                raise PreconditionError(f"cor2 needs n0 <= 0, got {self.n0}.")
            if kind in (Regime.COR3, Regime.COR4) and self.n0 <= 0:
                raise PreconditionError(f"{kind.value} needs n0 > 0, got {self.n0}.")
            if kind is Regime.COR5 and self.n0 >= 0:
                raise PreconditionError(f"cor5 needs n0 < 0, got {self.n0}.")

        if kind.is_exponential and not self.params.strong_interface:
            raise PreconditionError(
                f"{kind.value} needs b - a > 2, got a = {self.params.a}, b = {self.params.b}.")

    def check_variable(self, var: int) -> None:
        """
        Raise PreconditionError if var is not admissible for the regime.
        """

        ParameterValidators.validate_integer_parameter(var, self.kind.variable)
        kind = self.kind
        if kind is Regime.COR1:
            ok = var >= 1
        elif kind is Regime.COR2:
            ok = var > 0
        elif kind is Regime.COR3:
            ok = var < 0
        elif kind is Regime.COR4:
            ok = var > self.n0
        elif kind is Regime.COR5:
            ok = var < self.n0
        else:
            ok = var >= 1 and float(self.p * var).is_integer()
        if not ok:
            raise PreconditionError(
                f"{self.kind.variable} = {var} is outside the {kind.value} regime.")

    def entry_arguments(self, var: int) -> Tuple[Arrow, Arrow, int, int, int]:
        """
        Return (i, j, n0, n, m) of the inverse entry at var.
        """

        kind = self.kind
        if kind is Regime.COR1:
            return self.i, self.j, self.n0, self.n, var
        if kind is Regime.COR6:
            return self.i, self.j, var, int(self.p * var), self.m
        if kind is Regime.COR7:
            return self.i, self.j, -var, -int(self.p * var), self.m
        return self.i, self.j, self.n0, var, self.m


def one_sided_limit(func: Callable[[np.ndarray], np.ndarray],
                    endpoint: str = "0+",
                    steps: Sequence[float] = LIMIT_STEPS,
                    tol: float = LIMIT_TOLERANCE) -> complex:
    """
    Return the limit of func(theta) as theta -> 0+ or theta -> 2pi-.

    func is sampled at the given distances from the endpoint. The quadratic
    through the three samples is extrapolated to the endpoint and compared
    with the line through the two closest samples.

    Raises
    ------
    LimitConvergenceError
        If the two extrapolants differ by more than tol * max(1, |limit|).
    """

    ParameterValidators.validate_choice(endpoint, "endpoint", ("0+", "2pi-"))
    h = np.asarray(steps, dtype=float)
    if h.size != 3:
        raise PreconditionError(f"Expected three steps, got {h.size}.")

    theta = h if endpoint == "0+" else 2 * np.pi - h
    f = np.asarray(func(theta), dtype=np.complex128)

    # Lagrange weights at 0
    quadratic = (f[0] * h[1] * h[2] / ((h[0] - h[1]) * (h[0] - h[2]))
                 + f[1] * h[0] * h[2] / ((h[1] - h[0]) * (h[1] - h[2]))
                 + f[2] * h[0] * h[1] / ((h[2] - h[0]) * (h[2] - h[1])))
    linear = (f[2] * h[1] - f[1] * h[2]) / (h[1] - h[2])

    if abs(quadratic - linear) > tol * max(1.0, abs(quadratic)):
        raise LimitConvergenceError(
            f"Limit at theta -> {endpoint} did not settle: quadratic {quadratic:.10g}, "
            f"linear {linear:.10g}.")
    return complex(quadratic)


def _omega(theta: np.ndarray) -> np.ndarray:
    return np.exp(1j * theta)


def frozen_base(params: WeightParams) -> float:
    """
    Return P = r_1+(1), the base of the exponential decay on the left.
    """

    return float(np.real(roots(1, 1.0, params)[0]))


def frozen_scale(params: WeightParams) -> float:
    """
    Return kappa = (a + b) / sqrt((a - b)^2 - 4).
    """

    a, b = params.a, params.b
    if not params.strong_interface:
        raise PreconditionError(f"kappa needs b - a > 2, got a = {a}, b = {b}.")
    return (a + b) / math.sqrt((a - b) ** 2 - 4)


def kernel_limits(i: Union[Arrow, str],
                  j: Union[Arrow, str],
                  n: int,
                  n0: int,
                  params: WeightParams) -> Tuple[complex, complex]:
    """
    Return the limits of the kernel Phi_ij(n, n0) at theta -> 0+ and 2pi-.

    For a real inverse the two are complex conjugates.
    """

    def func(theta):
        return kernel_eval(i, j, n, n0, _omega(theta), params)

    return one_sided_limit(func, "0+"), one_sided_limit(func, "2pi-")


def _little_g_limit(case: AsymptoticCase, region: Region) -> complex:
    def func(theta):
        return little_g(case.i, case.j, region, case.n0, _omega(theta), case.params, kernel=True)

    return one_sided_limit(func, "0+")


def _split_limit(case: AsymptoticCase, index: int, z_index: int) -> complex:
    def func(theta):
        omega = _omega(theta)
        z = z_funcs(omega, case.params)[z_index]
        return z / omega * interface_coeff_split(omega, case.params)[index]

    return one_sided_limit(func, "0+")


@functools.lru_cache(maxsize=64)
def leading_constant(case: AsymptoticCase) -> float:
    """
    Return the var-independent factor of the leading term.
    """

    kind = case.kind
    params = case.params

    if kind is Regime.COR1:
        lim, _ = kernel_limits(case.i, case.j, case.n, case.n0, params)
        return -lim.imag / math.pi

    if kind in (Regime.COR2, Regime.COR4):
        return _little_g_limit(case, Region.RIGHT_FAR).real / (math.pi * params.a)

    if kind in (Regime.COR3, Regime.COR5):
        g = _little_g_limit(case, Region.LEFT_FAR)
        return g.imag / (math.pi * frozen_scale(params))

    if kind is Regime.COR6:
        first = _split_limit(case, 0, 1).real / (case.p - 1)
        second = _split_limit(case, 1, 1).real / (case.p + 1)
        return (first + second) / (math.pi * params.a)

    reflected = _split_limit(case, 3, 0)
    return -reflected.imag / (math.pi * frozen_scale(params) * (case.p + 1))


def _scaling(case: AsymptoticCase, var: int) -> float:
    kind = case.kind
    if kind in (Regime.COR3, Regime.COR5):
        return frozen_base(case.params) ** var / var
    if kind is Regime.COR7:
        exponent = -int(round((case.p + 1) * var))
        return frozen_base(case.params) ** exponent / var
    return 1.0 / var


def leading_term(case: AsymptoticCase, var: int) -> float:
    """
    Return the leading-order value of the inverse entry at the asymptotic
    variable var.

    Raises
    ------
    PreconditionError
        If var lies outside the regime.

    LimitConvergenceError
        If a one-sided limit does not settle.
    """

    case.check_variable(var)
    return leading_constant(case) * _scaling(case, var)


@dataclasses.dataclass(frozen=True)
class ProbeRow:
    var: int
    asymptotic: float
    quadrature: float
    ratio: float

    def as_row(self) -> Tuple[int, float, float, float]:
        return self.var, self.asymptotic, self.quadrature, self.ratio


@dataclasses.dataclass(frozen=True)
class ProbeResult:
    """
    Rows of a ratio probe and the fitted decay exponent of |ratio - 1|.

    For the exponential regimes the ratio is log|quadrature| / log|asymptotic|.
    """

    case: AsymptoticCase
    rows: Tuple[ProbeRow, ...]
    decay_exponent: float

    @property
    def ratios(self) -> List[float]:
        return [row.ratio for row in self.rows]


def _ratio(case: AsymptoticCase, asymptotic: float, quadrature: float) -> float:
    if case.kind.is_exponential:
        return math.log(abs(quadrature)) / math.log(abs(asymptotic))
    return quadrature / asymptotic


def fit_decay_exponent(variables: Sequence[int], ratios: Sequence[float]) -> float:
    """
    Return the slope of log|ratio - 1| against log var, or NaN when fewer
    than two usable points remain.
    """

    points = [(math.log(abs(v)), math.log(abs(r - 1)))
              for v, r in zip(variables, ratios)
              if r != 1 and math.isfinite(r)]
    if len(points) < 2:
        return float("nan")
    x, y = zip(*points)
    return float(np.polyfit(x, y, 1)[0])


def fit_exponential_rate(ns: Sequence[int], values: Sequence[float]) -> float:
    """
    Return the slope of log(|value| |n|) against n.

    On the left side this estimates log|r_1+(1)|.
    """

    x = np.asarray(ns, dtype=float)
    y = np.log(np.abs(np.asarray(values, dtype=float)) * np.abs(x))
    return float(np.polyfit(x, y, 1)[0])


def _probe_task(var: int, case: AsymptoticCase, quad: QuadratureSpec) -> ProbeRow:
    i, j, n0, n, m = case.entry_arguments(var)
    asymptotic = leading_term(case, var)
    quadrature = invk_entry(i, j, n0, n, m, case.params, quad).value
    return ProbeRow(var=var,
                    asymptotic=asymptotic,
                    quadrature=quadrature,
                    ratio=_ratio(case, asymptotic, quadrature))


def ratio_probe(case: AsymptoticCase,
                schedule: Sequence[int],
                quad: Optional[QuadratureSpec] = None,
                workers: Optional[int] = None) -> ProbeResult:
    """
    Compare leading terms with quadrature along a schedule.

    Parameters
    ----------
    case: AsymptoticCase
        The regime and its fixed arguments.

    schedule: sequence of int
        Strictly increasing values of the asymptotic variable (in absolute
        value for regimes where it runs to -inf).

    quad: QuadratureSpec, default=None
        Quadrature settings. Exponential regimes swap the absolute target
        for a purely relative one.

    workers: int, default=None
        Worker processes; see dimerint.core.parallel.

    Raises
    ------
    PreconditionError
        If a schedule point lies outside the regime.
    """

    schedule = list(schedule)
    ParameterValidators.validate_schedule([abs(v) for v in schedule])
    for var in schedule:
        case.check_variable(var)

    quad = quad or QuadratureSpec()
    if case.kind.is_exponential:
        quad = quad.replace(**EXPONENTIAL_QUADRATURE)

    # Fill the limit cache before fanning out
    leading_constant(case)

    task = functools.partial(_probe_task, case=case, quad=quad)
    rows = tuple(ordered_map(task, schedule, workers))
    exponent = fit_decay_exponent(schedule, [row.ratio for row in rows])
    logger.debug(f"Ratio probe {case.kind.value}: decay exponent {exponent:.3f}.")
    return ProbeResult(case=case, rows=rows, decay_exponent=exponent)
