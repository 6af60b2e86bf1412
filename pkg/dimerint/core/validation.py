"""
Invariant suites run by the validate subcommand.

The fast level checks the spectral identities, the printed root values, the
determinant-versus-enumeration counts, the closed-form coefficients against
the junction solve, the delta property and the closed forms against the
truncated solve. The full level adds the integral formula against window
inversion and the uniform lattice, the leading asymptotics along the
periodic direction, the exponential rate on the left, and the partition of
unity.

Every suite returns a pass/fail verdict with a one-line detail; an exception
raised inside a suite fails that suite only.

Version: 1.0.0
"""

import dataclasses
import logging
import math
import time

from typing import Callable, List, Sequence, Tuple

import numpy as np

from humanfriendly import format_timespan
from humanfriendly.tables import format_pretty_table

from dimerint.core.asymptotics import (AsymptoticCase, Regime,
                                       fit_exponential_rate, frozen_base,
                                       leading_term)
from dimerint.core.errors import DimerError
from dimerint.core.greens import (GreenCase, coefficients,
                                  coefficients_by_solve, green_matrix,
                                  operator_residual)
from dimerint.core.inverse import edge_probability, invk_entry, invk_uniform
from dimerint.core.lattice import (Arrow, FiniteWindow, WeightParams, black,
                                   neighbors, white)
from dimerint.core.oracle import (compare_window_entries, matching_count_check,
                                  truncated_green_solve, window_edge_probabilities,
                                  window_inverse)
from dimerint.core.quadrature import QuadratureSpec
from dimerint.core.spectral import roots, spectral_data, transfer_matrix
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

LEVELS = ("fast", "full")

STANDING = WeightParams(1.0, 4.0)
UNIFORM = WeightParams(1.0, 1.0)
SPECTRAL_PAIRS = (UNIFORM, STANDING, WeightParams(0.5, 3.0))

# A window entry agrees with the integral within WINDOW_RTOL relative error;
# entries below WINDOW_ATOL / WINDOW_RTOL in modulus are held to WINDOW_ATOL.
WINDOW_RTOL = 0.02
WINDOW_ATOL = 2e-3

# (dn, m) of the window probes relative to their source
WINDOW_OFFSETS = ((0, 0), (1, 0), (-1, 1), (2, -2), (3, 3))


@dataclasses.dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def as_row(self, timed: bool = False) -> Tuple[str, ...]:
        verdict = "pass" if self.passed else "FAIL"
        if timed:
            return self.name, verdict, format_timespan(self.seconds), self.detail
        return self.name, verdict, self.detail


Check = Callable[[QuadratureSpec], Tuple[bool, str]]


def _theta_grid(samples: int, offset: float = 0.0) -> np.ndarray:
    return 2 * np.pi * (np.arange(samples) + offset) / samples


def check_spectral_identities(quad: QuadratureSpec) -> Tuple[bool, str]:
    omega = np.exp(1j * _theta_grid(512))
    worst_product, worst_eigen = 0.0, 0.0
    for params in SPECTRAL_PAIRS:
        sd = spectral_data(omega, params)
        for side, pairs in ((1, ((sd.r1_plus, sd.v1_plus), (sd.r1_minus, sd.v1_minus))),
                            (2, ((sd.r2_plus, sd.v2_plus), (sd.r2_minus, sd.v2_minus)))):
            matrix = transfer_matrix(side, omega, params)
            plus, minus = roots(side, omega, params)
            worst_product = max(worst_product, float(np.max(np.abs(plus * minus - 1))))
            for r, v in pairs:
                applied = np.einsum("...ij,...j->...i", matrix, v)
                worst_eigen = max(worst_eigen,
                                  float(np.max(np.abs(applied - r[..., None] * v))))

    standing = np.min(np.abs(roots(1, omega, STANDING)[0]))
    uniform = np.min(np.abs(np.abs(roots(1, omega, UNIFORM)[0]) - 1))
    passed = (worst_product < 1e-10 and worst_eigen < 1e-10
              and standing > 1 and uniform < 1e-9)
    return passed, (f"|r+ r- - 1| {worst_product:.1e}, eigen residual {worst_eigen:.1e}, "
                    f"min |r1+| at (1,4) {standing:.4f}")


def check_printed_roots(quad: QuadratureSpec) -> Tuple[bool, str]:
    plus, minus = roots(1, 1.0, STANDING)
    expected = ((-7 - 3 * math.sqrt(5)) / 2, (-7 + 3 * math.sqrt(5)) / 2)
    error = max(abs(complex(plus) - expected[0]), abs(complex(minus) - expected[1]))
    return error < 1e-12, f"deviation {error:.1e}"


COUNT_WINDOWS = (FiniteWindow(0, 0, 0, 0),
                 FiniteWindow(0, 1, 0, 0),
                 FiniteWindow(0, 0, 0, 1),
                 FiniteWindow(0, 1, 0, 1),
                 FiniteWindow(-1, 0, 0, 2),
                 FiniteWindow(-1, 1, -1, 1))


def check_counting(quad: QuadratureSpec) -> Tuple[bool, str]:
    failures = []
    for params in SPECTRAL_PAIRS:
        for window in COUNT_WINDOWS:
            result = matching_count_check(window, params)
            if not result.agree:
                failures.append(f"{window} at a={params.a}, b={params.b}")
    return not failures, "; ".join(failures) or f"{len(COUNT_WINDOWS) * len(SPECTRAL_PAIRS)} windows agree"


SOURCES = (-3, -1, 0, 1, 2, 4)


def _test_omegas() -> np.ndarray:
    return np.exp(1j * _theta_grid(8, offset=0.5))


def check_coefficients(quad: QuadratureSpec) -> Tuple[bool, str]:
    omega = _test_omegas()
    worst = 0.0
    for params in (STANDING, UNIFORM):
        for n0 in SOURCES:
            case = GreenCase.for_source(n0)
            closed = coefficients(case, n0, omega, params)
            solved = coefficients_by_solve(case, n0, omega, params)
            for ours, theirs in ((closed.c, solved.c), (closed.d, solved.d)):
                ours, theirs = np.asarray(ours), np.asarray(theirs)
                scale = np.maximum(1.0, np.abs(theirs))
                worst = max(worst, float(np.max(np.abs(ours - theirs) / scale)))
    return worst < 1e-10, f"max relative deviation {worst:.1e}"


def check_delta_property(quad: QuadratureSpec) -> Tuple[bool, str]:
    omega = _test_omegas()
    worst = 0.0
    for params in (STANDING, UNIFORM):
        for n0 in SOURCES:
            for n in range(min(n0, 0) - 3, max(n0, 0) + 4):
                residual = operator_residual(n, n0, omega, params)
                worst = max(worst, float(np.max(np.abs(residual))))
    return worst < 1e-10, f"max residual {worst:.1e}"


def check_truncated_agreement(quad: QuadratureSpec) -> Tuple[bool, str]:
    N = 60
    worst = 0.0
    for params in (STANDING, UNIFORM):
        for n0 in SOURCES:
            for omega in _test_omegas():
                truncated = truncated_green_solve(n0, complex(omega), N, params)
                for n in range(-(N - 10), N - 9):
                    closed = green_matrix(n, n0, complex(omega), params)
                    reference = truncated.at(n)
                    scale = max(1.0, float(np.max(np.abs(reference))))
                    worst = max(worst, float(np.max(np.abs(closed - reference))) / scale)
    return worst < 1e-8, f"max deviation {worst:.1e} over 8 omega x 6 sources x 2 weights"


def window_probes() -> List[Tuple]:
    """
    Return twenty (white, black) probes at face separations |dn| + |m| from
    zero to six around sources on both sides of the interface.
    """

    probes = []
    for n0 in (-1, 1):
        source = black(Arrow.UP, n0, 0)
        for dn, m in WINDOW_OFFSETS:
            for arrow in (Arrow.UP, Arrow.DOWN):
                probes.append((white(arrow, n0 + dn, m), source))
    return probes


def check_window_agreement(quad: QuadratureSpec) -> Tuple[bool, str]:
    comparisons = compare_window_entries(window_probes(), STANDING, margin=20, right_margin=35,
                                         quad=quad)
    failures = [c for c in comparisons
                if c.error > max(WINDOW_RTOL * abs(c.integral_value), WINDOW_ATOL)]
    worst = max(c.error for c in comparisons)
    return not failures, f"{len(failures)} of {len(comparisons)} probes off, max error {worst:.2e}"


def check_uniform_collapse(quad: QuadratureSpec) -> Tuple[bool, str]:
    worst = 0.0
    for n0, n, m in ((1, 1, 0), (2, 0, 1), (-1, 2, -2), (0, -1, 3)):
        interface = invk_entry(Arrow.UP, Arrow.DOWN, n0, n, m, UNIFORM, quad).value
        uniform = invk_uniform(n0 - n, -m, quad)
        worst = max(worst, abs(interface - uniform))
    return worst < 1e-6, f"max deviation {worst:.1e}"


# (n0, n) for the three printed sub-cases along the periodic direction
COR1_CASES = ((1, 2), (-1, -2), (-1, 1))


def check_cor1_ratios(quad: QuadratureSpec) -> Tuple[bool, str]:
    worst = {200: 0.0, 1000: 0.0}
    for n0, n in COR1_CASES:
        case = AsymptoticCase(Regime.COR1, STANDING, n=n, n0=n0)
        for m in worst:
            value = invk_entry(Arrow.UP, Arrow.UP, n0, n, m, STANDING, quad).value
            worst[m] = max(worst[m], abs(value / leading_term(case, m) - 1))

    case = AsymptoticCase(Regime.COR1, STANDING, n=2, n0=1)
    constant = leading_term(case, 1) * 3 * math.pi
    passed = worst[200] < 0.05 and worst[1000] < 0.01 and abs(constant - 1) < 1e-4
    return passed, (f"|ratio - 1| {worst[200]:.2e} at m=200, {worst[1000]:.2e} at m=1000; "
                    f"3 pi C = {constant:.8f}")


def check_exponential_rate(quad: QuadratureSpec) -> Tuple[bool, str]:
    ns = (-12, -16, -20, -24)
    fine = quad.replace(abs_tol=1e-300, rel_tol=1e-9)
    values = [invk_entry(Arrow.UP, Arrow.UP, 1, n, 0, STANDING, fine).value for n in ns]
    rate = fit_exponential_rate(ns, values)
    expected = math.log(abs(frozen_base(STANDING)))
    error = abs(rate / expected - 1)
    return error < 0.02, f"fitted rate {rate:.4f} against {expected:.4f}"


def check_partition_of_unity(quad: QuadratureSpec) -> Tuple[bool, str]:
    window = FiniteWindow(-3, 3, -3, 3)
    inverse = window_inverse(window, STANDING)
    worst_window = 0.0
    for w in inverse.kasteleyn.whites:
        total = sum(window_edge_probabilities(inverse, w).values())
        worst_window = max(worst_window, abs(total - 1))

    centre = white(Arrow.DOWN, 0, 0)
    total = sum(edge_probability([(centre, b)], STANDING, quad) for b in neighbors(centre))
    worst_integral = abs(total - 1)
    passed = worst_window < 1e-12 and worst_integral < 1e-3
    return passed, f"window {worst_window:.1e}, integral {worst_integral:.1e}"


FAST_SUITES: Sequence[Tuple[str, Check]] = (
    ("spectral identities", check_spectral_identities),
    ("printed roots", check_printed_roots),
    ("matching counts", check_counting),
    ("coefficient solve", check_coefficients),
    ("delta property", check_delta_property),
    ("truncated solve", check_truncated_agreement),
)

FULL_SUITES: Sequence[Tuple[str, Check]] = FAST_SUITES + (
    ("window inverse", check_window_agreement),
    ("uniform collapse", check_uniform_collapse),
    ("periodic asymptotics", check_cor1_ratios),
    ("exponential rate", check_exponential_rate),
    ("partition of unity", check_partition_of_unity),
)


def run_suites(level: str = "fast",
               quad: QuadratureSpec = None) -> List[SuiteResult]:
    """
    Run the suites of one level and return their results in order.
    """

    ParameterValidators.validate_choice(level, "level", LEVELS)
    quad = quad or QuadratureSpec()
    suites = FAST_SUITES if level == "fast" else FULL_SUITES

    results = []
    for name, check in suites:
        logger.info(f"Running suite '{name}'.")
        start = time.perf_counter()
        try:
            passed, detail = check(quad)
        except (DimerError, ValueError, ArithmeticError) as e:
            passed, detail = False, f"{type(e).__name__}: {e}".replace("\n", " ")
        seconds = time.perf_counter() - start
        results.append(SuiteResult(name=name, passed=passed, detail=detail, seconds=seconds))
        logger.info(f"Suite '{name}' {'passed' if passed else 'failed'} "
                    f"in {format_timespan(seconds)}.")
    return results


def report_header(timed: bool = False) -> Tuple[str, ...]:
    # Wall-clock times only when asked, so repeated reports compare equal
    if timed:
        return "suite", "result", "time", "detail"
    return "suite", "result", "detail"


def format_report(results: Sequence[SuiteResult], timed: bool = False) -> str:
    return format_pretty_table([r.as_row(timed) for r in results],
                               column_names=list(report_header(timed)))
