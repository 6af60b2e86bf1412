"""
Inverse Kasteleyn entries of the interface lattice and of its periodic
references, plus edge probabilities and correlations built from them.

For the interface lattice the entry K^-1(w_i(n, m), b_j(n0, 0)) is the m-th
Fourier coefficient of the kernel Phi_ij(n, n0; omega):

    K^-1 = (1/2pi) * integral over theta of Phi_ij(n, n0; e^{i theta}) e^{i theta m}

The lattice is invariant under m-translations, so the black vertex is placed
in row 0 without loss of generality.

For the periodic lattice with vertical weights (a, alpha) in every column the
z-integral is done by residues. With lambda_-, lambda_+ the roots of
lambda^2 - c lambda + 1, c = 2 + 2 a alpha - a^2 omega - alpha^2 / omega, and

    I_k = lambda_-^|k| / (lambda_- - lambda_+),

the kernel of K^-1(w_i(n, m), b_j(0, 0)) is

    up/up     : I_n - I_{n-1}
    down/down : I_{n+1} - I_n
    up/down   : -(a omega - alpha) I_n
    down/up   : -(alpha / omega - a) I_n

and the remaining theta-integral is done numerically.

Version: 1.0.0
"""

import dataclasses
import functools
import logging

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from dimerint.core.errors import PreconditionError, SizeGuardError
from dimerint.core.greens import as_arrow, kernel_eval
from dimerint.core.lattice import (Arrow, VertexId, WeightParams,
                                   edge_weight, kasteleyn_entry)
from dimerint.core.parallel import ordered_map
from dimerint.core.quadrature import QuadratureSpec, circle_average
from dimerint.core.spectral import reciprocal_pair
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

# Largest edge set accepted by edge_probability
MAX_EDGE_SET = 4

# Entries whose imaginary part exceeds this fraction of max(1, |value|) are flagged
IMAG_RESIDUAL_TOL = 1e-8

INVK_HEADER = ("i", "j", "n0", "n", "m", "value", "imag_residual")

Edge = Tuple[VertexId, VertexId]


@dataclasses.dataclass(frozen=True)
class InvKEntry:
    """
    One inverse Kasteleyn entry K^-1(w_i(n, m), b_j(n0, 0)).
    """

    i: Arrow
    j: Arrow
    n0: int
    n: int
    m: int
    value: float
    imag_residual: float

    def as_row(self) -> Tuple:
        return (self.i.value, self.j.value, self.n0, self.n, self.m,
                self.value, self.imag_residual)


def _oscillation_spec(m: int, quad: QuadratureSpec) -> QuadratureSpec:
    """
    Start with at least one panel per two oscillations of e^{i theta m}.
    """

    panels = min(max(quad.initial_panels, abs(m) // 2), quad.max_panels)
    if panels == quad.initial_panels:
        return quad
    return quad.replace(initial_panels=panels)


def _average(integrand, m: int, quad: QuadratureSpec) -> Tuple[float, float]:
    value, _ = circle_average(integrand, _oscillation_spec(m, quad))
    return value.real, abs(value.imag)


def _check_imaginary(label: str, value: float, residual: float) -> None:
    if residual > IMAG_RESIDUAL_TOL * max(1.0, abs(value)):
        logger.warning(f"{label} has imaginary residual {residual:.3e} "
                       f"against value {value:.6e}.")


def invk_entry(i: Union[Arrow, str],
               j: Union[Arrow, str],
               n0: int,
               n: int,
               m: int,
               params: WeightParams,
               quad: Optional[QuadratureSpec] = None) -> InvKEntry:
    """
    Evaluate K^-1(w_i(n, m), b_j(n0, 0)) on the interface lattice.

    Parameters
    ----------
    i, j: Arrow or str
        White and black sublattice labels.

    n0: int
        Column of the black vertex. n0 > 0 uses the GT Green's function,
        n0 <= 0 the LT one.

    n, m: int
        Column and row of the white vertex.

    params: WeightParams
        Edge weights.

    quad: QuadratureSpec, default=None
        Quadrature settings; defaults apply when None.

    Raises
    ------
    QuadratureError
        If the panel budget is exhausted.

    DegenerateCoefficientError
        If a coefficient denominator vanishes at a quadrature node.
    """

    i, j = as_arrow(i), as_arrow(j)
    for value, name in ((n0, "n0"), (n, "n"), (m, "m")):
        ParameterValidators.validate_integer_parameter(value, name)
    quad = quad or QuadratureSpec()

    if n0 == 0:
        logger.debug("Source column n0 = 0 is handled by the LT case.")

    def integrand(theta: np.ndarray) -> np.ndarray:
        omega = np.exp(1j * theta)
        return kernel_eval(i, j, n, n0, omega, params) * np.exp(1j * m * theta)

    value, residual = _average(integrand, m, quad)
    _check_imaginary(f"K^-1(w_{i.value}({n},{m}), b_{j.value}({n0},0))", value, residual)
    return InvKEntry(i=i, j=j, n0=n0, n=n, m=m, value=value, imag_residual=residual)


def _invk_task(args, params: WeightParams, quad: QuadratureSpec) -> InvKEntry:
    i, j, n0, n, m = args
    return invk_entry(i, j, n0, n, m, params, quad)


def invk_sweep(i: Union[Arrow, str],
               j: Union[Arrow, str],
               n0: int,
               ns: Sequence[int],
               ms: Sequence[int],
               params: WeightParams,
               quad: Optional[QuadratureSpec] = None,
               workers: Optional[int] = None) -> List[InvKEntry]:
    """
    Evaluate invk_entry over the rectangle ns x ms, ordered by n then m.
    """

    i, j = as_arrow(i), as_arrow(j)
    quad = quad or QuadratureSpec()
    tasks = [(i, j, n0, n, m) for n in ns for m in ms]
    task = functools.partial(_invk_task, params=params, quad=quad)
    return ordered_map(task, tasks, workers)


def periodic_kernel(i: Union[Arrow, str],
                    j: Union[Arrow, str],
                    n: int,
                    omega: np.ndarray,
                    a: float,
                    alpha: float) -> np.ndarray:
    """
    Return the Fourier kernel of K^-1(w_i(n, m), b_j(0, 0)) for the periodic
    lattice with vertical weights (a, alpha) in every column.
    """

    i, j = as_arrow(i), as_arrow(j)
    omega = np.asarray(omega, dtype=np.complex128)
    c = 2 + 2 * a * alpha - a * a * omega - alpha * alpha / omega
    lam_plus, lam_minus = reciprocal_pair(c)
    gap = lam_minus - lam_plus

    def resolvent(k: int) -> np.ndarray:
        return lam_minus ** abs(k) / gap

    if i is Arrow.UP and j is Arrow.UP:
        return resolvent(n) - resolvent(n - 1)
    if i is Arrow.DOWN and j is Arrow.DOWN:
        return resolvent(n + 1) - resolvent(n)
    if i is Arrow.UP:
        return -(a * omega - alpha) * resolvent(n)
    return -(alpha / omega - a) * resolvent(n)


def invk_periodic(i: Union[Arrow, str],
                  j: Union[Arrow, str],
                  n: int,
                  m: int,
                  params: WeightParams,
                  quad: Optional[QuadratureSpec] = None) -> float:
    """
    Evaluate K^-1(w_i(n, m), b_j(0, 0)) on the periodic lattice carrying the
    (a, b) pattern of the left half everywhere.

    This is the bulk reference for the left half of the interface lattice;
    with a = b = 1 it is the uniform lattice.
    """

    i, j = as_arrow(i), as_arrow(j)
    ParameterValidators.validate_integer_parameter(n, "n")
    ParameterValidators.validate_integer_parameter(m, "m")
    quad = quad or QuadratureSpec()

    def integrand(theta: np.ndarray) -> np.ndarray:
        omega = np.exp(1j * theta)
        return periodic_kernel(i, j, n, omega, params.a, params.b) * np.exp(1j * m * theta)

    value, residual = _average(integrand, m, quad)
    _check_imaginary(f"periodic K^-1(w_{i.value}({n},{m}), b_{j.value}(0,0))", value, residual)
    return value


def invk_uniform(n: int,
                 m: int,
                 quad: Optional[QuadratureSpec] = None) -> float:
    """
    Evaluate K~^-1(w_up(0, 0), b_down(n, m)) on the uniform lattice
    (all weights one), by residues in z and quadrature in theta.
    """

    ParameterValidators.validate_integer_parameter(n, "n")
    ParameterValidators.validate_integer_parameter(m, "m")
    return invk_periodic(Arrow.UP, Arrow.DOWN, -n, -m, WeightParams(1.0, 1.0), quad)


def kernel_entry(white: VertexId,
                 black: VertexId,
                 params: WeightParams,
                 quad: Optional[QuadratureSpec] = None) -> float:
    """
    Return K^-1(white, black) on the interface lattice.
    """

    if white.is_black or not black.is_black:
        raise PreconditionError(f"Expected a (white, black) pair, got ({white}, {black}).")
    return invk_entry(white.sublattice.arrow,
                      black.sublattice.arrow,
                      black.n,
                      white.n,
                      white.m - black.m,
                      params,
                      quad).value


def _check_edges(edges: Sequence[Edge]) -> List[Edge]:
    edges = list(edges)
    if not 1 <= len(edges) <= MAX_EDGE_SET:
        raise SizeGuardError(
            f"Edge sets must contain between 1 and {MAX_EDGE_SET} edges, got {len(edges)}.")
    for w, b in edges:
        if w.is_black or not b.is_black:
            raise PreconditionError(f"Edge ({w}, {b}) is not a (white, black) pair.")
        if edge_weight(w, b, WeightParams(1.0, 1.0)) is None:
            raise PreconditionError(f"Vertices {w} and {b} are not adjacent.")
    return edges


def edge_probability(edges: Sequence[Edge],
                     params: WeightParams,
                     quad: Optional[QuadratureSpec] = None) -> float:
    """
    Return the probability that every edge of the set is covered.

    The probability is prod_k K(b_k, w_k) * det[K^-1(w_k, b_l)].

    Parameters
    ----------
    edges: sequence of (white, black) VertexId pairs
        Between 1 and 4 adjacent pairs.

    Raises
    ------
    PreconditionError
        If a pair is not an adjacent (white, black) pair.

    SizeGuardError
        If the set is empty or has more than 4 edges.
    """

    edges = _check_edges(edges)
    quad = quad or QuadratureSpec()

    minor = np.empty((len(edges), len(edges)))
    for row, (w, _) in enumerate(edges):
        for col, (_, b) in enumerate(edges):
            minor[row, col] = kernel_entry(w, b, params, quad)

    weight = np.prod([kasteleyn_entry(b, w, params) for w, b in edges])
    return float(weight * np.linalg.det(minor))


def edge_correlation(first: Edge,
                     second: Edge,
                     params: WeightParams,
                     quad: Optional[QuadratureSpec] = None) -> float:
    """
    Return P(first and second) - P(first) P(second).
    """

    joint = edge_probability([first, second], params, quad)
    return joint - edge_probability([first], params, quad) * edge_probability([second], params, quad)
