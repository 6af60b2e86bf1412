"""
Brute-force validators for the closed forms: finite-window inversion of the
Kasteleyn matrix, a truncated solve of the Fourier-reduced difference system,
and determinant-versus-enumeration counting checks.

Window inversion
----------------
K~ restricted to a window has white rows and black columns, so its inverse
has black rows and white columns. WindowInverse stores and addresses it the
other way round, entry(w, b) = K^-1(w, b). Small windows are inverted densely;
above dense_limit vertices the matrix is factorised once with a sparse LU and
each requested black column is obtained by a transposed solve and cached.

Truncated solve
---------------
The difference system is restricted to columns [-N, N] with zero values at
+-(N + 1). Unknowns are interleaved as (G_up(n), G_down(n)) so the matrix is
banded with two sub- and two super-diagonals and is handed to LAPACK through
scipy.linalg.solve_banded.

Version: 1.0.0
"""

import dataclasses
import functools
import logging

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph
import scipy.sparse.linalg

from dimerint.core.errors import PreconditionError, SingularMatrixError
from dimerint.core.inverse import kernel_entry
from dimerint.core.lattice import (FiniteWindow, SparseKasteleynMatrix, VertexId,
                                   WeightParams, build_window_matrix,
                                   enumerate_matchings,
                                   neighbors, MAX_ENUMERATION_VERTICES)
from dimerint.core.parallel import ordered_map
from dimerint.core.quadrature import QuadratureSpec
from dimerint.core.spectral import z_funcs
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

# Windows with more vertices than this use the sparse LU path
DENSE_LIMIT = 4000

# Dense inversions whose one-norm condition exceeds this are logged as warnings
CONDITION_WARNING = 1e12

# Truncated solves need this many columns of clearance around the source
TRUNCATION_CLEARANCE = 10

# Relative tolerance of matching_count_check
COUNT_TOLERANCE = 1e-12

Probe = Tuple[VertexId, VertexId]


class WindowInverse:
    """
    The inverse of a window Kasteleyn matrix, addressed by (white, black).

    Parameters
    ----------
    window: FiniteWindow
        The window that was inverted.

    kasteleyn: SparseKasteleynMatrix
        Its Kasteleyn matrix.

    dense_limit: int, default=DENSE_LIMIT
        Largest vertex count inverted densely.

    Raises
    ------
    PreconditionError
        If the window has different white and black counts.

    SingularMatrixError
        If the window admits no perfect matching.
    """

    def __init__(self,
                 window: FiniteWindow,
                 kasteleyn: SparseKasteleynMatrix,
                 dense_limit: int = DENSE_LIMIT):

        if not kasteleyn.is_square:
            raise PreconditionError(
                f"Window {window} has {len(kasteleyn.whites)} white and "
                f"{len(kasteleyn.blacks)} black vertices and cannot be inverted.")

        self._window = window
        self._kasteleyn = kasteleyn
        self._dense = None
        self._lu = None
        self._columns: Dict[VertexId, np.ndarray] = {}
        self._condition = None

        self._check_matching()
        if window.vertex_count <= dense_limit:
            self._invert_dense()
        else:
            self._factorise_sparse()

    @property
    def window(self) -> FiniteWindow:
        return self._window

    @property
    def kasteleyn(self) -> SparseKasteleynMatrix:
        return self._kasteleyn

    @property
    def is_dense(self) -> bool:
        return self._dense is not None

    def _check_matching(self) -> None:
        """
        Raise SingularMatrixError unless the window has a perfect matching.

        With positive weights det K~ is a signed sum of matching weights that
        never cancel, so K~ is singular exactly when its bipartite graph has
        no perfect matching, i.e. when its structural rank is short.
        """

        matrix = self._kasteleyn.matrix
        rank = scipy.sparse.csgraph.structural_rank(matrix.tocsr())
        if rank < matrix.shape[0]:
            raise SingularMatrixError(
                f"Window {self._window} has no perfect matching "
                f"(structural rank {rank} of {matrix.shape[0]}).")

    def _invert_dense(self) -> None:
        dense = self._kasteleyn.matrix.toarray()
        try:
            inverse = scipy.linalg.inv(dense)
        except np.linalg.LinAlgError as e:
            raise SingularMatrixError(f"Window matrix of {self._window} is singular: {e}")

        condition = np.linalg.cond(dense, 1)
        if not np.isfinite(condition) or condition > CONDITION_WARNING:
            logger.warning(f"Window matrix of {self._window} is ill-conditioned "
                           f"(condition {condition:.3e}); entries may be inaccurate.")

        logger.debug(f"Inverted {dense.shape[0]} x {dense.shape[1]} window matrix densely.")
        # Rows white, columns black
        self._dense = inverse.T
        self._condition = float(condition)

    def _factorise_sparse(self) -> None:
        try:
            self._lu = scipy.sparse.linalg.splu(self._kasteleyn.matrix.tocsc())
        except RuntimeError as e:
            raise SingularMatrixError(f"Window matrix of {self._window} is singular: {e}")
        logger.debug(f"Factorised {self._kasteleyn.matrix.shape[0]}-row window matrix with splu.")

    def column(self, black: VertexId) -> np.ndarray:
        """
        Return K^-1(., black) over the window whites, in window order.
        """

        if black not in self._kasteleyn.black_index:
            raise PreconditionError(f"Black vertex {black} is not in window {self._window}.")
        k = self._kasteleyn.black_index[black]
        if self._dense is not None:
            return self._dense[:, k]

        if black not in self._columns:
            rhs = np.zeros(len(self._kasteleyn.blacks))
            rhs[k] = 1.0
            self._columns[black] = self._lu.solve(rhs, trans="T")
        return self._columns[black]

    def entry(self, white: VertexId, black: VertexId) -> float:
        """
        Return K^-1(white, black) for the window.
        """

        if white not in self._kasteleyn.white_index:
            raise PreconditionError(f"White vertex {white} is not in window {self._window}.")
        return float(self.column(black)[self._kasteleyn.white_index[white]])

    @property
    def condition_estimate(self) -> float:
        """
        One-norm condition number of the window matrix; estimated with
        onenormest on the sparse path.
        """

        if self._condition is None:
            matrix = self._kasteleyn.matrix.tocsc()
            size = matrix.shape[0]
            inverse = scipy.sparse.linalg.LinearOperator(
                (size, size),
                matvec=self._lu.solve,
                rmatvec=lambda x: self._lu.solve(x, trans="T"),
                dtype=np.float64)
            self._condition = float(scipy.sparse.linalg.onenormest(matrix)
                                    * scipy.sparse.linalg.onenormest(inverse))
        return self._condition

    def residual(self) -> float:
        """
        Return max |K~ K~^-1 - I| over the inverse columns computed so far
        (all of them on the dense path).
        """

        matrix = self._kasteleyn.matrix
        if self._dense is not None:
            product = matrix.T @ self._dense
            return float(np.max(np.abs(product - np.eye(product.shape[0]))))

        worst = 0.0
        for black, column in self._columns.items():
            product = matrix.T @ column
            product[self._kasteleyn.black_index[black]] -= 1.0
            worst = max(worst, float(np.max(np.abs(product))))
        return worst


def window_inverse(window: FiniteWindow,
                   params: WeightParams,
                   dense_limit: int = DENSE_LIMIT) -> WindowInverse:
    """
    Build and invert the Kasteleyn matrix of a window.
    """

    ParameterValidators.validate_integer_parameter(dense_limit, "dense_limit", min_val=0)
    return WindowInverse(window, build_window_matrix(window, params), dense_limit)


def window_edge_probabilities(inverse: WindowInverse,
                              white: VertexId) -> Dict[VertexId, float]:
    """
    Return the probability of each window edge at a white vertex, keyed by
    the black endpoint. The values sum to one.
    """

    if white.is_black or not inverse.window.contains(white):
        raise PreconditionError(f"{white} is not a white vertex of window {inverse.window}.")

    kasteleyn = inverse.kasteleyn
    result = {}
    for b in neighbors(white):
        if b in kasteleyn.black_index:
            result[b] = kasteleyn.entry(white, b) * inverse.entry(white, b)
    return result


@dataclasses.dataclass(frozen=True)
class EntryComparison:
    white: VertexId
    black: VertexId
    window_value: float
    integral_value: float

    @property
    def error(self) -> float:
        return abs(self.window_value - self.integral_value)


def probe_window(probes: Sequence[Probe],
                 margin: int,
                 right_margin: Optional[int] = None,
                 staircase: bool = False) -> FiniteWindow:
    """
    Return the window spanning every probe vertex padded by margin faces,
    with a staircase left boundary when asked.
    """

    vertices = [v for probe in probes for v in probe]
    if not vertices:
        raise PreconditionError("At least one probe is required.")
    ns = [v.n for v in vertices]
    ms = [v.m for v in vertices]
    return FiniteWindow.around(min(ns), max(ns), min(ms), max(ms), margin, right_margin,
                               staircase=staircase)


def _integral_task(probe: Probe, params: WeightParams, quad: QuadratureSpec) -> float:
    white, black = probe
    return kernel_entry(white, black, params, quad)


def integral_entries(probes: Sequence[Probe],
                     params: WeightParams,
                     quad: Optional[QuadratureSpec] = None,
                     workers: Optional[int] = None) -> List[float]:
    task = functools.partial(_integral_task, params=params, quad=quad or QuadratureSpec())
    return ordered_map(task, list(probes), workers)


def compare_window_entries(probes: Sequence[Probe],
                           params: WeightParams,
                           margin: int,
                           right_margin: Optional[int] = None,
                           quad: Optional[QuadratureSpec] = None,
                           reference: Optional[Sequence[float]] = None,
                           workers: Optional[int] = None) -> List[EntryComparison]:
    """
    Compare window entries against the integral formula for a set of
    (white, black) probes.

    When b - a > 2 the window gets a staircase left boundary matching the
    frozen bricks; a plain rectangle does not converge there.

    Parameters
    ----------
    reference: sequence of float, default=None
        Precomputed integral values in probe order; computed when None.
    """

    probes = list(probes)
    if reference is None:
        reference = integral_entries(probes, params, quad, workers)

    window = probe_window(probes, margin, right_margin, staircase=params.strong_interface)
    inverse = window_inverse(window, params)
    return [EntryComparison(white=w,
                            black=b,
                            window_value=inverse.entry(w, b),
                            integral_value=value)
            for (w, b), value in zip(probes, reference)]


def window_convergence(probes: Sequence[Probe],
                       params: WeightParams,
                       margins: Sequence[int] = (10, 15, 20),
                       quad: Optional[QuadratureSpec] = None,
                       workers: Optional[int] = None) -> List[Tuple[int, float]]:
    """
    Return (margin, max error against the integral) for each margin.
    """

    probes = list(probes)
    reference = integral_entries(probes, params, quad, workers)
    rows = []
    for margin in margins:
        ParameterValidators.validate_integer_parameter(margin, "margin", min_val=0)
        comparisons = compare_window_entries(probes, params, margin, reference=reference)
        rows.append((margin, max(c.error for c in comparisons)))
        logger.debug(f"Window margin {margin}: max error {rows[-1][1]:.3e}.")
    return rows


@dataclasses.dataclass(frozen=True)
class TruncatedGreen:
    """
    Solution of the truncated difference system.

    values[k] is the 2 x 2 matrix G(n, n0) at n = ns[k], rows i, columns j.
    """

    n0: int
    omega: complex
    ns: np.ndarray
    values: np.ndarray

    def at(self, n: int) -> np.ndarray:
        return self.values[n - int(self.ns[0])]


def truncated_green_solve(n0: int,
                          omega: complex,
                          N: int,
                          params: WeightParams) -> TruncatedGreen:
    """
    Solve the difference system on columns [-N, N] with zero closure.

    Parameters
    ----------
    n0: int
        Source column.

    omega: complex
        Point on the unit circle.

    N: int
        Half-width of the truncation; at least |n0| + 10.

    params: WeightParams
        Edge weights.

    Raises
    ------
    PreconditionError
        If N is too small for the source column.

    SingularMatrixError
        If the banded system is singular.
    """

    ParameterValidators.validate_integer_parameter(n0, "n0")
    ParameterValidators.validate_unit_complex(omega, "omega")
    ParameterValidators.validate_integer_parameter(N, "N")
    if N < abs(n0) + TRUNCATION_CLEARANCE:
        raise PreconditionError(
            f"Truncation N = {N} needs at least |n0| + {TRUNCATION_CLEARANCE} = "
            f"{abs(n0) + TRUNCATION_CLEARANCE} columns.")

    omega = complex(omega)
    z1, z2 = (complex(z) for z in z_funcs(omega, params))
    size = 2 * (2 * N + 1)

    # Banded storage: ab[2 + row - col, col]
    ab = np.zeros((5, size), dtype=np.complex128)

    def put(row: int, col: int, value: complex) -> None:
        ab[2 + row - col, col] = value

    for n in range(-N, N + 1):
        k = n + N
        z = z1 if n <= 0 else z2
        up, down = 2 * k, 2 * k + 1
        if n + 1 <= N:
            put(up, 2 * (k + 1), 1.0)
        put(up, up, -1.0)
        put(up, down, -z / omega)
        put(down, up, z)
        put(down, down, 1.0)
        if n - 1 >= -N:
            put(down, 2 * (k - 1) + 1, -1.0)

    rhs = np.zeros((size, 2), dtype=np.complex128)
    rhs[2 * (n0 + N), 0] = 1.0
    rhs[2 * (n0 + N) + 1, 1] = 1.0

    try:
        solution = scipy.linalg.solve_banded((2, 2), ab, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"Truncated system at omega = {omega} is singular: {e}")

    values = solution.reshape(2 * N + 1, 2, 2)
    return TruncatedGreen(n0=n0, omega=omega, ns=np.arange(-N, N + 1), values=values)


@dataclasses.dataclass(frozen=True)
class MatchingCheck:
    det_abs: float
    enum_weighted: float
    agree: bool


def matching_count_check(window: FiniteWindow,
                         params: WeightParams,
                         max_vertices: int = MAX_ENUMERATION_VERTICES) -> MatchingCheck:
    """
    Compare |det K~| of a window with the weighted enumeration of its perfect
    matchings.

    Raises
    ------
    SizeGuardError
        If the window exceeds the enumeration guard.
    """

    _, weighted = enumerate_matchings(window, params, max_vertices)
    kasteleyn = build_window_matrix(window, params)

    if kasteleyn.is_square:
        sign, logdet = np.linalg.slogdet(kasteleyn.matrix.toarray())
        det_abs = 0.0 if sign == 0 else float(np.exp(logdet))
    else:
        det_abs = 0.0

    if weighted == 0:
        agree = det_abs <= COUNT_TOLERANCE
    else:
        agree = abs(det_abs - weighted) / abs(weighted) < COUNT_TOLERANCE
    return MatchingCheck(det_abs=det_abs, enum_weighted=float(weighted), agree=bool(agree))
