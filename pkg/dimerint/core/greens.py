"""
Closed-form Green's functions of the Fourier-reduced interface operator.

For fixed omega the operator acts on a pair (G_up(n), G_down(n)) per column n
through the two rows

    row_up(n)   = G_up(n+1) - G_up(n) - (z_n / omega) G_down(n)
    row_down(n) = z_n G_up(n) + G_down(n) - G_down(n-1)

with z_n = z1 for n <= 0 and z_n = z2 for n > 0. The Green's function solves
row(n) = delta(n, n0) I. Its columns are piecewise combinations of the
transfer-matrix eigenmodes r^n v, with coefficients c_k (source column up) and
d_k (source column down). Sources n0 > 0 use the GT case, n0 <= 0 the LT case.

In both cases the coefficients are indexed the same way:

    index   GT mode          LT mode          region
    1       v1+ r1+^n        v1+ r1+^n        left
    2       v2+ r2+^n        v1+ r1+^n        middle
    3       v2- r2-^n        v1- r1-^n        middle
    4       v2- r2-^n        v2- r2-^n        right

The region boundaries are

    GT, j=up   : n <= 0 | 0 < n <= n0 | n > n0
    GT, j=down : n <= 0 | 0 < n <  n0 | n >= n0
    LT, j=up   : n <= n0 | n0 < n <= 0 | n > 0
    LT, j=down : n <  n0 | n0 <= n <= 0 | n > 0

At the source index the up column jumps by (1, 0) and the down column by
(0, 1), so neighbouring branches do not agree there. When a middle region is
empty its coefficients still solve the junction conditions and do not enter
any value.

The inverse Kasteleyn kernel uses a different normalisation of the same
solution; kernel_factor converts between the two.

Version: 1.0.0
"""

import dataclasses
import enum
import logging

from typing import Dict, List, Tuple, Union

import numpy as np

from dimerint.core.errors import (DegenerateCoefficientError,
                                  PreconditionError,
                                  SingularMatrixError)
from dimerint.core.lattice import Arrow, WeightParams
from dimerint.core.spectral import ArrayLike, SpectralData, spectral_data, z_funcs
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

# A denominator is vanishing when it is below this fraction of the terms it
# is built from. Near the edges of the a = b spectrum the terms are O(theta^2).
DEGENERACY_TOL = 1e-12


class GreenCase(enum.Enum):
    """
    GT for sources n0 > 0, LT for sources n0 <= 0.
    """

    GT = "GT"
    LT = "LT"

    @classmethod
    def for_source(cls, n0: int) -> "GreenCase":
        return cls.GT if n0 > 0 else cls.LT


class Region(enum.Enum):
    """
    The two far regions used by the horizontal asymptotics.
    """

    RIGHT_FAR = "right_far"
    LEFT_FAR = "left_far"


_LEFT, _MIDDLE, _RIGHT = (0,), (1, 2), (3,)


@dataclasses.dataclass(frozen=True)
class GreenCoeffs:
    """
    The eight coefficients of one case at fixed (n0, omega).

    c holds c_1..c_4 (or c'_1..c'_4 for LT), d holds d_1..d_4 (or d'_1..d'_4).
    """

    case: GreenCase
    n0: int
    omega: ArrayLike
    c: Tuple[ArrayLike, ArrayLike, ArrayLike, ArrayLike]
    d: Tuple[ArrayLike, ArrayLike, ArrayLike, ArrayLike]

    def column(self, j: Arrow) -> Tuple[ArrayLike, ...]:
        return self.c if j is Arrow.UP else self.d

    def as_dict(self) -> Dict[str, ArrayLike]:
        prime = "p" if self.case is GreenCase.LT else ""
        values = {}
        for k in range(4):
            values[f"c{prime}{k + 1}"] = self.c[k]
            values[f"d{prime}{k + 1}"] = self.d[k]
        return values


def as_arrow(value: Union[Arrow, str]) -> Arrow:
    if isinstance(value, Arrow):
        return value
    ParameterValidators.validate_choice(value, "sublattice index", ("up", "down"))
    return Arrow(value)


def _guard(name: str, *terms: ArrayLike) -> None:
    """
    Raise if the sum of terms vanishes exactly or cancels to within
    DEGENERACY_TOL of the sum of their moduli.
    """

    value = sum(terms)
    scale = sum(np.abs(term) for term in terms)
    cancelled = np.abs(value) <= DEGENERACY_TOL * scale
    if np.any(value == 0) or np.any(~np.isfinite(value)) or np.any(cancelled):
        raise DegenerateCoefficientError(name)


def _check_case(case: GreenCase, n0: int) -> None:
    ParameterValidators.validate_integer_parameter(n0, "n0")
    if case is GreenCase.GT and n0 <= 0:
        raise PreconditionError(f"Case GT requires n0 > 0, got n0 = {n0}.")
    if case is GreenCase.LT and n0 > 0:
        raise PreconditionError(f"Case LT requires n0 <= 0, got n0 = {n0}.")


def coefficients(case: Union[GreenCase, str],
                 n0: int,
                 omega: ArrayLike,
                 params: WeightParams) -> GreenCoeffs:
    """
    Evaluate the closed-form coefficients of one case.

    Parameters
    ----------
    case: GreenCase or str
        GT (requires n0 > 0) or LT (requires n0 <= 0).

    n0: int
        Column of the source.

    omega: complex or np.ndarray
        Point(s) on the unit circle.

    params: WeightParams
        Edge weights.

    Raises
    ------
    PreconditionError
        If n0 does not match the case.

    DegenerateCoefficientError
        If a denominator vanishes at some omega.
    """

    case = GreenCase(case)
    _check_case(case, n0)
    sd = spectral_data(omega, params)
    w = sd.omega
    z1, z2 = sd.z1, sd.z2
    big_r, small_r = sd.r2_plus, sd.r2_minus
    big_p, small_p = sd.r1_plus, sd.r1_minus

    # GT keeps r1+ on the left and r2- on the right, the modes that decay
    # away from the source. Every denominator is guarded before dividing.
    if case is GreenCase.GT:
        _guard("z2", params.a * w, -params.a)
        _guard("r2+ - r2-", big_r, -small_r)
        left = big_p * z1 * (1 - small_r)
        right = small_r * z2 * (big_p - 1)
        _guard("r1+ z1 (1 - r2-) + r2- z2 (r1+ - 1)", left, right)
        den = left + right
        cross = big_p * z1 * (1 - big_r) + big_r * z2 * (big_p - 1)

        # Up column: the (1, 0) jump at n0 fixes c2, the interface match at
        # n = 0 gives c1 and c3, and c4 continues c3 past the source
        c1 = w * (small_r - 1) * big_r ** (-n0) / den
        c2 = w * (small_r - 1) * big_r ** (-n0) / (z2 * (big_r - small_r))
        c3 = -c2 * cross / den
        c4 = w * (big_r - 1) * small_r ** (-n0) / (z2 * (big_r - small_r)) + c3

        # Down column: the same steps with the (0, 1) jump
        d1 = -z2 * big_r ** (-n0) / den
        d2 = big_r ** (-n0) / (small_r - big_r)
        d3 = -d2 * cross / den
        d4 = small_r ** (-n0) / (small_r - big_r) + d3
    else:
        # LT mirrors GT: the middle region splits r1+ and r1- on the left
        _guard("z1", params.a * w, -params.b)
        _guard("r1+ - r1-", big_p, -small_p)
        left = big_p * z1 * (small_r - 1)
        right = -small_r * z2 * (big_p - 1)
        _guard("r1+ z1 (r2- - 1) - r2- z2 (r1+ - 1)", left, right)
        den = left + right
        cross = small_r * z2 * (small_p - 1) - small_p * z1 * (small_r - 1)

        # Up column: the jump at n0 fixes c3, the interface gives c2 and c4,
        # and c1 continues c2 past the source
        c3 = w * (big_p - 1) * small_p ** (-n0) / (z1 * (big_p - small_p))
        c2 = c3 * cross / den
        c1 = c2 + w * (small_p - 1) * big_p ** (-n0) / (z1 * (big_p - small_p))
        c4 = -w * (big_p - 1) * small_p ** (-n0) / den

        # Down column
        d3 = small_p ** (-n0) / (small_p - big_p)
        d2 = d3 * cross / den
        d1 = d2 + big_p ** (-n0) / (small_p - big_p)
        d4 = z1 * small_p ** (-n0) / den

    return GreenCoeffs(case=case, n0=n0, omega=w, c=(c1, c2, c3, c4), d=(d1, d2, d3, d4))


def _modes(case: GreenCase, sd: SpectralData) -> List[Tuple[np.ndarray, ArrayLike]]:
    """
    Return (eigenvector, root) for coefficient indices 1..4.
    """

    if case is GreenCase.GT:
        return [(sd.v1_plus, sd.r1_plus),
                (sd.v2_plus, sd.r2_plus),
                (sd.v2_minus, sd.r2_minus),
                (sd.v2_minus, sd.r2_minus)]
    return [(sd.v1_plus, sd.r1_plus),
            (sd.v1_plus, sd.r1_plus),
            (sd.v1_minus, sd.r1_minus),
            (sd.v2_minus, sd.r2_minus)]


def _region(case: GreenCase, j: Arrow, n: int, n0: int) -> Tuple[int, ...]:
    # At n = n0 the up column takes the branch left of the source and the
    # down column the branch right of it
    if case is GreenCase.GT:
        if n <= 0:
            return _LEFT
        if n < n0 or (n == n0 and j is Arrow.UP):
            return _MIDDLE
        return _RIGHT

    if n < n0 or (n == n0 and j is Arrow.UP):
        return _LEFT
    if n <= 0:
        return _MIDDLE
    return _RIGHT


def _form(modes, coeffs: Tuple[ArrayLike, ...], indices: Tuple[int, ...], n: int) -> np.ndarray:
    total = 0
    for k in indices:
        vec, root = modes[k]
        total = total + np.asarray(coeffs[k] * root ** n)[..., None] * vec
    return total


def _column(case: GreenCase,
            j: Arrow,
            n: int,
            sd: SpectralData,
            coeffs: GreenCoeffs) -> np.ndarray:
    """
    Return (G_up_j(n), G_down_j(n)) with shape (..., 2).
    """

    indices = _region(case, j, n, coeffs.n0)
    return _form(_modes(case, sd), coeffs.column(j), indices, n)


def _basis_form(modes, indices: Tuple[int, ...], n: int) -> np.ndarray:
    """
    Return the 2 x 4 matrix mapping a coefficient vector to the value of the
    form built from the given indices at column n.
    """

    basis = np.zeros((2, 4), dtype=np.complex128)
    for k in indices:
        vec, root = modes[k]
        basis[:, k] = vec * root ** n
    return basis


def _row_up(later, earlier, n: int, z: complex, omega: complex) -> np.ndarray:
    """
    row_up(n) = later(n+1)_up - earlier(n)_up - (z / omega) earlier(n)_down.
    """

    return later(n + 1)[0] - earlier(n)[0] - (z / omega) * earlier(n)[1]


def _row_down(later, earlier, n: int, z: complex) -> np.ndarray:
    """
    row_down(n) = z later(n)_up + later(n)_down - earlier(n-1)_down.
    """

    return z * later(n)[0] + later(n)[1] - earlier(n - 1)[1]


def _solve_scalar(case: GreenCase,
                  n0: int,
                  omega: complex,
                  params: WeightParams) -> Tuple[np.ndarray, np.ndarray]:
    sd = spectral_data(omega, params)
    modes = _modes(case, sd)
    z1, z2 = complex(sd.z1), complex(sd.z2)

    def form(indices):
        return lambda n: _basis_form(modes, indices, n)

    left, middle, right = form(_LEFT), form(_MIDDLE), form(_RIGHT)

    # Junction across the interface between columns 0 and 1
    if case is GreenCase.GT:
        before, after = left, middle
        near, far, z = middle, right, z2
    else:
        before, after = middle, right
        near, far, z = left, middle, z1
    interface = [_row_up(after, before, 0, z1, omega),
                 _row_down(after, before, 1, z2)]

    # Rows straddling the source carry the unit jump: row_up(n0) for the up
    # column, row_down(n0) for the down column
    columns = []
    for j in (Arrow.UP, Arrow.DOWN):
        if j is Arrow.UP:
            source = [_row_up(far, near, n0, z, omega),
                      _row_down(far, near, n0 + 1, z)]
            rhs = np.array([0, 0, 1, 0], dtype=np.complex128)
        else:
            source = [_row_up(far, near, n0 - 1, z, omega),
                      _row_down(far, near, n0, z)]
            rhs = np.array([0, 0, 0, 1], dtype=np.complex128)

        system = np.vstack(interface + source)
        try:
            columns.append(np.linalg.solve(system, rhs))
        except np.linalg.LinAlgError as e:
            raise SingularMatrixError(
                f"Junction system for case {case.value}, n0={n0}, "
                f"omega={omega} is singular. Error: {e}") from e

    return columns[0], columns[1]


def coefficients_by_solve(case: Union[GreenCase, str],
                          n0: int,
                          omega: ArrayLike,
                          params: WeightParams) -> GreenCoeffs:
    """
    Determine the coefficients of one case from the junction conditions.

    Each eigenmode solves the homogeneous rows away from the junctions, so
    only four rows remain per source column: the two rows straddling the
    interface (homogeneous) and the two rows straddling the source (right-hand
    side equal to the unit jump). The resulting 4 x 4 system is solved
    densely; the closed forms are never consulted.

    Raises
    ------
    SingularMatrixError
        If the junction system is singular.
    """

    case = GreenCase(case)
    _check_case(case, n0)
    omega_arr = np.asarray(omega, dtype=np.complex128)

    c = np.empty((4,) + omega_arr.shape, dtype=np.complex128)
    d = np.empty((4,) + omega_arr.shape, dtype=np.complex128)
    for idx in np.ndindex(omega_arr.shape):
        c_col, d_col = _solve_scalar(case, n0, complex(omega_arr[idx]), params)
        c[(slice(None),) + idx] = c_col
        d[(slice(None),) + idx] = d_col

    if omega_arr.ndim == 0:
        c_out = tuple(complex(v) for v in c)
        d_out = tuple(complex(v) for v in d)
    else:
        c_out, d_out = tuple(c), tuple(d)
    return GreenCoeffs(case=case, n0=n0, omega=omega_arr, c=c_out, d=d_out)


def _coeffs_for(n0: int,
                omega: ArrayLike,
                params: WeightParams,
                method: str) -> GreenCoeffs:
    ParameterValidators.validate_choice(method, "method", ("closed", "solve"))
    case = GreenCase.for_source(n0)
    if method == "closed":
        return coefficients(case, n0, omega, params)
    return coefficients_by_solve(case, n0, omega, params)


def green_column(j: Union[Arrow, str],
                 n: int,
                 n0: int,
                 omega: ArrayLike,
                 params: WeightParams,
                 method: str = "closed",
                 coeffs: GreenCoeffs = None) -> np.ndarray:
    """
    Return (G_up_j, G_down_j) at column n with shape (..., 2).
    """

    j = as_arrow(j)
    ParameterValidators.validate_integer_parameter(n, "n")
    if coeffs is None:
        coeffs = _coeffs_for(n0, omega, params, method)
    sd = spectral_data(omega, params)
    return _column(coeffs.case, j, n, sd, coeffs)


def green_eval(i: Union[Arrow, str],
               j: Union[Arrow, str],
               n: int,
               n0: int,
               omega: ArrayLike,
               params: WeightParams,
               method: str = "closed") -> ArrayLike:
    """
    Evaluate one component G_ij(n, n0; omega).

    Parameters
    ----------
    i, j: Arrow or str
        Row (up/down equation) and source column.

    n, n0: int
        Evaluation and source columns.

    omega: complex or np.ndarray
        Point(s) on the unit circle.

    params: WeightParams
        Edge weights.

    method: str, default="closed"
        "closed" uses the closed-form coefficients, "solve" the junction
        solve.
    """

    i = as_arrow(i)
    column = green_column(j, n, n0, omega, params, method)
    return column[..., 0 if i is Arrow.UP else 1]


def green_matrix(n: int,
                 n0: int,
                 omega: ArrayLike,
                 params: WeightParams,
                 method: str = "closed") -> np.ndarray:
    """
    Return the 2 x 2 matrix [G_ij] with shape (..., 2, 2); rows i, columns j.
    """

    coeffs = _coeffs_for(n0, omega, params, method)
    up = green_column(Arrow.UP, n, n0, omega, params, coeffs=coeffs)
    down = green_column(Arrow.DOWN, n, n0, omega, params, coeffs=coeffs)
    return np.stack([up, down], axis=-1)


def operator_residual(n: int,
                      n0: int,
                      omega: ArrayLike,
                      params: WeightParams,
                      method: str = "closed") -> np.ndarray:
    """
    Apply the difference operator at column n to the Green's matrix and
    subtract delta(n, n0) I. Returns shape (..., 2, 2).
    """

    z1, z2 = z_funcs(omega, params)
    z_n = np.asarray(z1 if n <= 0 else z2)
    omega = np.asarray(omega, dtype=np.complex128)

    here = green_matrix(n, n0, omega, params, method)
    above = green_matrix(n + 1, n0, omega, params, method)
    below = green_matrix(n - 1, n0, omega, params, method)

    row_up = above[..., 0, :] - here[..., 0, :] - np.asarray(z_n / omega)[..., None] * here[..., 1, :]
    row_down = z_n[..., None] * here[..., 0, :] + here[..., 1, :] - below[..., 1, :]
    residual = np.stack([row_up, row_down], axis=-2)
    if n == n0:
        residual = residual - np.eye(2)
    return residual


def kernel_factor(i: Union[Arrow, str],
                  j: Union[Arrow, str],
                  omega: ArrayLike) -> ArrayLike:
    """
    Return the factor turning G_ij into the Fourier kernel of the inverse
    Kasteleyn operator: 1 on the diagonal, -omega for (up, down) and
    -1/omega for (down, up).
    """

    i, j = as_arrow(i), as_arrow(j)
    omega = np.asarray(omega, dtype=np.complex128)
    if i is j:
        return np.ones_like(omega)
    if i is Arrow.UP:
        return -omega
    return -1 / omega


def kernel_eval(i: Union[Arrow, str],
                j: Union[Arrow, str],
                n: int,
                n0: int,
                omega: ArrayLike,
                params: WeightParams) -> ArrayLike:
    """
    Return the Fourier kernel Phi_ij(n, n0; omega) whose m-th coefficient is
    K^-1(w_i(n, m), b_j(n0, 0)).
    """

    return kernel_factor(i, j, omega) * green_eval(i, j, n, n0, omega, params)


def region_root(region: Union[Region, str],
                omega: ArrayLike,
                params: WeightParams) -> ArrayLike:
    """
    Return the root whose n-th power is stripped off in a far region:
    r2- on the right, r1+ on the left.
    """

    region = Region(region)
    sd = spectral_data(omega, params)
    return sd.r2_minus if region is Region.RIGHT_FAR else sd.r1_plus


def little_g(i: Union[Arrow, str],
             j: Union[Arrow, str],
             region: Union[Region, str],
             n0: int,
             omega: ArrayLike,
             params: WeightParams,
             kernel: bool = False) -> ArrayLike:
    """
    Return g with G_ij(n) = g r^n throughout a far region.

    RIGHT_FAR is the right region (n > n0 for GT, n > 0 for LT) with
    r = r2-; LEFT_FAR is the left region (n < 0 for GT, n < n0 for LT) with
    r = r1+.

    Parameters
    ----------
    kernel: bool, default=False
        If True, return the little-g of the inverse Kasteleyn kernel instead
        of the operator-normalised Green's function.
    """

    i, j = as_arrow(i), as_arrow(j)
    region = Region(region)
    coeffs = coefficients(GreenCase.for_source(n0), n0, omega, params)
    sd = spectral_data(omega, params)

    if region is Region.RIGHT_FAR:
        k, vec = 3, sd.v2_minus
    else:
        k, vec = 0, sd.v1_plus

    g = coeffs.column(j)[k] * vec[..., 0 if i is Arrow.UP else 1]
    if kernel:
        g = kernel_factor(i, j, omega) * g
    return g


def interface_coeff_split(omega: ArrayLike,
                          params: WeightParams,
                          gt_sources: Tuple[int, int] = (1, 2),
                          lt_sources: Tuple[int, int] = (0, -1)) -> Tuple[ArrayLike, ...]:
    """
    Split c_4 and c'_1 into their n0-independent parts.

    c_4(n0)  = r2-^(-n0) c41  + r2+^(-n0) c42
    c'_1(n0) = r1+^(-n0) c1p1 + r1-^(-n0) c1p2

    Each pair is recovered from two source columns by Cramer's rule.

    Returns
    -------
    (c41, c42, c1p1, c1p2)

    Raises
    ------
    SingularMatrixError
        If the two sources give a singular 2 x 2 system (r+ = r-).
    """

    sd = spectral_data(omega, params)

    def split(case, sources, first_root, second_root, name):
        s, t = sources
        if s == t:
            raise PreconditionError(f"Split for {name} needs two distinct sources.")
        vs = coefficients(case, s, omega, params).c
        vt = coefficients(case, t, omega, params).c
        k = 3 if case is GreenCase.GT else 0
        a11, a12 = first_root ** (-s), second_root ** (-s)
        a21, a22 = first_root ** (-t), second_root ** (-t)
        det = a11 * a22 - a12 * a21
        scale = np.abs(a11 * a22) + np.abs(a12 * a21)
        if np.any(np.abs(det) <= DEGENERACY_TOL * scale):
            raise SingularMatrixError(f"Split of {name} is singular at some omega.")
        x1 = (vs[k] * a22 - a12 * vt[k]) / det
        x2 = (a11 * vt[k] - a21 * vs[k]) / det
        return x1, x2

    c41, c42 = split(GreenCase.GT, gt_sources, sd.r2_minus, sd.r2_plus, "c4")
    c1p1, c1p2 = split(GreenCase.LT, lt_sources, sd.r1_plus, sd.r1_minus, "c'1")
    return c41, c42, c1p1, c1p2
