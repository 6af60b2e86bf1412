"""
Transfer-matrix spectral data of the interface lattice.

After Fourier transforming in the periodic direction, the difference operator
on either side of the interface advances the pair (G_up, G_down) one column
at a time with the transfer matrix

    M_i(omega) = [[1, z_i / omega], [-z_i, 1 - z_i^2 / omega]],

where z_1 = a omega - b on the left (n <= 0) and z_2 = a (omega - 1) on the
right (n > 0). det M_i = 1, so the eigenvalues r_{i,+} and r_{i,-} are
reciprocal; they are labelled so that |r_{i,+}| >= |r_{i,-}|.

Every function accepts a scalar or a numpy array of omega values.

Version: 1.0.0
"""

import dataclasses
import enum

from typing import Tuple, Union

import numpy as np

from dimerint.core.lattice import WeightParams
from dimerint.core.validators import ParameterValidators

ArrayLike = Union[complex, np.ndarray]

# Distance from the unit circle below which a root counts as lying on it
TORUS_TOLERANCE = 1e-8


class Side(enum.Enum):
    """
    The two halves of the lattice. LEFT carries index 1, RIGHT index 2.
    """

    LEFT = 1
    RIGHT = 2


class Branch(enum.Enum):
    PLUS = "+"
    MINUS = "-"


def _side_index(side: Union[Side, int]) -> int:
    if isinstance(side, Side):
        return side.value
    ParameterValidators.validate_integer_parameter(side, "i", min_val=1, max_val=2)
    return int(side)


def _as_complex(omega: ArrayLike) -> np.ndarray:
    return np.asarray(omega, dtype=np.complex128)


def reciprocal_pair(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return the roots of r^2 - t r + 1, larger modulus first.

    The larger root is taken from whichever sign of the quadratic formula
    avoids cancellation and the smaller is its reciprocal.
    """

    sq = np.sqrt((t - 2) * (t + 2))
    first = (t + sq) / 2
    second = (t - sq) / 2
    larger = np.where(np.abs(first) >= np.abs(second), first, second)
    return larger, 1 / larger


@dataclasses.dataclass(frozen=True)
class SpectralData:
    """
    z_i, roots and eigenvectors for both sides at one omega (or an array of
    omega values).
    """

    omega: ArrayLike
    z1: ArrayLike
    z2: ArrayLike
    r1_plus: ArrayLike
    r1_minus: ArrayLike
    r2_plus: ArrayLike
    r2_minus: ArrayLike
    v1_plus: np.ndarray
    v1_minus: np.ndarray
    v2_plus: np.ndarray
    v2_minus: np.ndarray


def z_funcs(omega: ArrayLike,
            params: WeightParams) -> Tuple[ArrayLike, ArrayLike]:
    """
    Return (z1, z2) = (a omega - b, a (omega - 1)).
    """

    omega = _as_complex(omega)
    return params.a * omega - params.b, params.a * (omega - 1)


def _z(i: int, omega: np.ndarray, params: WeightParams) -> np.ndarray:
    return z_funcs(omega, params)[i - 1]


def transfer_matrix(side: Union[Side, int],
                    omega: ArrayLike,
                    params: WeightParams) -> np.ndarray:
    """
    Return the transfer matrix of one side with shape (..., 2, 2).
    """

    i = _side_index(side)
    omega = _as_complex(omega)
    z = _z(i, omega, params)
    m = np.empty(omega.shape + (2, 2), dtype=np.complex128)
    m[..., 0, 0] = 1
    m[..., 0, 1] = z / omega
    m[..., 1, 0] = -z
    m[..., 1, 1] = 1 - z * z / omega
    return m


def roots(i: Union[Side, int],
          omega: ArrayLike,
          params: WeightParams) -> Tuple[ArrayLike, ArrayLike]:
    """
    Return (r_plus, r_minus), the eigenvalues of the transfer matrix of side
    i, i.e. the roots of r^2 - (2 - z_i^2 / omega) r + 1 = 0 with
    |r_plus| >= |r_minus|. When z_i = 0 both equal 1.
    """

    i = _side_index(i)
    omega = _as_complex(omega)
    z = _z(i, omega, params)
    return reciprocal_pair(2 - z * z / omega)


def eigvec(i: Union[Side, int],
           branch: Union[Branch, str],
           omega: ArrayLike,
           params: WeightParams) -> np.ndarray:
    """
    Return v = (z_i / omega, r - 1) with shape (..., 2).

    The vector vanishes when z_i = 0; check eigvec_is_degenerate before
    using it as a basis vector.
    """

    i = _side_index(i)
    branch = Branch(branch)
    omega = _as_complex(omega)
    z = _z(i, omega, params)
    r_plus, r_minus = roots(i, omega, params)
    r = r_plus if branch is Branch.PLUS else r_minus
    return np.stack([z / omega, r - 1], axis=-1)


def eigvec_is_degenerate(i: Union[Side, int],
                         omega: ArrayLike,
                         params: WeightParams,
                         tol: float = 1e-14) -> np.ndarray:
    i = _side_index(i)
    return np.abs(_z(i, _as_complex(omega), params)) <= tol


def spectral_data(omega: ArrayLike,
                  params: WeightParams) -> SpectralData:
    """
    Collect z_i, r_{i,+-} and v_{i,+-} for both sides.
    """

    omega = _as_complex(omega)
    z1, z2 = z_funcs(omega, params)
    r1_plus, r1_minus = roots(1, omega, params)
    r2_plus, r2_minus = roots(2, omega, params)

    def vec(z, r):
        return np.stack([z / omega, r - 1], axis=-1)

    return SpectralData(omega=omega,
                        z1=z1,
                        z2=z2,
                        r1_plus=r1_plus,
                        r1_minus=r1_minus,
                        r2_plus=r2_plus,
                        r2_minus=r2_minus,
                        v1_plus=vec(z1, r1_plus),
                        v1_minus=vec(z1, r1_minus),
                        v2_plus=vec(z2, r2_plus),
                        v2_minus=vec(z2, r2_minus))


def spectral_curve(z: ArrayLike,
                   omega: ArrayLike,
                   params: WeightParams) -> ArrayLike:
    """
    Return p(z, omega) = -2 - 2ab + b^2 / omega + a^2 omega + 1/z + z.
    """

    z = _as_complex(z)
    omega = _as_complex(omega)
    a, b = params.a, params.b
    return -2 - 2 * a * b + b * b / omega + a * a * omega + 1 / z + z


def is_critical(params: WeightParams) -> bool:
    """
    Return True iff |a - b| < 2. The boundary |a - b| = 2 counts as
    non-critical.
    """

    return abs(params.a - params.b) < 2


def torus_root_search(params: WeightParams,
                      resolution: int = 200) -> bool:
    """
    Search numerically for a zero of the spectral curve on the unit torus.

    For each of resolution values of theta the curve is solved exactly in z
    (z + 1/z = 2 + 2ab - a^2 omega - b^2 / omega). The verdict is True when
    some root lies within TORUS_TOLERANCE of |z| = 1.
    """

    ParameterValidators.validate_integer_parameter(resolution, "resolution", min_val=2)

    theta = 2 * np.pi * np.arange(resolution) / resolution
    omega = np.exp(1j * theta)
    a, b = params.a, params.b
    c = 2 + 2 * a * b - a * a * omega - b * b / omega
    larger, _ = reciprocal_pair(c)
    return bool(np.min(np.abs(np.abs(larger) - 1)) < TORUS_TOLERANCE)


def root_norm_profile(params: WeightParams,
                      samples: int) -> np.ndarray:
    """
    Return an array of shape (samples, 5) with rows
    (theta, |r1+|, |r1-|, |r2+|, |r2-|) at theta_k = 2 pi k / samples.
    """

    ParameterValidators.validate_integer_parameter(samples, "samples", min_val=2)

    theta = 2 * np.pi * np.arange(samples) / samples
    omega = np.exp(1j * theta)
    r1_plus, r1_minus = roots(1, omega, params)
    r2_plus, r2_minus = roots(2, omega, params)
    return np.column_stack([theta,
                            np.abs(r1_plus),
                            np.abs(r1_minus),
                            np.abs(r2_plus),
                            np.abs(r2_minus)])
