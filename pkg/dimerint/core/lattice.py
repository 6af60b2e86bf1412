"""
This module defines the interface-weighted square lattice: vertex coordinates
and sublattices, edge weights, the Kasteleyn orientation, and the finite
windows used by the brute-force oracles.

Coordinates
-----------
Each face (n, m) owns four vertices, one per sublattice. Embedded in Z^2 the
face occupies the unit cell [2n, 2n+1] x [2m, 2m+1] with

    b_up(n, m)   -> (2n+1, 2m+1)
    b_down(n, m) -> (2n,   2m)
    w_up(n, m)   -> (2n,   2m+1)
    w_down(n, m) -> (2n+1, 2m)

so two vertices are adjacent exactly when their embedded points are at unit
distance. Columns n <= 0 carry alternating vertical weights a and b, columns
n > 0 carry a on every vertical edge, and horizontal edges weigh 1.

Orientation
-----------
Horizontal edges point from black to white when the white vertex lies to the
right. Vertical edges at odd x point upward from black, vertical edges at even
x point downward from black. Every face then has an odd number of clockwise
edges, and the signs reproduce the action of K on b_up and b_down:

    K b_up(n,m)   = +w_up(n+1,m) - w_up(n,m) + a w_down(n,m+1) - alpha w_down(n,m)
    K b_down(n,m) = +alpha w_up(n,m-1) - a w_up(n,m) + w_down(n,m) - w_down(n-1,m)

with alpha = b for n <= 0 and alpha = a for n > 0.

Version: 1.0.0
"""

import dataclasses
import enum
import logging

from typing import Dict, FrozenSet, List, Optional, Tuple

import scipy.sparse

from dimerint.core.errors import SizeGuardError
from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

# Exhaustive enumeration refuses windows with more vertices than this
MAX_ENUMERATION_VERTICES = 36


class Arrow(enum.Enum):
    """
    The up/down label shared by black and white sublattices.
    """

    UP = "up"
    DOWN = "down"


class Sublattice(enum.Enum):
    """
    The four vertex classes of a face.
    """

    B_UP = "b_up"
    B_DOWN = "b_down"
    W_UP = "w_up"
    W_DOWN = "w_down"

    @property
    def is_black(self) -> bool:
        return self in (Sublattice.B_UP, Sublattice.B_DOWN)

    @property
    def arrow(self) -> Arrow:
        if self in (Sublattice.B_UP, Sublattice.W_UP):
            return Arrow.UP
        return Arrow.DOWN

    @classmethod
    def black(cls, arrow: Arrow) -> "Sublattice":
        return cls.B_UP if arrow is Arrow.UP else cls.B_DOWN

    @classmethod
    def white(cls, arrow: Arrow) -> "Sublattice":
        return cls.W_UP if arrow is Arrow.UP else cls.W_DOWN


# Offset of each sublattice inside the unit cell of its face
_CELL_OFFSETS = {
    Sublattice.B_UP: (1, 1),
    Sublattice.B_DOWN: (0, 0),
    Sublattice.W_UP: (0, 1),
    Sublattice.W_DOWN: (1, 0),
}

_SUBLATTICE_BY_PARITY = {offset: sub for sub, offset in _CELL_OFFSETS.items()}


@dataclasses.dataclass(frozen=True)
class WeightParams:
    """
    The positive edge-weight pair (a, b).

    Parameters
    ----------
    a: float
        Weight of the vertical edges on the right half, and of one vertical
        edge per face on the left half.

    b: float
        Weight of the remaining vertical edge per face on the left half.
    """

    a: float
    b: float

    def __post_init__(self):
        ParameterValidators.validate_positive_real(self.a, "a")
        ParameterValidators.validate_positive_real(self.b, "b")

    @property
    def strong_interface(self) -> bool:
        """
        Return True when b - a > 2, the regime in which the left half is
        non-critical.
        """

        return self.b - self.a > 2

    def alpha(self, n: int) -> float:
        """
        Return the weight of the column-dependent vertical edges of face
        column n.
        """

        return self.b if n <= 0 else self.a


@dataclasses.dataclass(frozen=True)
class VertexId:
    """
    A lattice vertex, identified by the face (n, m) owning it and its
    sublattice.
    """

    n: int
    m: int
    sublattice: Sublattice

    def __post_init__(self):
        ParameterValidators.validate_integer_parameter(self.n, "n")
        ParameterValidators.validate_integer_parameter(self.m, "m")
        if not isinstance(self.sublattice, Sublattice):
            raise TypeError(
                f"ParameterValidators Error.\n"
                f"The provided sublattice ({self.sublattice}) should be a Sublattice. "
                f"Got '{type(self.sublattice)}'.")

    @property
    def is_black(self) -> bool:
        return self.sublattice.is_black

    @property
    def position(self) -> Tuple[int, int]:
        """
        Return the embedded point (x, y) in Z^2.
        """

        dx, dy = _CELL_OFFSETS[self.sublattice]
        return 2 * self.n + dx, 2 * self.m + dy

    @classmethod
    def from_position(cls, x: int, y: int) -> "VertexId":
        """
        Return the vertex embedded at the point (x, y).
        """

        sublattice = _SUBLATTICE_BY_PARITY[(x % 2, y % 2)]
        return cls(x // 2, y // 2, sublattice)

    def __str__(self) -> str:
        return f"{self.sublattice.value}({self.n},{self.m})"


def black(arrow: Arrow, n: int, m: int) -> VertexId:
    return VertexId(n, m, Sublattice.black(arrow))


def white(arrow: Arrow, n: int, m: int) -> VertexId:
    return VertexId(n, m, Sublattice.white(arrow))


def neighbors(v: VertexId) -> List[VertexId]:
    """
    Return the four vertices adjacent to v, in the order right, left, up,
    down.
    """

    x, y = v.position
    return [VertexId.from_position(x + 1, y),
            VertexId.from_position(x - 1, y),
            VertexId.from_position(x, y + 1),
            VertexId.from_position(x, y - 1)]


def _is_adjacent(u: VertexId, v: VertexId) -> bool:
    (ux, uy), (vx, vy) = u.position, v.position
    return abs(ux - vx) + abs(uy - vy) == 1


def edge_weight(u: VertexId,
                v: VertexId,
                params: WeightParams) -> Optional[float]:
    """
    Return the weight of the edge joining u and v, or None when they are not
    adjacent.

    Horizontal edges weigh 1. A vertical edge belongs to face column
    n = x // 2; for n > 0 it weighs a, for n <= 0 it weighs a or b according
    to the parity of its column and of its lower endpoint.
    """

    if not _is_adjacent(u, v):
        return None

    (ux, uy), (vx, vy) = u.position, v.position
    # Horizontal
    if uy == vy:
        return 1.0

    # Right of the interface every vertical edge weighs a
    n = ux // 2
    if n > 0:
        return float(params.a)

    # Left of it a and b alternate along each x-column and between
    # neighbouring x-columns
    lower_y = min(uy, vy)
    if (ux % 2) == (lower_y % 2):
        return float(params.a)
    return float(params.b)


def _black_to_white_sign(b: VertexId, w: VertexId) -> int:
    (bx, by), (wx, wy) = b.position, w.position
    # Horizontal edges are oriented left to right
    if by == wy:
        return 1 if wx > bx else -1
    # Vertical edges point up on odd x and down on even x, so every face has
    # an odd number of clockwise edges
    if bx % 2 == 1:
        return 1 if wy > by else -1
    return 1 if wy < by else -1


def kasteleyn_sign(u: VertexId,
                   v: VertexId) -> int:
    """
    Return the orientation sign s(u, v): +1 when the edge points from u to
    v, -1 when it points from v to u, and 0 when u and v are not adjacent.
    """

    if not _is_adjacent(u, v):
        return 0

    if u.is_black:
        return _black_to_white_sign(u, v)
    return -_black_to_white_sign(v, u)


def kasteleyn_entry(b: VertexId,
                    w: VertexId,
                    params: WeightParams) -> float:
    """
    Return the Kasteleyn matrix entry K(b, w) = s(b, w) * wt(b, w), which is
    zero for non-adjacent pairs.
    """

    weight = edge_weight(b, w, params)
    if weight is None:
        return 0.0
    return kasteleyn_sign(b, w) * weight


@dataclasses.dataclass(frozen=True)
class FiniteWindow:
    """
    A rectangle of faces [n_min, n_max] x [m_min, m_max] with open boundary.

    Parameters
    ----------
    n_min, n_max, m_min, m_max: int
        Inclusive face bounds.

    removed: frozenset of VertexId, default=frozenset()
        Vertices deleted from the rectangle. Full rectangles leave this
        empty. Staircase windows remove two vertices per left column, and
        punctured windows exercise the no-matching path.
    """

    n_min: int
    n_max: int
    m_min: int
    m_max: int
    removed: FrozenSet[VertexId] = frozenset()

    def __post_init__(self):
        for name in ("n_min", "n_max", "m_min", "m_max"):
            ParameterValidators.validate_integer_parameter(getattr(self, name), name)
        if self.n_min > self.n_max or self.m_min > self.m_max:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"Empty window: n in [{self.n_min}, {self.n_max}], "
                f"m in [{self.m_min}, {self.m_max}].")
        object.__setattr__(self, "removed", frozenset(self.removed))

    @classmethod
    def around(cls,
               n_lo: int,
               n_hi: int,
               m_lo: int,
               m_hi: int,
               margin: int,
               right_margin: Optional[int] = None,
               staircase: bool = False) -> "FiniteWindow":
        """
        Return the window containing faces [n_lo, n_hi] x [m_lo, m_hi] padded
        by margin faces on every side (right_margin on the right when given).
        With staircase=True the left columns are trimmed as in
        with_staircase.
        """

        if right_margin is None:
            right_margin = margin
        window = cls(n_lo - margin, n_hi + right_margin, m_lo - margin, m_hi + margin)
        return window.with_staircase() if staircase else window

    def with_staircase(self) -> "FiniteWindow":
        """
        Return the window with b_down(n, m_min) and w_up(n, m_max) removed in
        every column n <= 0.

        When b - a > 2 the left half is frozen into bricks: odd x pair rows
        (2k, 2k+1) and even x pair rows (2k+1, 2k+2). A rectangle cuts the
        even-x bricks at its top and bottom rows, so its matchings stay far
        from the bulk measure however large it grows. Dropping the two end
        vertices of each even-x column lets the boundary follow the bricks.
        Columns n > 0 are untouched.
        """

        trimmed = set(self.removed)
        for n in range(self.n_min, min(self.n_max, 0) + 1):
            trimmed.add(VertexId(n, self.m_min, Sublattice.B_DOWN))
            trimmed.add(VertexId(n, self.m_max, Sublattice.W_UP))
        return dataclasses.replace(self, removed=frozenset(trimmed))

    def contains(self, v: VertexId) -> bool:
        return (self.n_min <= v.n <= self.n_max
                and self.m_min <= v.m <= self.m_max
                and v not in self.removed)

    def vertices(self) -> List[VertexId]:
        """
        Return the window vertices in row-major order of their embedded
        points.
        """

        result = []
        for y in range(2 * self.m_min, 2 * self.m_max + 2):
            for x in range(2 * self.n_min, 2 * self.n_max + 2):
                v = VertexId.from_position(x, y)
                if v not in self.removed:
                    result.append(v)
        return result

    def whites(self) -> List[VertexId]:
        return [v for v in self.vertices() if not v.is_black]

    def blacks(self) -> List[VertexId]:
        return [v for v in self.vertices() if v.is_black]

    @property
    def vertex_count(self) -> int:
        faces = (self.n_max - self.n_min + 1) * (self.m_max - self.m_min + 1)
        return 4 * faces - len(self.removed)


@dataclasses.dataclass(frozen=True)
class SparseKasteleynMatrix:
    """
    The restriction of K~ to a finite window: rows indexed by white vertices,
    columns by black vertices, entry (w, b) equal to K(b, w).
    """

    matrix: scipy.sparse.csr_matrix
    whites: Tuple[VertexId, ...]
    blacks: Tuple[VertexId, ...]
    white_index: Dict[VertexId, int]
    black_index: Dict[VertexId, int]

    @property
    def count_mismatch(self) -> bool:
        """
        Return True when white and black counts differ, in which case the
        window admits no perfect matching.
        """

        return len(self.whites) != len(self.blacks)

    @property
    def is_square(self) -> bool:
        return not self.count_mismatch

    def entry(self, w: VertexId, b: VertexId) -> float:
        return float(self.matrix[self.white_index[w], self.black_index[b]])


def build_window_matrix(window: FiniteWindow,
                        params: WeightParams) -> SparseKasteleynMatrix:
    """
    Build K~ restricted to a window. Edges leaving the window are dropped.

    A window whose white and black counts differ is reported through
    SparseKasteleynMatrix.count_mismatch rather than raised.
    """

    whites = tuple(window.whites())
    blacks = tuple(window.blacks())
    white_index = {w: k for k, w in enumerate(whites)}
    black_index = {b: k for k, b in enumerate(blacks)}

    rows, cols, data = [], [], []
    for b in blacks:
        for w in neighbors(b):
            if w in white_index:
                rows.append(white_index[w])
                cols.append(black_index[b])
                data.append(kasteleyn_entry(b, w, params))

    matrix = scipy.sparse.coo_matrix((data, (rows, cols)),
                                     shape=(len(whites), len(blacks))).tocsr()
    result = SparseKasteleynMatrix(matrix=matrix,
                                   whites=whites,
                                   blacks=blacks,
                                   white_index=white_index,
                                   black_index=black_index)

    if result.count_mismatch:
        logger.warning(f"Window {window} has {len(whites)} white and "
                       f"{len(blacks)} black vertices; no perfect matching exists.")
    return result


def enumerate_matchings(window: FiniteWindow,
                        params: WeightParams,
                        max_vertices: int = MAX_ENUMERATION_VERTICES) -> Tuple[int, float]:
    """
    Exhaustively enumerate the perfect matchings of a window.

    The lowest unmatched vertex (row-major order) is paired with each of its
    unmatched neighbours in turn, recursing on the remainder.

    Parameters
    ----------
    window: FiniteWindow
        The window to enumerate.

    params: WeightParams
        Edge weights.

    max_vertices: int, default=36
        Size guard.

    Returns
    -------
    count: int
        Number of perfect matchings.

    weighted_sum: float
        Sum over matchings of the product of covered edge weights.

    Raises
    ------
    SizeGuardError
        If the window has more than max_vertices vertices.
    """

    vertices = window.vertices()
    if len(vertices) > max_vertices:
        raise SizeGuardError(
            f"Window with {len(vertices)} vertices exceeds the enumeration "
            f"guard of {max_vertices}.")

    blacks = sum(1 for v in vertices if v.is_black)
    if 2 * blacks != len(vertices):
        return 0, 0.0

    index = {v: k for k, v in enumerate(vertices)}
    adjacency = []
    for v in vertices:
        adjacency.append([(index[u], edge_weight(v, u, params))
                          for u in neighbors(v) if u in index])

    matched = [False] * len(vertices)

    def extend(start: int) -> Tuple[int, float]:
        k = start
        while k < len(matched) and matched[k]:
            k += 1
        if k == len(matched):
            return 1, 1.0

        count, weighted = 0, 0.0
        matched[k] = True
        for partner, weight in adjacency[k]:
            if matched[partner]:
                continue
            matched[partner] = True
            sub_count, sub_weighted = extend(k + 1)
            matched[partner] = False
            count += sub_count
            weighted += weight * sub_weighted
        matched[k] = False
        return count, weighted

    return extend(0)
