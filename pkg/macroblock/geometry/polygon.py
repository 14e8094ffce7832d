from __future__ import annotations

import math
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np

# Absolute tolerance, in squared-distance units, for the turn test of polygon vertices
COLLINEAR_TOLERANCE = 1e-9

# Paths shorter than this are treated as having no direction
_ZERO_LENGTH = 1e-12


class Point2D(NamedTuple):
    x: float
    y: float

    @classmethod
    def of(cls, point: PointLike) -> Point2D:
        x, y = float(point[0]), float(point[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"Point has non-finite coordinates: {point}")

        return cls(x, y)

    def __sub__(self, other) -> Point2D:
        return Point2D(self.x - other[0], self.y - other[1])

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


PointLike = Union[Point2D, Tuple[float, float], Sequence[float], np.ndarray]


def _cross(o: Point2D, a: Point2D, b: Point2D) -> float:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def shoelace_area(vertices: Sequence[PointLike]) -> float:
    """Returns the unsigned area enclosed by a vertex ring. Rings with fewer than
    three vertices enclose nothing."""
    if len(vertices) < 3:
        return 0.0

    total = 0.0
    previous = vertices[-1]
    for current in vertices:
        total += previous[0] * current[1] - current[0] * previous[1]
        previous = current

    return abs(total) / 2.0


class ConvexPolygon:
    """A convex polygon with counter-clockwise vertices.

    Collinear vertices are accepted up to COLLINEAR_TOLERANCE, repeated vertices
    and clockwise or reflex turns are not.

    Attributes:
        vertices: The polygon's corners in counter-clockwise order.
    """

    def __init__(self, vertices: Sequence[PointLike]) -> None:
        points = tuple(Point2D.of(vertex) for vertex in vertices)
        if len(points) < 3:
            raise ValueError(f"Polygon needs at least 3 vertices, got {len(points)}")

        for i, point in enumerate(points):
            following = points[(i + 1) % len(points)]
            if (following - point).norm() <= _ZERO_LENGTH:
                raise ValueError(f"Repeated polygon vertex {point}")

        for i, point in enumerate(points):
            turn = _cross(point, points[(i + 1) % len(points)], points[(i + 2) % len(points)])
            if turn < -COLLINEAR_TOLERANCE:
                raise ValueError("Polygon is not convex or not counter-clockwise")

        self.vertices: Tuple[Point2D, ...] = points
        self._area = shoelace_area(points)
        if self._area <= 0.0:
            raise ValueError("Polygon has no area")

    def __repr__(self) -> str:
        return f"ConvexPolygon({list(self.vertices)!r})"

    @property
    def area(self) -> float:
        return self._area

    def contains(self, point: PointLike) -> bool:
        """Generic point-in-convex-polygon test. Boundary points count as inside."""
        p = Point2D.of(point)
        ring = self.vertices
        for i, vertex in enumerate(ring):
            if _cross(vertex, ring[(i + 1) % len(ring)], p) < 0.0:
                return False

        return True


def _direction(tx: PointLike, rx: PointLike) -> Tuple[Point2D, float, float, float]:
    start = Point2D.of(tx)
    delta = Point2D.of(rx) - start
    length = delta.norm()
    if length <= _ZERO_LENGTH:
        raise ValueError(f"zero-length path from {tuple(start)} to {tuple(rx)}")

    return start, delta.x / length, delta.y / length, length


def path_rectangle(tx: PointLike, rx: PointLike, width: float) -> ConvexPolygon:
    """Returns the blockage region of the path from tx to rx.

    The rectangle runs from tx to rx and extends width / 2 to each side of the
    segment, so its area is |rx - tx| * width.
    """
    if width <= 0:
        raise ValueError(f"Blockage width is not positive: {width}")

    start, ux, uy, length = _direction(tx, rx)
    # Left-hand normal keeps the vertex ring counter-clockwise
    nx, ny = -uy * width / 2.0, ux * width / 2.0
    ex, ey = start.x + ux * length, start.y + uy * length

    return ConvexPolygon(
        [
            (start.x - nx, start.y - ny),
            (ex - nx, ey - ny),
            (ex + nx, ey + ny),
            (start.x + nx, start.y + ny),
        ]
    )


def _clip(subject: List[Point2D], clip_polygon: ConvexPolygon) -> List[Point2D]:
    # Sutherland-Hodgman: clip the subject ring against each edge of the clip polygon
    output = subject
    ring = clip_polygon.vertices
    edge_start = ring[-1]
    for edge_end in ring:
        if len(output) == 0:
            return []

        candidates = output
        output = []
        previous = candidates[-1]
        for current in candidates:
            current_in = _cross(edge_start, edge_end, current) >= 0.0
            previous_in = _cross(edge_start, edge_end, previous) >= 0.0
            if current_in:
                if not previous_in:
                    output.append(_edge_crossing(edge_start, edge_end, previous, current))
                output.append(current)
            elif previous_in:
                output.append(_edge_crossing(edge_start, edge_end, previous, current))
            previous = current
        edge_start = edge_end

    return output


def _edge_crossing(a: Point2D, b: Point2D, s: Point2D, e: Point2D) -> Point2D:
    # Intersection of segment s-e with the infinite line through a-b
    side_s = _cross(a, b, s)
    side_e = _cross(a, b, e)
    denominator = side_s - side_e
    if denominator == 0.0:
        return e

    t = side_s / denominator
    return Point2D(s.x + t * (e.x - s.x), s.y + t * (e.y - s.y))


def convex_intersection_area(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Returns the area of a ∩ b by clipping a against b and applying the shoelace formula.

    Disjoint polygons and polygons touching only along their boundary give 0.
    """
    clipped = _clip(list(a.vertices), b)
    area = shoelace_area(clipped)

    return min(max(area, 0.0), a.area, b.area)


def blocks_many(centers: np.ndarray, tx: PointLike, rx: PointLike, width: float) -> np.ndarray:
    """Vectorized blocks(): returns a boolean array, one entry per row of centers."""
    if width <= 0:
        raise ValueError(f"Blockage width is not positive: {width}")

    start, ux, uy, length = _direction(tx, rx)
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    dx = centers[:, 0] - start.x
    dy = centers[:, 1] - start.y
    along = dx * ux + dy * uy
    across = np.abs(dy * ux - dx * uy)

    return (along >= 0.0) & (along <= length) & (across <= width / 2.0)


def blocks(center: PointLike, tx: PointLike, rx: PointLike, width: float) -> bool:
    """Returns True when a blockage centered at center blocks the path from tx to rx,
    i.e. when center lies in path_rectangle(tx, rx, width), boundary included."""
    return bool(blocks_many(np.asarray([Point2D.of(center)]), tx, rx, width)[0])
