from .polygon import (
    Point2D,
    PointLike,
    ConvexPolygon,
    path_rectangle,
    convex_intersection_area,
    shoelace_area,
    blocks,
    blocks_many,
    COLLINEAR_TOLERANCE,
)
