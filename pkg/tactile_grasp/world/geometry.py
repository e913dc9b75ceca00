"""Planar geometry used by the world simulator

MIT License

(C) Copyright [2026] tactile_grasp authors

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included
in all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR
OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE,
ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
OTHER DEALINGS IN THE SOFTWARE.
"""
import math

import numpy as np
import shapely
from shapely.geometry import LinearRing, Point, Polygon


def as_vertices(polygon):
    """ Vertex list (or array) to an (n, 2) float64 array.
    """
    return np.asarray(polygon, dtype=np.float64).reshape(-1, 2)


def to_shapely(vertices):
    """ shapely Polygon for an (n, 2) vertex array.
    """
    return Polygon([tuple(vertex) for vertex in vertices])


def polygon_area(vertices):
    """ Signed shoelace area, positive for counterclockwise order.
    """
    vertices = as_vertices(vertices)
    x_coords, y_coords = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x_coords, np.roll(y_coords, -1))
                       - np.dot(y_coords, np.roll(x_coords, -1)))


def polygon_problems(vertices):
    """Return a list of the polygon invariants that 'vertices' violates
    (empty when the polygon is usable as an object outline).

    """
    vertices = as_vertices(vertices)
    problems = []
    if len(vertices) < 3:
        return ["polygon must have at least 3 vertices"]
    if not np.all(np.isfinite(vertices)):
        return ["polygon vertices must be finite"]
    ring = LinearRing([tuple(vertex) for vertex in vertices])
    if not ring.is_simple or not to_shapely(vertices).is_valid:
        problems.append("polygon must be simple (non-self-intersecting)")
    elif not ring.is_ccw:
        problems.append("polygon must be counterclockwise")
    if abs(polygon_area(vertices)) <= 0.0:
        problems.append("polygon must have non-zero area")
    return problems


def centroid(vertices):
    """ Area centroid of a simple polygon.
    """
    point = to_shapely(as_vertices(vertices)).centroid
    return np.array([point.x, point.y])


def diameter(vertices):
    """ Largest distance between two vertices.
    """
    vertices = as_vertices(vertices)
    deltas = vertices[:, None, :] - vertices[None, :, :]
    return float(np.sqrt((deltas ** 2).sum(axis=-1)).max())


def circumradius(vertices):
    """ Largest vertex distance from the origin of the vertex frame.
    """
    return float(np.sqrt((as_vertices(vertices) ** 2).sum(axis=1)).max())


def transform(vertices, pose):
    """ Map object frame vertices to the world frame for pose (x, y, theta).
    """
    x_pos, y_pos, theta = pose
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    rotation = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    return as_vertices(vertices) @ rotation.T + np.array([x_pos, y_pos])


def width_along(vertices, angle):
    """ Extent of the vertex set projected on the direction 'angle'.
    """
    direction = np.array([math.cos(angle), math.sin(angle)])
    projection = as_vertices(vertices) @ direction
    return float(projection.max() - projection.min())


def axis_distance(theta, axis):
    """Angular distance between a gripper angle and a grasp axis.  Both
    are lines, so the distance is taken modulo pi and lies in [0, pi/2].

    """
    delta = abs((theta - axis + math.pi) % (2.0 * math.pi) - math.pi)
    return min(delta, math.pi - delta)


def principal_axes(vertices, max_aperture, round_ratio=0.1,
                   tolerance=math.pi / 8.0):
    """Derive graspable axes from the minimum rotated rectangle of the
    outline.  The closing direction across the short side is always an
    axis; the long side is one too when it fits in the gripper.  Outlines
    whose rectangle is nearly square and whose area fills little of it
    (round shapes) accept every orientation.

    """
    vertices = as_vertices(vertices)
    rect = to_shapely(vertices).minimum_rotated_rectangle
    corners = np.asarray(rect.exterior.coords)[:4]
    side_a = corners[1] - corners[0]
    side_b = corners[2] - corners[1]
    len_a, len_b = float(np.hypot(*side_a)), float(np.hypot(*side_b))
    if len_a > len_b:
        side_a, side_b = side_b, side_a
        len_a, len_b = len_b, len_a
    short_angle = math.atan2(side_a[1], side_a[0])
    long_angle = math.atan2(side_b[1], side_b[0])
    fill = abs(polygon_area(vertices)) / max(len_a * len_b, 1e-12)
    if len_b - len_a < round_ratio * len_b and fill < 0.9:
        return [(0.0, math.pi / 2.0)]
    axes = [(float(short_angle), tolerance)]
    if len_b <= max_aperture:
        axes.append((float(long_angle), tolerance))
    return axes


def ray_box_exit(start, direction, x_extent, y_extent):
    """Distance along a ray starting inside the box to the box boundary.

    """
    exits = []
    for axis, (low, high) in enumerate((x_extent, y_extent)):
        step = direction[axis]
        if step > 0:
            exits.append((high - start[axis]) / step)
        elif step < 0:
            exits.append((low - start[axis]) / step)
    return max(0.0, min(exits)) if exits else 0.0


def _cross(vec_a, vec_b):
    return vec_a[0] * vec_b[1] - vec_a[1] * vec_b[0]


def ray_polygon_hit(start, direction, max_len, vertices, tol=1e-9):
    """First intersection of the ray start + t * direction, 0 <= t <=
    max_len, with the boundary of the polygon 'vertices'.

    'direction' must be a unit vector.  A start point inside (or on) the
    polygon is an immediate hit at t = 0.  When the ray meets a vertex
    shared by two edges, the earlier edge in vertex order wins.

    Returns (t, edge_index) or None.

    """
    vertices = as_vertices(vertices)
    start = np.asarray(start, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    if to_shapely(vertices).covers(Point(start)):
        return 0.0, -1
    best = None
    count = len(vertices)
    for index in range(count):
        origin = vertices[index]
        edge = vertices[(index + 1) % count] - origin
        rel = origin - start
        denom = _cross(direction, edge)
        if abs(denom) <= tol * max(1.0, float(np.hypot(*edge))):
            if abs(_cross(rel, direction)) > tol:
                continue
            # Collinear: the hit is the nearest overlap point.
            t_a = float(np.dot(rel, direction))
            t_b = float(np.dot(rel + edge, direction))
            if max(t_a, t_b) < -tol:
                continue
            t_hit = max(0.0, min(t_a, t_b))
        else:
            t_hit = _cross(rel, edge) / denom
            s_hit = _cross(rel, direction) / denom
            if t_hit < -tol or s_hit < -tol or s_hit > 1.0 + tol:
                continue
            t_hit = max(0.0, t_hit)
        if t_hit > max_len + tol:
            continue
        if best is None or t_hit < best[0] - tol:
            best = (min(t_hit, max_len), index)
    return best


def point_segment_distance(points, seg_start, seg_end):
    """ Distance from each of an (n, 2) array of points to a segment.
    """
    points = np.asarray(points, dtype=np.float64)
    seg_start = np.asarray(seg_start, dtype=np.float64)
    seg_end = np.asarray(seg_end, dtype=np.float64)
    seg = seg_end - seg_start
    length_sq = float(np.dot(seg, seg))
    if length_sq == 0.0:
        return np.sqrt(((points - seg_start) ** 2).sum(axis=1))
    frac = np.clip(((points - seg_start) @ seg) / length_sq, 0.0, 1.0)
    nearest = seg_start + frac[:, None] * seg
    return np.sqrt(((points - nearest) ** 2).sum(axis=1))


def point_polygon_distance(point, vertices):
    """ Distance from a point to a polygon (0 inside).
    """
    return float(to_shapely(as_vertices(vertices)).distance(Point(point)))


def covers_xy(vertices, x_coords, y_coords):
    """ Vectorized closed point-in-polygon test.
    """
    return shapely.intersects_xy(to_shapely(as_vertices(vertices)),
                                 x_coords, y_coords)
