"""Probe scans, grasp execution and object displacement

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
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from ..config import GRIPPER_MODES, RunConfig
from ..errors import ArgumentError, ValidationError
from ..utils import wrap_angle
from . import geometry

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraspPose:
    """ Absolute planar grasp.  theta is in [-pi, pi).
    """
    x: float
    y: float
    z: float
    theta: float
    mode: str = 'normal'

    def validate(self, workspace):
        """ Raise ValidationError if the pose violates its invariants.
        """
        if self.mode not in GRIPPER_MODES:
            raise ValidationError("grasp mode must be one of %s"
                                  % (GRIPPER_MODES,))
        if not workspace.contains(self.x, self.y):
            raise ValidationError("grasp (x, y) must lie inside the "
                                  "workspace extents")
        if self.z < workspace.grasp_plane_z:
            raise ValidationError("grasp z must be >= grasp_plane_z")
        if not -math.pi <= self.theta < math.pi:
            raise ValidationError("grasp theta must be in [-pi, pi)")
        return self

    def to_dict(self):
        """ JSON form.
        """
        return {'x': self.x, 'y': self.y, 'z': self.z, 'theta': self.theta,
                'mode': self.mode}

    @classmethod
    def from_dict(cls, data):
        """ Inverse of to_dict().
        """
        return cls(data['x'], data['y'], data['z'], data['theta'],
                   data['mode'])


@dataclass(frozen=True)
class ContactResult:
    """Result of a line scan.  contact_point is None exactly when there
    was no contact.  swept_segment runs from the scan start to the
    contact point (or to the end of the scan).

    """
    contact: bool
    contact_point: tuple
    swept_segment: tuple


@dataclass(frozen=True)
class GraspOutcome:
    """ Ground-truth result of executing a grasp.
    """
    success: bool
    enclosure_dof: float
    object_displacement: tuple = (0.0, 0.0, 0.0)
    slip_occurred: bool = False
    contact: bool = False

    def to_dict(self):
        """ JSON form.
        """
        return {'success': bool(self.success),
                'enclosure_dof': float(self.enclosure_dof),
                'object_displacement': list(self.object_displacement),
                'slip_occurred': bool(self.slip_occurred),
                'contact': bool(self.contact)}

    @classmethod
    def from_dict(cls, data):
        """ Inverse of to_dict().
        """
        return cls(bool(data['success']), float(data['enclosure_dof']),
                   tuple(data['object_displacement']),
                   bool(data['slip_occurred']), bool(data['contact']))


def line_scan(workspace, obj, start, direction, max_len, tol=1e-9):
    """Move a probe from 'start' along 'direction' for at most 'max_len'
    (clipped to the workspace) and report the first contact with the
    object boundary.  'obj' may be None for an empty workspace.

    """
    direction = np.asarray(direction, dtype=np.float64)
    norm = float(np.hypot(direction[0], direction[1]))
    if norm == 0.0:
        raise ArgumentError("line_scan direction must be non-zero")
    if abs(norm - 1.0) > 1e-9:
        raise ArgumentError("line_scan direction must be a unit vector")
    start = (float(start[0]), float(start[1]))
    if not workspace.contains(*start, tol=tol):
        raise ArgumentError("line_scan start must lie inside the workspace")
    length = min(float(max_len), geometry.ray_box_exit(
        start, direction, workspace.x_extent, workspace.y_extent))
    hit = None
    if obj is not None:
        hit = geometry.ray_polygon_hit(start, direction, length,
                                       obj.world_vertices(), tol=tol)
    if hit is None:
        end = (start[0] + length * direction[0],
               start[1] + length * direction[1])
        return ContactResult(False, None, (start, end))
    t_hit, _ = hit
    point = (start[0] + t_hit * direction[0], start[1] + t_hit * direction[1])
    return ContactResult(True, point, (start, point))


def best_axis(obj, theta):
    """ (axis error, axis tolerance) of the best matching graspable axis.
    """
    best = None
    for axis, tol in obj.world_axes():
        error = geometry.axis_distance(theta, axis)
        if best is None or error / tol < best[0] / best[1]:
            best = (error, tol)
    return best


def signed_axis_error(obj, theta):
    """Signed angle (in [-pi/2, pi/2)) from the best matching graspable
    axis to the gripper angle.

    """
    best = None
    for axis, tol in obj.world_axes():
        error = geometry.axis_distance(theta, axis)
        if best is None or error / tol < best[0] / best[1]:
            best = (error, tol, axis)
    return float((theta - best[2] + math.pi / 2.0) % math.pi - math.pi / 2.0)


def instability_factor(offset, axis_error, axis_tol, config=None):
    """Multiplier on a material's slip proneness.  It is slip_floor for a
    perfectly centred, perfectly aligned grasp and grows linearly to 1
    at the centring or alignment tolerance.

    """
    config = config or RunConfig()
    floor = config.sim.slip_floor
    badness = max(offset / config.sim.center_tol, axis_error / axis_tol)
    return float(min(1.0, floor + (1.0 - floor) * badness))


def gripper_frame_offset(obj, grasp):
    """Offset of the object centroid from the gripper centre, expressed
    along the closing direction (u) and across it (v).

    """
    offset = obj.centroid - np.array([grasp.x, grasp.y])
    closing = np.array([math.cos(grasp.theta), math.sin(grasp.theta)])
    lateral = np.array([-closing[1], closing[0]])
    return float(offset @ closing), float(offset @ lateral)


def enclosure_fraction(obj, grasp, config=None):
    """ Fraction of the mode's aperture taken up by the object width.
    """
    config = config or RunConfig()
    width = geometry.width_along(obj.world_vertices(), grasp.theta)
    return width / config.aperture(grasp.mode)


def execute_grasp(workspace, obj, grasp, rng, config=None):
    """Execute 'grasp' against 'obj' and return the ground-truth outcome.

    The grasp succeeds iff the gripper centre is within center_tol of
    the centroid, theta is within tolerance of a graspable axis, z is
    inside the object's height band, the object fits the mode's
    aperture, and a slip draw with probability slip_proneness x
    instability_factor does not fire.  Exactly three uniform draws are
    taken from 'rng' whenever there is contact, so paired runs stay in
    step.

    Contact further than sim.displacement_onset from the centroid moves
    the object: a failed grasp pushes it away from the gripper by up to
    sim.displacement_cap, a successful one pulls it towards the gripper
    centre.

    """
    config = config or RunConfig()
    grasp.validate(workspace)
    f_max = config.sim.f_max
    if obj is None:
        return GraspOutcome(False, f_max)
    aperture = config.aperture(grasp.mode)
    vertices = obj.world_vertices()
    reach = geometry.point_polygon_distance((grasp.x, grasp.y), vertices)
    if reach > aperture / 2.0:
        return GraspOutcome(False, f_max)

    slip_u, push_u, turn_u = rng.random(3)
    offset = float(np.hypot(grasp.x - obj.pose[0], grasp.y - obj.pose[1]))
    axis_error, axis_tol = best_axis(obj, grasp.theta)
    fraction = enclosure_fraction(obj, grasp, config)
    z_low = workspace.grasp_plane_z + config.sim.z_clearance
    z_high = workspace.grasp_plane_z + obj.height - config.sim.z_top_margin
    stable = (offset <= config.sim.center_tol
              and axis_error <= axis_tol
              and z_low <= grasp.z <= z_high
              and fraction <= 1.0)
    slip = False
    if stable:
        factor = instability_factor(offset, axis_error, axis_tol, config)
        slip = bool(slip_u < obj.material.slip_proneness * factor)
    success = bool(stable and not slip)
    enclosure = f_max * float(np.clip(1.0 - fraction, 0.02, 0.98))

    displacement = (0.0, 0.0, 0.0)
    if offset > config.sim.displacement_onset:
        direction = (obj.centroid - np.array([grasp.x, grasp.y])) / offset
        if success:
            # closing fingers drag a held object towards the gripper
            # centre, never past it
            magnitude = -push_u * min(config.sim.displacement_cap, offset)
        else:
            magnitude = push_u * config.sim.displacement_cap
        turn = (2.0 * turn_u - 1.0) * 0.1 * push_u
        displacement = (float(magnitude * direction[0]),
                        float(magnitude * direction[1]), float(turn))
    return GraspOutcome(success, enclosure, displacement, slip, True)


def displace_object(obj, delta, workspace):
    """Return a copy of 'obj' moved by delta = (dx, dy, dtheta).  The
    outline is unchanged in the object frame; the position is clamped
    so all vertices stay inside the workspace extents.

    """
    d_x, d_y, d_theta = delta
    x_pos = obj.pose[0] + d_x
    y_pos = obj.pose[1] + d_y
    theta = obj.pose[2] + d_theta
    if not -math.pi <= theta < math.pi:
        theta = float(wrap_angle(theta))
    vertices = geometry.transform(obj.polygon, (x_pos, y_pos, theta))
    low = vertices.min(axis=0)
    high = vertices.max(axis=0)
    shift = [0.0, 0.0]
    for axis, (ext_low, ext_high) in enumerate((workspace.x_extent,
                                                workspace.y_extent)):
        if low[axis] < ext_low:
            shift[axis] = ext_low - low[axis]
        elif high[axis] > ext_high:
            shift[axis] = ext_high - high[axis]
    if shift != [0.0, 0.0]:
        LOGGER.debug("clamped displacement of '%s' by %s", obj.object_id,
                     shift)
    return replace(obj, pose=(float(x_pos + shift[0]),
                              float(y_pos + shift[1]), theta))
