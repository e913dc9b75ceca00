"""Touch localization with a particle filter

The belief over the object's planar position is a set of weighted
particles.  Each probe scan runs one filter step:

    predict   - Gaussian motion model (the object may have been pushed)
    line_scan - move the probe until contact or the end of the scan
    update    - raise weights near the contact point, lower them along
                the free part of the swept segment
    resample  - systematic (low variance) resampling

The estimate is the centroid of the final particle set.

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
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import ArgumentError, FilterStateError, ValidationError
from .utils import canonical_json
from .world import geometry
from .world.sim import displace_object, line_scan

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParticleSet:
    """Weighted position hypotheses.  'particles' is (n, 2), 'weights'
    is (n,) and sums to 1.  'collapsed' flags a set whose weights were
    reset to uniform after every weight underflowed to zero.

    """
    particles: np.ndarray
    weights: np.ndarray
    collapsed: bool = False

    def __len__(self):
        return int(self.particles.shape[0])

    def effective_sample_size(self):
        """ 1 / sum(w^2), between 1 and len(self).
        """
        return float(1.0 / np.sum(self.weights ** 2))


@dataclass(frozen=True)
class MotionModelParams:
    """ Isotropic Gaussian motion model.
    """
    sigma: float = 0.005

    def __post_init__(self):
        if not self.sigma >= 0.0:
            raise ArgumentError("motion model sigma must be >= 0")

    @classmethod
    def from_config(cls, config):
        """ Motion model described by config.filter.
        """
        return cls(config.filter.sigma)


@dataclass(frozen=True)
class MeasurementModelParams:
    """ Multiplicative occupied / free space evidence factors.
    """
    vicinity_radius: float = 0.025
    w_occupied: float = 3.0
    w_free: float = 0.2

    def __post_init__(self):
        if not self.vicinity_radius > 0.0:
            raise ArgumentError("vicinity_radius must be > 0")
        if not self.w_occupied > 1.0 > self.w_free > 0.0:
            raise ArgumentError("measurement factors must satisfy "
                                "w_occupied > 1 > w_free > 0")

    @classmethod
    def from_config(cls, config):
        """ Measurement model described by config.filter.
        """
        params = config.filter
        return cls(params.vicinity_radius, params.w_occupied, params.w_free)


@dataclass(frozen=True)
class ScanPlan:
    """ Ordered line scans, each (start (x, y), unit direction, max_len).
    """
    scans: tuple = ()

    def __len__(self):
        return len(self.scans)

    def validate(self, workspace, tol=1e-9):
        """Raise ValidationError unless every scan starts and ends inside
        the workspace.

        """
        for index, (start, direction, max_len) in enumerate(self.scans):
            end = (start[0] + max_len * direction[0],
                   start[1] + max_len * direction[1])
            if not (workspace.contains(*start, tol=tol)
                    and workspace.contains(*end, tol=tol)):
                raise ValidationError("scan %d must lie within the "
                                      "workspace" % index)
        return self


def raster_plan(workspace, n_scans=10, spacing=0.05):
    """Boustrophedon plan of 'n_scans' scans parallel to the x axis,
    'spacing' apart and centred on the workspace.  Rows alternate
    direction and each spans the full x extent.  Rows falling outside
    the y extent are clamped onto its edges.

    """
    if n_scans < 0:
        raise ArgumentError("n_scans must be >= 0")
    x_low, x_high = workspace.x_extent
    y_low, y_high = workspace.y_extent
    center_y = workspace.center[1]
    length = x_high - x_low
    scans = []
    for row in range(n_scans):
        y_pos = center_y + (row - (n_scans - 1) / 2.0) * spacing
        y_pos = min(max(y_pos, y_low), y_high)
        if row % 2 == 0:
            scans.append(((x_low, y_pos), (1.0, 0.0), length))
        else:
            scans.append(((x_high, y_pos), (-1.0, 0.0), length))
    return ScanPlan(tuple(scans))


def init_uniform(workspace, n_particles, rng):
    """ i.i.d. uniform particles over the extents with equal weights.
    """
    if n_particles < 1:
        raise ArgumentError("N_particles must be >= 1")
    x_pos = rng.uniform(workspace.x_extent[0], workspace.x_extent[1],
                        n_particles)
    y_pos = rng.uniform(workspace.y_extent[0], workspace.y_extent[1],
                        n_particles)
    return ParticleSet(np.column_stack([x_pos, y_pos]),
                       np.full(n_particles, 1.0 / n_particles))


def _clamp(particles, workspace):
    return np.column_stack([
        np.clip(particles[:, 0], *workspace.x_extent),
        np.clip(particles[:, 1], *workspace.y_extent),
    ])


def predict(particle_set, params, rng, workspace):
    """Perturb every particle by N(0, sigma^2 I) and clamp it to the
    workspace.  Weights are unchanged.

    """
    noise = rng.normal(0.0, params.sigma, size=particle_set.particles.shape)
    moved = _clamp(particle_set.particles + noise, workspace)
    return ParticleSet(moved, particle_set.weights.copy())


def update(particle_set, scan_result, params):
    """Apply the measurement model of one scan.

    Particles within vicinity_radius (inclusive) of the contact point
    are multiplied by w_occupied; the remaining particles within
    vicinity_radius of the swept segment (up to the contact) by w_free.
    Weights are then normalized.  If every weight underflows, weights
    are reset to uniform and the returned set is flagged 'collapsed'.

    """
    particles = particle_set.particles
    seg_start, seg_end = scan_result.swept_segment
    radius = params.vicinity_radius
    free = geometry.point_segment_distance(particles, seg_start,
                                           seg_end) <= radius
    factors = np.where(free, params.w_free, 1.0)
    if scan_result.contact:
        deltas = particles - np.asarray(scan_result.contact_point)
        occupied = np.sqrt((deltas ** 2).sum(axis=1)) <= radius
        factors = np.where(occupied, params.w_occupied, factors)
    weights = particle_set.weights * factors
    total = float(weights.sum())
    if not math.isfinite(total) or total <= 0.0:
        LOGGER.warning("particle weights collapsed; resetting to uniform")
        count = len(particle_set)
        return ParticleSet(particles.copy(), np.full(count, 1.0 / count),
                           collapsed=True)
    return ParticleSet(particles.copy(), weights / total)


def resample(particle_set, rng):
    """Systematic resampling: one uniform offset, N evenly spaced
    pointers into the cumulative weights.  Output weights are uniform.

    """
    count = len(particle_set)
    cumulative = np.cumsum(particle_set.weights)
    cumulative[-1] = 1.0
    pointers = (rng.random() + np.arange(count)) / count
    index = np.minimum(np.searchsorted(cumulative, pointers, side='right'),
                       count - 1)
    return ParticleSet(particle_set.particles[index].copy(),
                       np.full(count, 1.0 / count))


def estimate(particle_set):
    """ Weighted mean (x, y) of the particles.
    """
    if len(particle_set) == 0:
        raise FilterStateError("cannot estimate from an empty particle set")
    mean = particle_set.weights @ particle_set.particles
    return float(mean[0]), float(mean[1])


@dataclass(frozen=True)
class ScanSnapshot:
    """ Filter state after one scan, kept for diagnostics.
    """
    scan_index: int
    contact: bool
    contact_point: tuple
    particles: np.ndarray
    weights: np.ndarray
    estimate: tuple
    effective_sample_size: float
    collapsed: bool
    pushed: bool
    object_pose: tuple

    def to_dict(self):
        """ JSON form written by export_trace().
        """
        return {
            'scan_index': self.scan_index,
            'contact': self.contact,
            'contact_point': (None if self.contact_point is None
                              else list(self.contact_point)),
            'particles': self.particles.tolist(),
            'weights': self.weights.tolist(),
            'estimate': list(self.estimate),
            'effective_sample_size': self.effective_sample_size,
            'collapsed': self.collapsed,
            'pushed': self.pushed,
            'object_pose': (None if self.object_pose is None
                            else list(self.object_pose)),
        }


@dataclass(frozen=True)
class Localization:
    """Result of localize().  Unpacks as (estimate, trace); 'obj' is the
    object as it was left by the probe (it may have been pushed).

    """
    estimate: tuple
    trace: list = field(default_factory=list)
    obj: object = None

    def __iter__(self):
        return iter((self.estimate, self.trace))


def localize(workspace, obj, plan, motion, measurement, n_particles, rng,
             config=None):
    """Run touch localization of 'obj' with the scans in 'plan'.

    After each contacting scan the probe pushes the object with
    probability config.filter.push_probability, by a distance drawn
    uniformly up to config.sim.displacement_cap along the scan
    direction.

    """
    config = config or RunConfig()
    plan.validate(workspace)
    particle_set = init_uniform(workspace, n_particles, rng)
    trace = []
    for index, (start, direction, max_len) in enumerate(plan.scans):
        particle_set = predict(particle_set, motion, rng, workspace)
        result = line_scan(workspace, obj, start, direction, max_len,
                           tol=config.sim.geometric_tol)
        posterior = update(particle_set, result, measurement)
        particle_set = resample(posterior, rng)
        pushed = False
        if result.contact:
            push_u, length_u = rng.random(2)
            if push_u < config.filter.push_probability:
                length = length_u * config.sim.displacement_cap
                obj = displace_object(
                    obj, (length * direction[0], length * direction[1], 0.0),
                    workspace)
                pushed = True
                LOGGER.debug("scan %d pushed '%s' by %.4f m", index,
                             obj.object_id, length)
        trace.append(ScanSnapshot(
            scan_index=index,
            contact=result.contact,
            contact_point=result.contact_point,
            particles=posterior.particles,
            weights=posterior.weights,
            estimate=estimate(particle_set),
            effective_sample_size=posterior.effective_sample_size(),
            collapsed=posterior.collapsed,
            pushed=pushed,
            object_pose=None if obj is None else tuple(obj.pose),
        ))
    final = estimate(particle_set)
    LOGGER.debug("localized at (%.4f, %.4f) after %d scans", final[0],
                 final[1], len(plan))
    return Localization(final, trace, obj)


def localize_from_config(workspace, obj, rng, config=None):
    """ localize() with the plan and models described by config.filter.
    """
    config = config or RunConfig()
    params = config.filter
    plan = raster_plan(workspace, params.n_scans, params.scan_spacing)
    return localize(workspace, obj, plan,
                    MotionModelParams.from_config(config),
                    MeasurementModelParams.from_config(config),
                    params.n_particles, rng, config)


def export_trace(trace, path):
    """ Write per scan snapshots as one JSON object per line.
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as outfile:
        for snapshot in trace:
            outfile.write(canonical_json(snapshot.to_dict()))
            outfile.write('\n')


def load_trace(path):
    """ Read the dictionaries written by export_trace().
    """
    with open(path, 'r', encoding='utf-8') as infile:
        return [json.loads(line) for line in infile if line.strip()]
