"""Discretized re-grasp corrections

Each of the four correction dimensions (dx, dy, dz, dtheta) is split
into equal width bins; a bin stands for its center.  Lower edges belong
to their bin and the upper edge of the range to the last bin.

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
from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError

LOGGER = logging.getLogger(__name__)

DIMENSIONS = ('dx', 'dy', 'dz', 'dtheta')
N_BINS = 5
TRANSLATION_RANGE = (-0.025, 0.025)
ROTATION_RANGE = (-math.pi / 4.0, math.pi / 4.0)
EDGE_TOL = 1e-12


@dataclass(frozen=True)
class RegraspDelta:
    """ Bounded correction applied to the previous grasp.
    """
    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    dtheta: float = 0.0

    def as_array(self):
        """ (dx, dy, dz, dtheta) as a float64 array.
        """
        return np.array([self.dx, self.dy, self.dz, self.dtheta])

    def to_dict(self):
        """ JSON form.
        """
        return {name: getattr(self, name) for name in DIMENSIONS}

    @classmethod
    def from_dict(cls, data):
        """ Inverse of to_dict().
        """
        return cls(*(float(data[name]) for name in DIMENSIONS))


@dataclass(frozen=True)
class ActionBins:
    """ Per dimension ranges and the bin count.
    """
    ranges: tuple = (TRANSLATION_RANGE, TRANSLATION_RANGE, TRANSLATION_RANGE,
                     ROTATION_RANGE)
    n_bins: int = N_BINS

    def __post_init__(self):
        if len(self.ranges) != len(DIMENSIONS) or self.n_bins < 1:
            raise ArgumentError("action bins need 4 ranges and >= 1 bin")
        if any(not low < high for low, high in self.ranges):
            raise ArgumentError("action bin ranges must have min < max")

    @property
    def dims(self):
        """ Number of correction dimensions K.
        """
        return len(self.ranges)

    def width(self, dim):
        """ Bin width of dimension 'dim'.
        """
        low, high = self.ranges[dim]
        return (high - low) / self.n_bins

    def edges(self, dim):
        """ n_bins + 1 bin edges of dimension 'dim'.
        """
        low, high = self.ranges[dim]
        return np.concatenate([low + np.arange(self.n_bins) * self.width(dim),
                               [high]])

    def centers(self, dim):
        """Bin centers of dimension 'dim', laid out symmetrically about
        the middle of the range (the middle bin of a symmetric range is
        exactly 0).

        """
        low, high = self.ranges[dim]
        offsets = np.arange(self.n_bins) - (self.n_bins - 1) / 2.0
        return (low + high) / 2.0 + offsets * self.width(dim)

    def clamp(self, values):
        """ Clamp a length 4 array into the ranges.
        """
        lows = np.array([low for low, _ in self.ranges])
        highs = np.array([high for _, high in self.ranges])
        return np.clip(values, lows, highs)


DEFAULT_BINS = ActionBins()


def bin_encode(delta, bins=DEFAULT_BINS):
    """Bin index per dimension.  Out of range deltas are clamped with a
    warning.

    """
    values = delta.as_array()
    clamped = bins.clamp(values)
    if np.any(clamped != values):
        LOGGER.warning("re-grasp delta %s clamped into the action bounds",
                       values.tolist())
    indices = []
    for dim in range(bins.dims):
        index = int(np.searchsorted(bins.edges(dim), clamped[dim] + EDGE_TOL,
                                    side='right')) - 1
        indices.append(min(max(index, 0), bins.n_bins - 1))
    return tuple(indices)


def bin_decode(indices, bins=DEFAULT_BINS):
    """ RegraspDelta made of the bin centers.
    """
    if len(indices) != bins.dims:
        raise ArgumentError("expected %d bin indices" % bins.dims)
    values = []
    for dim, index in enumerate(indices):
        if not 0 <= index < bins.n_bins:
            raise ArgumentError("bin index %d out of range" % index)
        values.append(float(bins.centers(dim)[index]))
    return RegraspDelta(*values)


def random_regrasp(rng, bins=DEFAULT_BINS):
    """ Correction drawn uniformly over the continuous ranges.
    """
    return RegraspDelta(*(float(rng.uniform(low, high))
                          for low, high in bins.ranges))
