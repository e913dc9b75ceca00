"""Object catalog and scene creation

A catalog is a JSON document (see docs/catalog_format.md):

    {
      "format_version": 1,
      "objects": [
        {"object_id": "box_5cm", "shape": "box", "material": "wood",
         "height": 0.08, "split": "train", "test_set": null,
         "vertices": [[-0.025, -0.025], [0.025, -0.025], ...],
         "graspable_axes": [[0.0, 0.3927], [1.5708, 0.3927]]},
        ...
      ]
    }

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
from dataclasses import dataclass, field, replace

import numpy as np

from ..config import MATERIAL_LABELS, RunConfig
from ..errors import ValidationError
from ..utils import make_rng
from . import geometry

LOGGER = logging.getLogger(__name__)

CATALOG_FORMAT_VERSION = 1


@dataclass(frozen=True)
class MaterialClass:
    """ One of the 7 material categories with its physical parameters.
    """
    label: str
    stiffness: float
    friction: float
    slip_proneness: float


def material_table(config=None):
    """ MaterialClass per label from the run configuration.
    """
    config = config or RunConfig()
    return {
        label: MaterialClass(label, *config.materials[label])
        for label in MATERIAL_LABELS
    }


@dataclass(frozen=True)
class Workspace:
    """ The bounded grasp plane.  Extents are closed intervals (m).
    """
    x_extent: tuple = (0.0, 0.6)
    y_extent: tuple = (0.0, 0.6)
    grasp_plane_z: float = 0.0

    def __post_init__(self):
        if not (self.x_extent[0] < self.x_extent[1]
                and self.y_extent[0] < self.y_extent[1]):
            raise ValidationError("workspace extents must be non-degenerate "
                                  "(min < max on both axes)")

    @classmethod
    def from_config(cls, config):
        """ Workspace described by config.workspace.
        """
        params = config.workspace
        return cls(tuple(params.x_extent), tuple(params.y_extent),
                   params.grasp_plane_z)

    @property
    def center(self):
        """ Midpoint of the extents.
        """
        return ((self.x_extent[0] + self.x_extent[1]) / 2.0,
                (self.y_extent[0] + self.y_extent[1]) / 2.0)

    def contains(self, x_pos, y_pos, tol=0.0):
        """ True when (x, y) lies inside the closed extents.
        """
        return (self.x_extent[0] - tol <= x_pos <= self.x_extent[1] + tol
                and self.y_extent[0] - tol <= y_pos <= self.y_extent[1] + tol)

    def clamp(self, x_pos, y_pos):
        """ Closest point of the extents to (x, y).
        """
        return (min(max(x_pos, self.x_extent[0]), self.x_extent[1]),
                min(max(y_pos, self.y_extent[0]), self.y_extent[1]))


@dataclass(frozen=True)
class ObjectInstance:
    """A placed object.  'polygon' is given in the object frame with the
    area centroid at the origin, so pose (x, y) is the world centroid.

    """
    object_id: str
    polygon: tuple
    pose: tuple
    material: MaterialClass
    graspable_axes: tuple
    height: float = 0.08
    split: str = "train"
    test_set: str = None

    def world_vertices(self):
        """ Outline in the world frame as an (n, 2) array.
        """
        return geometry.transform(self.polygon, self.pose)

    @property
    def centroid(self):
        """ World position of the area centroid.
        """
        return np.array(self.pose[:2], dtype=np.float64)

    def world_axes(self):
        """ Graspable axes rotated into the world frame.
        """
        return [(axis + self.pose[2], tol)
                for axis, tol in self.graspable_axes]

    def area(self):
        """ Outline area (m^2).
        """
        return abs(geometry.polygon_area(self.polygon))


@dataclass(frozen=True)
class CatalogEntry:
    """ A catalog object: outline, material, and grasp ground truth.
    """
    object_id: str
    shape: str
    vertices: tuple
    material: str
    height: float = 0.08
    graspable_axes: tuple = None
    split: str = "train"
    test_set: str = None

    def to_dict(self):
        """ JSON form used in catalog files.
        """
        return {
            'object_id': self.object_id,
            'shape': self.shape,
            'vertices': [list(vertex) for vertex in self.vertices],
            'material': self.material,
            'height': self.height,
            'graspable_axes': (None if self.graspable_axes is None else
                               [list(axis) for axis in self.graspable_axes]),
            'split': self.split,
            'test_set': self.test_set,
        }

    @classmethod
    def from_dict(cls, data):
        """ Inverse of to_dict(), validating field presence.
        """
        try:
            axes = data.get('graspable_axes')
            return cls(
                object_id=str(data['object_id']),
                shape=str(data.get('shape', 'polygon')),
                vertices=tuple(tuple(float(c) for c in vertex)
                               for vertex in data['vertices']),
                material=str(data['material']),
                height=float(data.get('height', 0.08)),
                graspable_axes=(None if axes is None else
                                tuple(tuple(float(c) for c in axis)
                                      for axis in axes)),
                split=str(data.get('split', 'train')),
                test_set=data.get('test_set'),
            )
        except (KeyError, TypeError, ValueError) as err:
            raise ValidationError("malformed catalog entry: %s" % err) from err


@dataclass(frozen=True)
class RandomPolygonSpec:
    """Parameters of a seeded random star-shaped polygon.  Star shapes
    with sorted angles are simple and counterclockwise by construction.

    """
    n_vertices: int = 6
    radius_range: tuple = (0.02, 0.035)
    material: str = "hard_plastic"
    height: float = 0.08
    object_id: str = None


@dataclass
class Catalog:
    """ An ordered set of catalog entries.
    """
    entries: list = field(default_factory=list)
    format_version: int = CATALOG_FORMAT_VERSION

    def by_id(self, object_id):
        """ Entry with the given id.
        """
        for entry in self.entries:
            if entry.object_id == object_id:
                return entry
        raise KeyError(object_id)

    def split(self, name):
        """ Entries in the 'train' or 'test' split.
        """
        return [entry for entry in self.entries if entry.split == name]

    def materials(self, split=None):
        """ Set of material labels present (optionally in one split).
        """
        return {entry.material for entry in self.entries
                if split is None or entry.split == split}

    def to_dict(self):
        """ JSON form of the catalog file.
        """
        return {
            'format_version': self.format_version,
            'objects': [entry.to_dict() for entry in self.entries],
        }


def box_entry(object_id, width, depth, material, **kwargs):
    """ Axis aligned rectangle centred on the origin.
    """
    half_w, half_d = width / 2.0, depth / 2.0
    vertices = ((-half_w, -half_d), (half_w, -half_d),
                (half_w, half_d), (-half_w, half_d))
    return CatalogEntry(object_id, 'box', vertices, material, **kwargs)


def regular_entry(object_id, sides, radius, material, shape='ngon', **kwargs):
    """ Regular polygon (a cylinder cross-section when 'sides' is large).
    """
    angles = np.arange(sides) * 2.0 * math.pi / sides
    vertices = tuple((radius * math.cos(a), radius * math.sin(a))
                     for a in angles)
    return CatalogEntry(object_id, shape, vertices, material, **kwargs)


def star_vertices(rng, n_vertices, radius_range):
    """ Random star-shaped outline: sorted angles, random radii.
    """
    # One angle per sector keeps the order strictly increasing.
    angles = ((np.arange(n_vertices) + rng.uniform(0.1, 0.9, n_vertices))
              * 2.0 * math.pi / n_vertices)
    radii = rng.uniform(radius_range[0], radius_range[1], n_vertices)
    return tuple((float(r * math.cos(a)), float(r * math.sin(a)))
                 for r, a in zip(radii, angles))


BUILTIN_ENTRIES = {
    'box_5cm': box_entry('box_5cm', 0.05, 0.05, 'wood'),
}


def load_catalog(path):
    """ Read and validate a catalog file.
    """
    try:
        with open(path, 'r', encoding='utf-8') as infile:
            data = json.load(infile)
    except ValueError as err:
        raise ValidationError("catalog '%s' is not valid JSON: %s"
                              % (path, err)) from err
    version = data.get('format_version')
    if version != CATALOG_FORMAT_VERSION:
        raise ValidationError("catalog format_version %r is not supported "
                              "(expected %d)" % (version,
                                                 CATALOG_FORMAT_VERSION))
    catalog = Catalog([CatalogEntry.from_dict(item)
                       for item in data.get('objects', [])])
    validate_catalog(catalog)
    return catalog


def save_catalog(catalog, path):
    """ Write a catalog file (sorted keys, stable layout).
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as outfile:
        json.dump(catalog.to_dict(), outfile, sort_keys=True, indent=1)
        outfile.write('\n')


def validate_catalog(catalog, config=None):
    """Check every entry's outline and material and the uniqueness of
    object ids.

    """
    config = config or RunConfig()
    seen = set()
    for entry in catalog.entries:
        if entry.object_id in seen:
            raise ValidationError("duplicate object_id '%s' in catalog"
                                  % entry.object_id)
        seen.add(entry.object_id)
        _check_entry(entry, config)


def _max_aperture(config):
    return max(width for _, width in config.sim.apertures)


def _check_entry(entry, config):
    """ Raise ValidationError naming the first violated object invariant.
    """
    if entry.material not in MATERIAL_LABELS:
        raise ValidationError("object '%s': unknown material '%s'"
                              % (entry.object_id, entry.material))
    if entry.split not in ('train', 'test'):
        raise ValidationError("object '%s': split must be 'train' or 'test'"
                              % entry.object_id)
    problems = geometry.polygon_problems(entry.vertices)
    if problems:
        raise ValidationError("object '%s': %s" % (entry.object_id,
                                                   problems[0]))
    limit = _max_aperture(config) * config.sim.diameter_factor
    if geometry.diameter(entry.vertices) > limit:
        raise ValidationError("object '%s': polygon diameter exceeds max "
                              "gripper aperture x %g"
                              % (entry.object_id, config.sim.diameter_factor))
    if entry.graspable_axes is not None and not entry.graspable_axes:
        raise ValidationError("object '%s': graspable_axes must be non-empty"
                              % entry.object_id)
    if entry.height <= 0:
        raise ValidationError("object '%s': height must be > 0"
                              % entry.object_id)


def _entry_for_spec(object_spec, rng):
    """ Turn a scene spec (entry, builtin name or random spec) into an entry.
    """
    if isinstance(object_spec, CatalogEntry):
        return object_spec
    if isinstance(object_spec, str):
        if object_spec not in BUILTIN_ENTRIES:
            raise ValidationError("unknown catalog object '%s'" % object_spec)
        return BUILTIN_ENTRIES[object_spec]
    if isinstance(object_spec, RandomPolygonSpec):
        if object_spec.n_vertices < 3:
            raise ValidationError("polygon must have at least 3 vertices")
        low, high = object_spec.radius_range
        if not 0 < low <= high:
            raise ValidationError("random polygon radius_range must satisfy "
                                  "0 < min <= max")
        vertices = star_vertices(rng, object_spec.n_vertices,
                                 object_spec.radius_range)
        object_id = (object_spec.object_id
                     or "random_%d" % object_spec.n_vertices)
        return CatalogEntry(object_id, 'random', vertices,
                            object_spec.material, height=object_spec.height)
    raise ValidationError("object spec must be a catalog entry, a builtin "
                          "name or a RandomPolygonSpec")


def create_scene(seed, object_spec, config=None, orientation=None,
                 position=None):
    """Build the deterministic scene (Workspace, ObjectInstance) for
    'seed' and 'object_spec'.

    The outline is re-centred on its area centroid; the pose is drawn
    uniformly inside the extents shrunk by max(placement_margin,
    circumradius) so every vertex lies inside.  'orientation' and
    'position' pin the pose for evaluation protocols.

    """
    config = config or RunConfig()
    rng = make_rng(seed)
    workspace = Workspace.from_config(config)
    entry = _entry_for_spec(object_spec, rng)
    _check_entry(entry, config)
    vertices = geometry.as_vertices(entry.vertices)
    vertices = vertices - geometry.centroid(vertices)
    axes = entry.graspable_axes
    if axes is None:
        axes = geometry.principal_axes(vertices, _max_aperture(config))
    margin = max(config.sim.placement_margin, geometry.circumradius(vertices))
    low_x = workspace.x_extent[0] + margin
    high_x = workspace.x_extent[1] - margin
    low_y = workspace.y_extent[0] + margin
    high_y = workspace.y_extent[1] - margin
    if low_x > high_x or low_y > high_y:
        raise ValidationError("object '%s' does not fit inside the workspace "
                              "extents" % entry.object_id)
    x_pos, y_pos = rng.uniform(low_x, high_x), rng.uniform(low_y, high_y)
    theta = rng.uniform(-math.pi, math.pi)
    if position is not None:
        x_pos, y_pos = position
    if orientation is not None:
        theta = orientation
    instance = ObjectInstance(
        object_id=entry.object_id,
        polygon=tuple(tuple(float(c) for c in vertex) for vertex in vertices),
        pose=(float(x_pos), float(y_pos), float(theta)),
        material=material_table(config)[entry.material],
        graspable_axes=tuple(tuple(axis) for axis in axes),
        height=entry.height,
        split=entry.split,
        test_set=entry.test_set,
    )
    world = instance.world_vertices()
    if not all(workspace.contains(x, y) for x, y in world):
        raise ValidationError("object '%s' vertices must lie inside the "
                              "workspace extents" % entry.object_id)
    return workspace, instance


def _generated_entry(rng, object_id, material, split, config):
    """ One randomly shaped catalog entry for gen_catalog().
    """
    kind = ('box', 'box', 'cylinder', 'prism', 'irregular')[
        int(rng.integers(0, 5))]
    height = float(rng.uniform(0.05, 0.15))
    if kind == 'box':
        entry = box_entry(object_id, float(rng.uniform(0.03, 0.07)),
                          float(rng.uniform(0.03, 0.08)), material,
                          height=height, split=split)
    elif kind == 'cylinder':
        entry = regular_entry(object_id, 12, float(rng.uniform(0.015, 0.035)),
                              material, shape='cylinder', height=height,
                              split=split)
    elif kind == 'prism':
        entry = regular_entry(object_id, int(rng.integers(3, 7)),
                              float(rng.uniform(0.02, 0.04)), material,
                              shape='prism', height=height, split=split)
    else:
        entry = CatalogEntry(object_id, 'irregular',
                             star_vertices(rng, int(rng.integers(5, 9)),
                                           (0.015, 0.04)),
                             material, height=height, split=split)
    if split == 'test':
        entry = replace(entry, test_set='A' if kind in ('irregular', 'prism')
                        else 'B')
    _check_entry(entry, config)
    return entry


def gen_catalog(config=None, seed=None):
    """Generate a catalog with config.collection.catalog_train training
    objects and catalog_test held-out objects.  Materials are assigned
    round robin so each split covers all 7 materials once it has at
    least 7 objects.

    """
    config = config or RunConfig()
    seed = config.seed if seed is None else seed
    rng = make_rng(seed, 1)
    entries = []
    for split, count in (('train', config.collection.catalog_train),
                         ('test', config.collection.catalog_test)):
        for index in range(count):
            material = MATERIAL_LABELS[index % len(MATERIAL_LABELS)]
            object_id = "%s_%03d_%s" % (split, index, material)
            entries.append(_generated_entry(rng, object_id, material, split,
                                            config))
    catalog = Catalog(entries)
    validate_catalog(catalog, config)
    LOGGER.info("generated catalog with %d train and %d test objects",
                config.collection.catalog_train,
                config.collection.catalog_test)
    return catalog
