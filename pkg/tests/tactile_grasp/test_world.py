"""
Tests for the planar world: geometry, the object catalog, probe scans,
grasp execution and object displacement

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
import pytest
from shapely.geometry import LineString

from tactile_grasp.config import RunConfig
from tactile_grasp.errors import ArgumentError, ValidationError
from tactile_grasp.utils import make_rng, wrap_angle
from tactile_grasp.world import (
    Catalog,
    CatalogEntry,
    GraspPose,
    RandomPolygonSpec,
    Workspace,
    create_scene,
    displace_object,
    execute_grasp,
    gen_catalog,
    line_scan,
    load_catalog,
    save_catalog,
)
from tactile_grasp.world import geometry

from .conftest import tiny_config


def _centred_box(config=None):
    return create_scene(7, "box_5cm", config, orientation=0.0,
                        position=(0.3, 0.3))


def _on_axis(obj):
    return float(wrap_angle(obj.world_axes()[0][0]))


def test_geometry_basics():
    """ Area sign, centroid, widths and axis distances.
    """
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert geometry.polygon_area(square) == 1.0
    assert geometry.polygon_area(square[::-1]) == -1.0
    assert geometry.centroid(square) == pytest.approx([0.5, 0.5])
    assert geometry.width_along(square, 0.0) == pytest.approx(1.0)
    assert geometry.width_along(square, math.pi / 4) == pytest.approx(
        math.sqrt(2.0))
    assert geometry.axis_distance(0.1, math.pi + 0.1) == pytest.approx(0.0)
    assert geometry.axis_distance(math.pi / 2, 0.0) == pytest.approx(
        math.pi / 2)
    assert geometry.polygon_problems(square) == []
    assert "counterclockwise" in geometry.polygon_problems(square[::-1])[0]
    bowtie = [(0, 0), (1, 1), (1, 0), (0, 1)]
    assert "simple" in geometry.polygon_problems(bowtie)[0]
    assert "3 vertices" in geometry.polygon_problems(square[:2])[0]


def test_principal_axes():
    """A long thin box only offers the short axis; a round outline
    accepts every orientation.

    """
    long_box = [(-0.1, -0.01), (0.1, -0.01), (0.1, 0.01), (-0.1, 0.01)]
    axes = geometry.principal_axes(long_box, 0.11)
    assert len(axes) == 1
    assert geometry.axis_distance(axes[0][0], math.pi / 2) < 1e-9
    circle = [(0.03 * math.cos(a), 0.03 * math.sin(a))
              for a in np.linspace(0, 2 * math.pi, 40, endpoint=False)]
    axes = geometry.principal_axes(circle, 0.11)
    assert axes == [(0.0, math.pi / 2.0)]


def test_create_scene_deterministic():
    """ Same seed and spec give bit-identical scenes.
    """
    first = create_scene(7, "box_5cm")
    second = create_scene(7, "box_5cm")
    assert first == second
    _, obj = first
    assert obj.area() == pytest.approx(0.05 * 0.05)
    assert obj.material.label == 'wood'
    assert create_scene(8, "box_5cm")[1].pose != obj.pose


def test_random_polygon_scene():
    """ A seeded random hexagon lies inside the workspace extents.
    """
    workspace, obj = create_scene(8, RandomPolygonSpec(n_vertices=6))
    vertices = obj.world_vertices()
    assert vertices.shape == (6, 2)
    assert all(workspace.contains(x, y) for x, y in vertices)
    assert geometry.polygon_problems(obj.polygon) == []


def test_create_scene_rejects_bad_specs():
    """ Invalid outlines and unknown specs name the problem.
    """
    bowtie = CatalogEntry("bowtie", 'polygon',
                          ((0, 0), (0.03, 0.03), (0.03, 0), (0, 0.03)),
                          'wood')
    with pytest.raises(ValidationError, match="simple"):
        create_scene(1, bowtie)
    with pytest.raises(ValidationError, match="unknown catalog object"):
        create_scene(1, "no_such_object")
    with pytest.raises(ValidationError, match="3 vertices"):
        create_scene(1, RandomPolygonSpec(n_vertices=2))
    with pytest.raises(ValidationError, match="unknown material"):
        create_scene(1, CatalogEntry("x", 'box', ((0, 0), (0.02, 0),
                                                  (0.02, 0.02)), 'cheese'))
    with pytest.raises(ValidationError):
        Workspace((0.5, 0.1), (0.0, 0.6))


def test_line_scan_examples():
    """ Contact, miss, and a start inside the object.
    """
    workspace, obj = _centred_box()
    hit = line_scan(workspace, obj, (0.0, 0.3), (1.0, 0.0), 0.6)
    assert hit.contact
    assert hit.contact_point == pytest.approx((0.275, 0.3))
    assert hit.swept_segment[0] == (0.0, 0.3)

    miss = line_scan(workspace, obj, (0.0, 0.1), (1.0, 0.0), 0.6)
    assert not miss.contact
    assert miss.contact_point is None
    assert miss.swept_segment == ((0.0, 0.1), pytest.approx((0.6, 0.1)))

    inside = line_scan(workspace, obj, (0.3, 0.3), (0.0, 1.0), 0.2)
    assert inside.contact
    assert inside.contact_point == (0.3, 0.3)

    clipped = line_scan(workspace, None, (0.5, 0.5), (1.0, 0.0), 1.0)
    assert clipped.swept_segment[1] == pytest.approx((0.6, 0.5))

    with pytest.raises(ArgumentError):
        line_scan(workspace, obj, (0.0, 0.3), (0.0, 0.0), 0.6)
    with pytest.raises(ArgumentError):
        line_scan(workspace, obj, (0.0, 0.3), (2.0, 0.0), 0.6)
    with pytest.raises(ArgumentError):
        line_scan(workspace, obj, (0.9, 0.3), (1.0, 0.0), 0.6)


def test_line_scan_matches_dense_sampling():
    """The first contact agrees with dense sampling along the ray at
    1e-4 m steps on random scenes.

    """
    step = 1e-4
    rng = make_rng(99)
    for index in range(200):
        workspace, obj = create_scene(1000 + index,
                                      RandomPolygonSpec(n_vertices=7))
        vertices = obj.world_vertices()
        start = rng.uniform(0.0, 0.6, 2)
        angle = rng.uniform(-math.pi, math.pi)
        direction = np.array([math.cos(angle), math.sin(angle)])
        result = line_scan(workspace, obj, start, direction, 0.6)
        length = min(0.6, geometry.ray_box_exit(start, direction,
                                                workspace.x_extent,
                                                workspace.y_extent))
        samples = np.arange(0.0, length + step, step)
        samples = samples[samples <= length + 1e-12]
        points = start + samples[:, None] * direction
        inside = geometry.covers_xy(vertices, points[:, 0], points[:, 1])
        if inside.any():
            t_oracle = samples[int(np.argmax(inside))]
            assert result.contact
            t_hit = math.dist(start, result.contact_point)
            assert abs(t_hit - t_oracle) <= 2e-4
        elif result.contact:
            # Only a chord shorter than the sampling step can be missed.
            ray = LineString([tuple(start),
                              tuple(start + length * direction)])
            chord = ray.intersection(geometry.to_shapely(vertices)).length
            assert chord < 2 * step


def _pose(obj, config, offset=(0.0, 0.0), theta=None, z=0.03,
          mode='normal'):
    theta = _on_axis(obj) if theta is None else theta
    return GraspPose(obj.pose[0] + offset[0], obj.pose[1] + offset[1], z,
                     theta, mode).validate(Workspace.from_config(config))


def test_execute_grasp_examples():
    """A perfect grasp on a slip free object succeeds; a grasp far from
    the object never touches it.

    """
    config = tiny_config(materials={'wood': [2500.0, 0.5, 0.0]})
    workspace, obj = _centred_box(config)
    outcome = execute_grasp(workspace, obj, _pose(obj, config),
                            make_rng(1), config)
    assert outcome.success
    assert outcome.contact
    assert outcome.enclosure_dof < config.sim.f_max

    far = execute_grasp(workspace, obj, _pose(obj, config, (0.10, 0.0)),
                        make_rng(1), config)
    assert not far.success
    assert not far.contact
    assert far.enclosure_dof == config.sim.f_max
    assert far.object_displacement == (0.0, 0.0, 0.0)

    empty = execute_grasp(workspace, None, _pose(obj, config), make_rng(1),
                          config)
    assert not empty.success
    assert empty.enclosure_dof == config.sim.f_max


def test_execute_grasp_failure_conditions():
    """ Misaligned, too high and too narrow grasps fail.
    """
    config = tiny_config(materials={'wood': [2500.0, 0.5, 0.0]})
    workspace, obj = _centred_box(config)
    rng = make_rng(3)
    off_axis = float(wrap_angle(_on_axis(obj) + math.pi / 4))
    assert not execute_grasp(workspace, obj,
                             _pose(obj, config, theta=off_axis), rng,
                             config).success
    assert not execute_grasp(workspace, obj, _pose(obj, config, z=0.075),
                             rng, config).success
    big = CatalogEntry("big", 'box', ((-0.04, -0.04), (0.04, -0.04),
                                      (0.04, 0.04), (-0.04, 0.04)), 'wood')
    workspace, obj = create_scene(2, big, config, orientation=0.0,
                                  position=(0.3, 0.3))
    assert not execute_grasp(workspace, obj,
                             _pose(obj, config, mode='pinch'), rng,
                             config).success
    assert execute_grasp(workspace, obj, _pose(obj, config, mode='wide'),
                         rng, config).success


def test_success_monotone_in_offset():
    """ With slip disabled, success never returns once the offset grows.
    """
    config = tiny_config(materials={'wood': [2500.0, 0.5, 0.0]})
    workspace, obj = _centred_box(config)
    results = []
    for offset in np.linspace(0.0, 0.04, 41):
        outcome = execute_grasp(workspace, obj,
                                _pose(obj, config, (offset, 0.0)),
                                make_rng(5), config)
        results.append(outcome.success)
    assert results[0]
    first_failure = results.index(False)
    assert not any(results[first_failure:])
    assert 0.0149 <= np.linspace(0.0, 0.04, 41)[first_failure] <= 0.017


def test_glass_slip_rate():
    """Centred, aligned grasps on glass succeed at 1 - slip_proneness x
    slip_floor.

    """
    config = RunConfig()
    workspace, obj = create_scene(7, CatalogEntry(
        "glass_box", 'box', ((-0.025, -0.025), (0.025, -0.025),
                             (0.025, 0.025), (-0.025, 0.025)), 'glass'),
        config, orientation=0.0, position=(0.3, 0.3))
    grasp = _pose(obj, config)
    rng = make_rng(11)
    trials = 4000
    successes = sum(execute_grasp(workspace, obj, grasp, rng,
                                  config).success for _ in range(trials))
    expected = 1.0 - 0.3 * config.sim.slip_floor
    assert abs(successes / trials - expected) < 0.03


def test_execute_grasp_deterministic():
    """ Identical rng states give identical outcome streams.
    """
    config = RunConfig()
    workspace, obj = _centred_box(config)
    grasps = [_pose(obj, config, (dx, 0.0)) for dx in (0.0, 0.01, 0.03)]
    first = [execute_grasp(workspace, obj, grasp, make_rng(4, i), config)
             for i, grasp in enumerate(grasps)]
    second = [execute_grasp(workspace, obj, grasp, make_rng(4, i), config)
              for i, grasp in enumerate(grasps)]
    assert first == second


def test_off_centre_push_is_bounded():
    """ Off centre contact displaces the object by at most the cap.
    """
    config = RunConfig()
    workspace, obj = _centred_box(config)
    rng = make_rng(8)
    for _ in range(200):
        outcome = execute_grasp(workspace, obj, _pose(obj, config,
                                                      (0.02, 0.01)),
                                rng, config)
        d_x, d_y, _ = outcome.object_displacement
        assert math.hypot(d_x, d_y) <= config.sim.displacement_cap + 1e-12


def test_successful_off_centre_grasp_moves_object():
    """A held object is dragged towards the gripper centre, never past
    it; a centred grasp leaves it in place.

    """
    config = tiny_config(materials={'wood': [2500.0, 0.5, 0.0]})
    workspace, obj = _centred_box(config)
    grasp = _pose(obj, config, (0.01, 0.0))
    moved = 0
    for index in range(50):
        outcome = execute_grasp(workspace, obj, grasp, make_rng(9, index),
                                config)
        assert outcome.success
        d_x, d_y, _ = outcome.object_displacement
        assert 0.0 <= d_x <= 0.01 + 1e-12
        assert d_y == pytest.approx(0.0, abs=1e-12)
        after = displace_object(obj, outcome.object_displacement, workspace)
        assert abs(after.pose[0] - grasp.x) <= abs(obj.pose[0] - grasp.x)
        moved += d_x > 0.0
    assert moved > 40
    centred = execute_grasp(workspace, obj, _pose(obj, config), make_rng(9),
                            config)
    assert centred.object_displacement == (0.0, 0.0, 0.0)


def test_displace_object():
    """ Identity, additive moves, clamping, and area preservation.
    """
    workspace, obj = _centred_box()
    assert displace_object(obj, (0, 0, 0), workspace).pose == obj.pose
    moved = displace_object(obj, (0.01, 0.0, 0.0), workspace)
    assert moved.pose[:2] == pytest.approx((0.31, 0.3))
    assert moved.polygon == obj.polygon
    pushed = displace_object(obj, (1.0, 0.0, 0.3), workspace)
    assert all(workspace.contains(x, y, tol=1e-12)
               for x, y in pushed.world_vertices())
    assert pushed.area() == obj.area()
    assert geometry.polygon_area(pushed.world_vertices()) == pytest.approx(
        geometry.polygon_area(obj.world_vertices()), abs=1e-15)


def test_grasp_pose_validation():
    """ Bad modes, positions, heights and angles are refused.
    """
    workspace = Workspace()
    GraspPose(0.3, 0.3, 0.0, 0.0).validate(workspace)
    for pose in (GraspPose(0.3, 0.3, 0.0, 0.0, 'huge'),
                 GraspPose(0.7, 0.3, 0.0, 0.0),
                 GraspPose(0.3, 0.3, -0.1, 0.0),
                 GraspPose(0.3, 0.3, 0.0, math.pi)):
        with pytest.raises(ValidationError):
            pose.validate(workspace)


def test_gen_catalog(tmp_path):
    """Generated catalogs are deterministic, cover every material in
    both splits and survive a save / load.

    """
    config = tiny_config(collection={'catalog_train': 14,
                                     'catalog_test': 7})
    catalog = gen_catalog(config, seed=4)
    assert len(catalog.split('train')) == 14
    assert len(catalog.split('test')) == 7
    assert len(catalog.materials('train')) == 7
    assert len(catalog.materials('test')) == 7
    assert all(entry.test_set in ('A', 'B')
               for entry in catalog.split('test'))
    assert all(entry.test_set is None for entry in catalog.split('train'))
    assert gen_catalog(config, seed=4).to_dict() == catalog.to_dict()
    path = str(tmp_path / "catalog.json")
    save_catalog(catalog, path)
    assert load_catalog(path).to_dict() == catalog.to_dict()


def test_load_catalog_errors(tmp_path):
    """ Wrong versions, duplicates and bad JSON fail validation.
    """
    path = tmp_path / "catalog.json"
    path.write_text('{"format_version": 2, "objects": []}')
    with pytest.raises(ValidationError, match="format_version"):
        load_catalog(str(path))
    path.write_text("{")
    with pytest.raises(ValidationError):
        load_catalog(str(path))
    entry = CatalogEntry("dup", 'box', ((-0.01, -0.01), (0.01, -0.01),
                                        (0.01, 0.01)), 'wood')
    save_catalog(Catalog([entry, entry]), str(path))
    with pytest.raises(ValidationError, match="duplicate"):
        load_catalog(str(path))
