"""Evaluation harnesses

evaluate_regrasping:  oracle location with a random initial grasp;
                      arms without re-grasping, with random and with
                      learned re-grasps, on held-out objects placed at
                      eight canonical orientations
evaluate_gwos:        the full controller from touch localization and
                      from the noisy oracle, with and without learned
                      re-grasping
evaluate_perception:  material recognition and stability estimation
                      for every feature extractor and classifier pair

Every arm of a grasping evaluation sees the same scenes and the same
random streams, so arms differ only in the re-grasp policy.

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
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..config import GRIPPER_MODES, Config, RunConfig
from ..errors import ContaminationError
from ..features.handcrafted import handcrafted_many
from ..heads.metrics import wilson_interval
from ..heads.training import (
    CLASSIFIER_KINDS,
    train_material,
    train_stability,
)
from ..utils import make_rng, wrap_angle
from ..world import geometry
from ..world.catalog import create_scene
from ..world.sim import best_axis, instability_factor
from .collect import build_training_examples
from .gwos import GwosConfig, run_gwos

LOGGER = logging.getLogger(__name__)

REGRASP_STREAM = 3
GWOS_STREAM = 4
PERCEPTION_STREAM = 5

ORIENTATION_NAMES = ('E', 'NE', 'N', 'NW', 'W', 'SW', 'S', 'SE')
TEST_SETS = ('A', 'B', 'A+B')
FEATURE_KINDS = ('autoencoder', 'handcrafted')


@dataclass(frozen=True)
class Arm:
    """ One evaluated controller variant.
    """
    name: str
    initializer: str
    regrasp: str
    t_max: int = None

    def gwos_config(self, config):
        """ GwosConfig of this arm.
        """
        overrides = {'initializer': self.initializer,
                     'regrasp': self.regrasp}
        if self.t_max is not None:
            overrides['t_max'] = self.t_max
        return GwosConfig.from_config(config, **overrides)


REGRASP_ARMS = (
    Arm('none', 'oracle', 'none', 1),
    Arm('random_single', 'oracle', 'random', 2),
    Arm('random', 'oracle', 'random'),
    Arm('learned', 'oracle', 'learned'),
)

GWOS_ARMS = (
    Arm('touch', 'touch+random', 'none', 1),
    Arm('touch+learned', 'touch+random', 'learned'),
    Arm('noisy_oracle', 'noisy_oracle', 'none', 1),
    Arm('noisy_oracle+learned', 'noisy_oracle', 'learned'),
)


def canonical_orientations(count=8):
    """ 'count' evenly spaced orientations in [-pi, pi), starting at 0.
    """
    return [float(wrap_angle(2.0 * math.pi * index / count))
            for index in range(count)]


@dataclass(frozen=True)
class Trial:
    """ One scene every arm is run on.
    """
    object_index: int
    repeat: int
    entry: object
    orientation_index: int = None
    empty: bool = False

    @property
    def seed_path(self):
        """ Key path of the trial's random streams (after the stream id).
        """
        orientation = -1 if self.orientation_index is None \
            else self.orientation_index
        return (self.object_index, orientation + 1, self.repeat)


@dataclass(frozen=True)
class TrialResult:
    """ Result of one arm on one trial.
    """
    arm: str
    object_id: str
    test_set: str
    orientation: str
    repeat: int
    success: bool
    n_grasps: int
    final_probability: float

    def to_dict(self):
        """ JSON form.
        """
        return {'arm': self.arm, 'object_id': self.object_id,
                'test_set': self.test_set, 'orientation': self.orientation,
                'repeat': self.repeat, 'success': self.success,
                'n_grasps': self.n_grasps,
                'final_probability': self.final_probability}


@dataclass
class GraspingEvaluation:
    """ Per trial results and the accuracy table built from them.
    """
    results: list = field(default_factory=list)
    table: list = field(default_factory=list)

    def cell(self, arm, test_set='A+B'):
        """ Table row of 'arm' on 'test_set'.
        """
        for row in self.table:
            if row['arm'] == arm and row['test_set'] == test_set:
                return row
        return None

    def accuracy(self, arm, test_set='A+B'):
        """ Accuracy of 'arm' on 'test_set'.
        """
        return self.cell(arm, test_set)['accuracy']

    def to_dict(self):
        """ JSON form.
        """
        return {'table': self.table,
                'results': [result.to_dict() for result in self.results]}


def check_held_out(entries, training_objects=()):
    """Raise ContaminationError unless every entry is a held-out object
    that no training record used.

    """
    training_objects = set(training_objects)
    for entry in entries:
        if entry.split != 'test':
            raise ContaminationError("object '%s' is not a held-out object"
                                     % entry.object_id)
        if entry.object_id in training_objects:
            raise ContaminationError("held-out object '%s' appears in the "
                                     "training data" % entry.object_id)


def _run_trial(trial, arms, bundle, config, stream):
    """ Run every arm on one trial.
    """
    seed = config.seed
    if trial.orientation_index is None:
        placement = make_rng(seed, stream, *trial.seed_path, 0)
        scene_seed = int(placement.integers(0, 2 ** 31 - 1))
        workspace, obj = create_scene(scene_seed, trial.entry, config)
        orientation = 'random'
    else:
        angles = canonical_orientations(config.evaluation.orientations)
        workspace, obj = create_scene(
            seed, trial.entry, config,
            orientation=angles[trial.orientation_index],
            position=_workspace_center(config))
        orientation = _orientation_name(trial.orientation_index,
                                        len(angles))
    if trial.empty:
        obj = None
    results = []
    for arm in arms:
        rng = make_rng(seed, stream, *trial.seed_path, 1)
        decisions = make_rng(seed, stream, *trial.seed_path, 2)
        outcome = run_gwos(workspace, obj, bundle, arm.gwos_config(config),
                           rng, config, decision_rng=decisions)
        results.append(TrialResult(
            arm=arm.name,
            object_id=trial.entry.object_id,
            test_set=trial.entry.test_set or 'B',
            orientation=orientation,
            repeat=trial.repeat,
            success=outcome.success,
            n_grasps=outcome.n_grasps,
            final_probability=outcome.steps[-1].probability,
        ))
    return results


def _workspace_center(config):
    x_extent, y_extent = config.workspace.x_extent, config.workspace.y_extent
    return ((x_extent[0] + x_extent[1]) / 2.0,
            (y_extent[0] + y_extent[1]) / 2.0)


def _orientation_name(index, count):
    if count == len(ORIENTATION_NAMES):
        return ORIENTATION_NAMES[index]
    return "%d/%d" % (index, count)


def run_trials(trials, arms, bundle, config, stream, workers=None):
    """Run 'arms' on every trial with TACTILE_GRASP_WORKERS threads.
    Results come back in trial order, then arm order.

    """
    workers = workers or Config.TACTILE_GRASP_WORKERS
    if workers <= 1:
        per_trial = [_run_trial(trial, arms, bundle, config, stream)
                     for trial in trials]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(
                lambda trial: _run_trial(trial, arms, bundle, config, stream),
                trials))
    return [result for results in per_trial for result in results]


def accuracy_table(results, arms):
    """Rows {arm, test_set, successes, trials, accuracy, ci_low,
    ci_high} for every arm and test set A, B and A+B (95 % Wilson
    intervals).  Test sets without trials are left out.

    """
    table = []
    for arm in arms:
        for test_set in TEST_SETS:
            chosen = [result for result in results if result.arm == arm.name
                      and (test_set == 'A+B' or result.test_set == test_set)]
            if not chosen:
                continue
            successes = sum(1 for result in chosen if result.success)
            low, high = wilson_interval(successes, len(chosen))
            table.append({
                'arm': arm.name,
                'test_set': test_set,
                'successes': successes,
                'trials': len(chosen),
                'accuracy': successes / len(chosen),
                'ci_low': low,
                'ci_high': high,
                'mean_grasps': float(np.mean([result.n_grasps
                                              for result in chosen])),
            })
    return table


def _log_table(title, table):
    for row in table:
        if row['test_set'] == 'A+B':
            LOGGER.info("%s %s: %d/%d = %.3f [%.3f, %.3f]", title,
                        row['arm'], row['successes'], row['trials'],
                        row['accuracy'], row['ci_low'], row['ci_high'])


def evaluate_regrasping(catalog, bundle, config=None, training_objects=(),
                        arms=REGRASP_ARMS, workers=None):
    """Re-grasping evaluation with oracle object locations.

    The first evaluation.test_objects held-out objects are placed at
    the workspace centre in each of evaluation.orientations canonical
    orientations, evaluation.repeats times.  Raises ContaminationError
    when an evaluated object is not held out or appears in
    'training_objects'.

    """
    config = config or RunConfig()
    params = config.evaluation
    entries = catalog.split('test')[:params.test_objects]
    check_held_out(entries, training_objects)
    trials = [Trial(object_index, repeat, entry, orientation_index)
              for object_index, entry in enumerate(entries)
              for orientation_index in range(params.orientations)
              for repeat in range(params.repeats)]
    results = run_trials(trials, arms, bundle, config, REGRASP_STREAM,
                         workers)
    table = accuracy_table(results, arms)
    _log_table("re-grasping", table)
    return GraspingEvaluation(results, table)


def evaluate_gwos(catalog, bundle, config=None, training_objects=(),
                  arms=GWOS_ARMS, empty=False, workers=None):
    """Full controller evaluation on randomly placed held-out objects:
    evaluation.touch_objects objects, evaluation.touch_repeats placements
    each.  With 'empty' the object is removed from every scene.

    """
    config = config or RunConfig()
    params = config.evaluation
    entries = catalog.split('test')[:params.touch_objects]
    check_held_out(entries, training_objects)
    trials = [Trial(object_index, repeat, entry, empty=empty)
              for object_index, entry in enumerate(entries)
              for repeat in range(params.touch_repeats)]
    results = run_trials(trials, arms, bundle, config, GWOS_STREAM, workers)
    table = accuracy_table(results, arms)
    _log_table("gwos", table)
    return GraspingEvaluation(results, table)


def oracle_success_probability(workspace, obj, gwos, config=None,
                               n_theta=3600):
    """Probability that the oracle initializer's first grasp succeeds
    on 'obj': theta, z and mode are uniform, the gripper is centred.
    The theta average is taken over an evenly spaced grid.

    """
    config = config or RunConfig()
    z_low = workspace.grasp_plane_z + gwos.z_range[0]
    z_high = workspace.grasp_plane_z + gwos.z_range[1]
    band_low = workspace.grasp_plane_z + config.sim.z_clearance
    band_high = workspace.grasp_plane_z + obj.height - config.sim.z_top_margin
    overlap = max(0.0, min(z_high, band_high) - max(z_low, band_low))
    if z_high > z_low:
        p_height = overlap / (z_high - z_low)
    else:
        p_height = float(band_low <= z_low <= band_high)
    vertices = obj.world_vertices()
    total = 0.0
    thetas = -math.pi + 2.0 * math.pi * np.arange(n_theta) / n_theta
    for theta in thetas:
        axis_error, axis_tol = best_axis(obj, theta)
        if axis_error > axis_tol:
            continue
        hold = 1.0 - obj.material.slip_proneness * instability_factor(
            0.0, axis_error, axis_tol, config)
        width = geometry.width_along(vertices, theta)
        fits = sum(1 for mode in GRIPPER_MODES
                   if width <= config.aperture(mode))
        total += hold * fits / len(GRIPPER_MODES)
    return p_height * total / n_theta


def evaluate_perception(dataset, bundle, config=None, seed=None,
                        features=FEATURE_KINDS, classifiers=CLASSIFIER_KINDS):
    """Material recognition and stability estimation for every pair of
    feature extractor and classifier kind.

    Returns {'material': {feature: {classifier: metrics}},
    'stability': {...}}.  Every cell trains from its own stream
    make_rng(seed, 5, task, feature, classifier).

    """
    config = config or RunConfig()
    seed = config.seed if seed is None else seed
    examples = build_training_examples(dataset, bundle)
    episodes = [episode for record in dataset.split('train')
                for episode in dataset.episodes(record)]
    matrices = {
        'autoencoder': np.stack([example.latent for example in examples]),
        'handcrafted': handcrafted_many(episodes),
    }
    materials = [example.material for example in examples]
    grid = {'material': {}, 'stability': {}}
    for feature_index, feature in enumerate(features):
        for kind_index, kind in enumerate(classifiers):
            rng = make_rng(seed, PERCEPTION_STREAM, 0, feature_index,
                           kind_index)
            trained = train_material(matrices[feature], materials, kind,
                                     config, rng)
            grid['material'].setdefault(feature, {})[kind] = trained.metrics
            rng = make_rng(seed, PERCEPTION_STREAM, 1, feature_index,
                           kind_index)
            trained = train_stability(examples, config, rng, kind,
                                      matrices[feature])
            grid['stability'].setdefault(feature, {})[kind] = trained.metrics
            LOGGER.info("perception %s/%s: material %.3f, stability %.3f",
                        feature, kind,
                        grid['material'][feature][kind][
                            'average_class_accuracy'],
                        grid['stability'][feature][kind]['accuracy'])
    return grid
