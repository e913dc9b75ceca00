"""Shared fixtures for the tactile_grasp tests

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
import os

import numpy as np
import pytest

from tactile_grasp import cli
from tactile_grasp.config import Config, RunConfig
from tactile_grasp.features.autoencoder import (
    ConditionalAutoencoder,
    EncoderConfig,
)
from tactile_grasp.heads.bins import DEFAULT_BINS
from tactile_grasp.heads.networks import RegraspPolicyNet, StabilityNet
from tactile_grasp.pipeline.bundle import ModelBundle
from tactile_grasp.pipeline.reports import load_metrics
from tactile_grasp.world.catalog import Catalog, box_entry, regular_entry


def pytest_configure(config):
    """ Register the marker of the acceptance scale tests.
    """
    config.addinivalue_line(
        "markers", "slow: acceptance scale test, runs only when "
        "TACTILE_GRASP_SLOW_TESTS=yes")


def pytest_collection_modifyitems(config, items):  # pylint: disable=W0613
    """ Skip slow tests unless TACTILE_GRASP_SLOW_TESTS=yes.
    """
    if Config.TACTILE_GRASP_SLOW_TESTS:
        return
    skip = pytest.mark.skip(reason="set TACTILE_GRASP_SLOW_TESTS=yes")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


TINY_CONFIG = {
    'seed': 11,
    'filter': {'n_particles': 300, 'w_occupied': 1000.0, 'w_free': 0.05},
    'encoder': {'latent_dim': 4, 'lstm_hidden': 8, 'window_s': 1.0,
                'training_rate_hz': 10.0, 'learning_rate': 0.01,
                'epochs': 2, 'batch_size': 8, 'min_episodes': 5},
    'heads': {'stability_layers': [8], 'stability_lr': 0.01,
              'policy_layers': [8], 'policy_lr': 0.01,
              'material_layers': [8], 'material_lr': 0.01,
              'linear_lr': 0.01, 'epochs': 3, 'batch_size': 8},
    'collection': {'catalog_train': 7, 'catalog_test': 2,
                   'set1_objects': 2, 'set1_grasps': [2, 2],
                   'set1_regrasps': [1, 1], 'set2_objects': 7,
                   'set2_grasps': [1, 1], 'set2_regrasps': [2, 2]},
    'evaluation': {'test_objects': 2, 'orientations': 8, 'repeats': 1,
                   'touch_objects': 1, 'touch_repeats': 2},
}


def tiny_config(**blocks):
    """ RunConfig built from TINY_CONFIG with some blocks replaced.
    """
    data = {key: (dict(value) if isinstance(value, dict) else value)
            for key, value in TINY_CONFIG.items()}
    for key, value in blocks.items():
        if isinstance(value, dict):
            data.setdefault(key, {}).update(value)
        else:
            data[key] = value
    return RunConfig.from_dict(data)


@pytest.fixture
def config():
    """ Small, fast run configuration.
    """
    return tiny_config()


def constant_head(head, values):
    """'head' with a zero last weight matrix, so its output is the
    constant bias 'values' for every input.

    """
    params = dict(head.parameters())
    last = len(head.architecture['hidden'])
    params['dense%d.W' % last] = np.zeros_like(params['dense%d.W' % last])
    params['dense%d.b' % last] = np.broadcast_to(
        np.asarray(values, dtype=np.float64),
        params['dense%d.b' % last].shape).copy()
    return head.with_parameters(params)


def policy_logits(bin_indices, peak=3.0):
    """ Flat (20,) policy bias peaked at one bin per dimension.
    """
    table = np.zeros((DEFAULT_BINS.dims, DEFAULT_BINS.n_bins))
    for dim, index in enumerate(bin_indices):
        table[dim, index] = peak
    return table.reshape(-1)


def make_bundle(config, stability_logit=0.0, policy_bins=(2, 2, 2, 2),
                seed=3):
    """A ModelBundle with an untrained encoder, a stability head whose
    output logit is constant and a policy always picking 'policy_bins'.

    """
    rng = np.random.default_rng(seed)
    encoder_config = EncoderConfig.from_config(config)
    encoder = ConditionalAutoencoder.create(rng, encoder_config)
    latent = encoder_config.latent_dim
    stability = constant_head(StabilityNet.build(rng, latent, (4,), 1),
                              [stability_logit])
    policy = constant_head(
        RegraspPolicyNet.build(rng, latent, (4,),
                               DEFAULT_BINS.dims * DEFAULT_BINS.n_bins),
        policy_logits(policy_bins))
    return ModelBundle(encoder, encoder_config, stability, policy)


@pytest.fixture
def bundle(config):
    """ Bundle whose stability head always answers p = 0.5.
    """
    return make_bundle(config)


def small_catalog():
    """Seven training objects (one per material) and two held-out
    objects, one in each test set.

    """
    materials = ('metal', 'hard_plastic', 'elastic_plastic',
                 'stuffed_fabric', 'wood', 'glass', 'ceramic')
    entries = []
    for index, material in enumerate(materials):
        if index % 2:
            entries.append(regular_entry("train_%d" % index, 12, 0.025,
                                         material, shape='cylinder'))
        else:
            entries.append(box_entry("train_%d" % index, 0.04, 0.06,
                                     material))
    entries.append(box_entry("test_box", 0.05, 0.05, 'wood', split='test',
                             test_set='B'))
    entries.append(regular_entry("test_prism", 3, 0.03, 'metal',
                                 shape='prism', split='test', test_set='A'))
    return Catalog(entries)


@pytest.fixture
def catalog():
    """ The small_catalog() fixture.
    """
    return small_catalog()


DESK_CONFIG = os.path.join(os.path.dirname(__file__), '..', '..', 'configs',
                           'desk.json')
DESK_COMMANDS = (['gen-catalog'], ['collect'], ['train-ae'], ['train-heads'],
                 ['eval-perception'], ['eval-grasping'])


@pytest.fixture(scope='session')
def desk_reports(tmp_path_factory):
    """Run the whole desk scale pipeline once and return a loader
    for its metrics, 'desk_reports(kind)'.

    """
    root = tmp_path_factory.mktemp("desk")
    for command in DESK_COMMANDS:
        argv = ['--workspace-root', str(root), '--config', DESK_CONFIG]
        assert cli.main(argv + command) == 0, command
    reports = str(root / "reports")
    return lambda kind: load_metrics(reports, kind)
