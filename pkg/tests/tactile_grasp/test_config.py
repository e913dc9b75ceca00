"""
Tests for run configuration loading and validation

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

import pytest

from tactile_grasp.config import RunConfig, apply_overrides, load_config
from tactile_grasp.errors import EXIT_CONFIG, ConfigError
from tactile_grasp.utils import make_rng, wrap_angle


def test_defaults():
    """ The default configuration is valid and carries the protocol.
    """
    config = RunConfig()
    config.validate()
    assert config.aperture('pinch') == 0.06
    assert config.aperture('wide') == 0.11
    assert config.collection.set2_grasps == (80, 100)
    assert config.gwos.initializer == "touch+random"
    assert len(config.materials) == 7


def test_partial_dict_and_digest():
    """Partial dictionaries fill in defaults; the digest depends only on
    the values.

    """
    config = RunConfig.from_dict({'seed': 5, 'gwos': {'t_max': 3}})
    assert config.seed == 5
    assert config.gwos.t_max == 3
    assert config.gwos.p_threshold == 0.8
    again = RunConfig.from_dict(config.to_dict())
    assert again == config
    assert again.digest() == config.digest()
    assert RunConfig().digest() != config.digest()


def test_rejects_bad_configs():
    """ Unknown keys, wrong types and violated invariants raise.
    """
    bad = [
        {'colour': 1},
        {'gwos': {'colour': 1}},
        {'gwos': {'t_max': 1.5}},
        {'gwos': {'t_max': 0}},
        {'gwos': {'p_threshold': 1.0}},
        {'gwos': {'initializer': "psychic"}},
        {'filter': {'w_occupied': 0.5}},
        {'encoder': {'latent_dim': 256, 'lstm_hidden': 128}},
        {'encoder': {'window_s': 1.01}},
        {'materials': {'wood': [1.0, 2.0]}},
        {'materials': {'cheese': [1.0, 0.5, 0.1]}},
        {'workspace': {'x_extent': [1.0, 0.0]}},
        {'heads': {'holdout_fraction': 0.9}},
    ]
    for data in bad:
        with pytest.raises(ConfigError) as info:
            RunConfig.from_dict(data)
        assert info.value.exit_code == EXIT_CONFIG


def test_zero_threshold_is_allowed():
    """ p_threshold = 0 stops after the first grasp, it is legal.
    """
    assert RunConfig.from_dict({'gwos': {'p_threshold': 0}}).gwos \
        .p_threshold == 0.0


def test_overrides(tmp_path):
    """ Dotted overrides apply on top of the file.
    """
    path = tmp_path / "run.json"
    path.write_text(json.dumps({'seed': 3, 'heads': {'epochs': 4}}))
    config = load_config(str(path), ["heads.epochs=7", "gwos.initializer="
                                     "oracle", "seed=9"])
    assert config.heads.epochs == 7
    assert config.gwos.initializer == "oracle"
    assert config.seed == 9
    assert apply_overrides({}, ["a.b=[1, 2]"]) == {'a': {'b': [1, 2]}}
    with pytest.raises(ConfigError):
        apply_overrides({}, ["no_equals_sign"])
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))
    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "broken.json"))


def test_make_rng_streams():
    """ Equal key paths give equal streams, different paths differ.
    """
    first = make_rng(7, 2, 1, 0).random(5)
    again = make_rng(7, 2, 1, 0).random(5)
    other = make_rng(7, 2, 1, 1).random(5)
    assert (first == again).all()
    assert not (first == other).all()


def test_wrap_angle():
    """ Angles wrap into [-pi, pi).
    """
    assert wrap_angle(3.5) == pytest.approx(3.5 - 2 * 3.141592653589793)
    assert wrap_angle(3.141592653589793) == pytest.approx(
        -3.141592653589793)
    assert wrap_angle(0.25) == pytest.approx(0.25)
