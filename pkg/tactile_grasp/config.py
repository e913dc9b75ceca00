"""Configuration for tactile_grasp

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
import dataclasses
import json
import os
from dataclasses import dataclass, field

from .errors import ConfigError
from .utils import digest_json
from .version import VERSION


class Config:
    """tactile_grasp Config class stores process level settings taken
    from the environment.  Specifically, this will be the settings:

        TACTILE_GRASP_LOG_LEVEL - the logging level used by the command
                                  line interface when --log-level is not
                                  given
        TACTILE_GRASP_WORKERS - number of worker threads used to run
                                evaluation trials
        TACTILE_GRASP_SLOW_TESTS - boolean indicating whether the
                                   acceptance scale tests should run
        TACTILE_GRASP_VERSION - the current version of the module.

    Everything that shapes an experiment lives in RunConfig instead,
    so that it is captured by the run's config digest.

    """
    TACTILE_GRASP_LOG_LEVEL = os.environ.get('TACTILE_GRASP_LOG_LEVEL',
                                             "WARNING").upper()
    TACTILE_GRASP_WORKERS = int(os.environ.get('TACTILE_GRASP_WORKERS', "1"))
    TACTILE_GRASP_SLOW_TESTS = os.environ.get("TACTILE_GRASP_SLOW_TESTS",
                                              "no").lower() == 'yes'
    TACTILE_GRASP_VERSION = VERSION


MATERIAL_LABELS = (
    'metal',
    'hard_plastic',
    'elastic_plastic',
    'stuffed_fabric',
    'wood',
    'glass',
    'ceramic',
)

GRIPPER_MODES = ('pinch', 'normal', 'wide')


def _default_materials():
    """ (stiffness N/m, friction, slip_proneness) per material label.
    """
    return {
        'metal': (5000.0, 0.40, 0.05),
        'hard_plastic': (3000.0, 0.50, 0.10),
        'elastic_plastic': (1200.0, 0.60, 0.15),
        'stuffed_fabric': (600.0, 0.80, 0.05),
        'wood': (2500.0, 0.50, 0.10),
        'glass': (4500.0, 0.30, 0.30),
        'ceramic': (4000.0, 0.35, 0.20),
    }


@dataclass(frozen=True)
class PathParams:
    """ Artifact locations, relative to the workspace root.
    """
    catalog: str = "catalog.json"
    dataset: str = "dataset.jsonl"
    haptics: str = "haptics.npy"
    models: str = "models"
    reports: str = "reports"


@dataclass(frozen=True)
class WorkspaceParams:
    """ The bounded 2D grasp plane.
    """
    x_extent: tuple = (0.0, 0.6)
    y_extent: tuple = (0.0, 0.6)
    grasp_plane_z: float = 0.0


@dataclass(frozen=True)
class SimParams:
    """ Ground-truth grasp success and displacement model.
    """
    f_max: float = 255.0
    center_tol: float = 0.015
    displacement_cap: float = 0.02
    displacement_onset: float = 0.005
    slip_floor: float = 0.5
    apertures: tuple = (('pinch', 0.06), ('normal', 0.085), ('wide', 0.11))
    diameter_factor: float = 1.5
    placement_margin: float = 0.1
    z_clearance: float = 0.005
    z_top_margin: float = 0.01
    geometric_tol: float = 1e-9


@dataclass(frozen=True)
class SensorParams:
    """ Haptic signal synthesis.
    """
    rate_hz: float = 100.0
    duration_range: tuple = (3.5, 4.0)
    noise_sigma: float = 0.2
    compression_m: float = 0.0025
    close_start_s: float = 0.5
    closing_time_s: float = 1.0
    ramp_s: float = 0.3
    stiffness_jitter: float = 0.1
    asymmetry_gain: float = 0.5
    tilt_rad: float = 0.2
    slip_drop: float = 0.3
    slip_recover: float = 0.6
    slip_drop_s: float = 0.1
    slip_recover_s: float = 0.2
    slip_onset_range: tuple = (0.1, 0.3)
    escape_level: float = 0.2
    escape_s: float = 0.3
    shear_gain: float = 0.2


@dataclass(frozen=True)
class FilterParams:
    """ Touch localization particle filter.
    """
    n_particles: int = 1000
    n_scans: int = 10
    scan_spacing: float = 0.05
    sigma: float = 0.005
    vicinity_radius: float = 0.025
    w_occupied: float = 3.0
    w_free: float = 0.2
    push_probability: float = 0.1


@dataclass(frozen=True)
class EncoderParams:
    """ Conditional recurrent autoencoder.
    """
    latent_dim: int = 64
    lstm_hidden: int = 128
    window_s: float = 3.0
    post_enclosure_s: float = 0.5
    training_rate_hz: float = 25.0
    learning_rate: float = 1e-5
    epochs: int = 20
    batch_size: int = 32
    validation_fraction: float = 0.1
    min_episodes: int = 500
    clip_norm: float = 5.0


@dataclass(frozen=True)
class HeadParams:
    """ Supervised heads trained on the latent vector.
    """
    stability_layers: tuple = (512, 512, 256, 128, 64)
    stability_lr: float = 5e-5
    policy_layers: tuple = (256, 128)
    policy_lr: float = 5e-7
    material_layers: tuple = (512, 512, 256, 128, 64)
    material_lr: float = 5e-5
    linear_lr: float = 1e-3
    hinge_l2: float = 1e-4
    epochs: int = 20
    batch_size: int = 32
    holdout_fraction: float = 0.2
    clip_norm: float = 5.0


@dataclass(frozen=True)
class GwosParams:
    """ Closed-loop grasping controller.
    """
    p_threshold: float = 0.8
    t_max: int = 5
    initializer: str = "touch+random"
    sigma_loc: float = 0.01
    sigma_theta: float = 0.2
    z_range: tuple = (0.01, 0.05)


@dataclass(frozen=True)
class CollectionParams:
    """Dataset collection protocol.  Set 1 visits every training object,
    set 2 a material covering subset with more re-grasps.

    """
    catalog_train: int = 52
    catalog_test: int = 20
    set1_objects: int = 52
    set1_grasps: tuple = (50, 55)
    set1_regrasps: tuple = (1, 1)
    set2_objects: int = 7
    set2_grasps: tuple = (80, 100)
    set2_regrasps: tuple = (2, 3)


@dataclass(frozen=True)
class EvaluationParams:
    """ Grasping evaluation protocol.
    """
    test_objects: int = 10
    orientations: int = 8
    repeats: int = 3
    touch_objects: int = 10
    touch_repeats: int = 5


@dataclass(frozen=True)
class RunConfig:
    """The complete, validated configuration of one experiment.  Built
    with RunConfig.from_dict() / load_config(), which reject unknown
    keys.

    """
    seed: int = 0
    paths: PathParams = field(default_factory=PathParams)
    workspace: WorkspaceParams = field(default_factory=WorkspaceParams)
    sim: SimParams = field(default_factory=SimParams)
    materials: dict = field(default_factory=_default_materials)
    sensor: SensorParams = field(default_factory=SensorParams)
    filter: FilterParams = field(default_factory=FilterParams)
    encoder: EncoderParams = field(default_factory=EncoderParams)
    heads: HeadParams = field(default_factory=HeadParams)
    gwos: GwosParams = field(default_factory=GwosParams)
    collection: CollectionParams = field(default_factory=CollectionParams)
    evaluation: EvaluationParams = field(default_factory=EvaluationParams)

    @classmethod
    def from_dict(cls, data):
        """Build a RunConfig from a (possibly partial) nested dictionary,
        filling in defaults and rejecting unknown keys.

        """
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        values = {}
        names = {fld.name: fld for fld in dataclasses.fields(cls)}
        for key, value in data.items():
            if key not in names:
                raise ConfigError("unknown configuration key '%s'" % key)
            if key == 'seed':
                values[key] = _coerce('seed', 0, value)
            elif key == 'materials':
                values[key] = _build_materials(value)
            else:
                values[key] = _build_block(names[key].default_factory,
                                           value, key)
        config = cls(**values)
        config.validate()
        return config

    def to_dict(self):
        """ Plain nested dictionary form (tuples become lists).
        """
        return json.loads(json.dumps(dataclasses.asdict(self)))

    def digest(self):
        """ SHA-256 digest of the canonical JSON form of the config.
        """
        return digest_json(self.to_dict())

    def validate(self):
        """Check cross-field invariants.  Raises ConfigError naming the
        first violated one.

        """
        checks = [
            (self.workspace.x_extent[0] < self.workspace.x_extent[1],
             "workspace.x_extent must have min < max"),
            (self.workspace.y_extent[0] < self.workspace.y_extent[1],
             "workspace.y_extent must have min < max"),
            (set(self.materials) == set(MATERIAL_LABELS),
             "materials must define exactly the 7 material labels"),
            (all(params[0] > 0 for params in self.materials.values()),
             "materials stiffness must be > 0"),
            (all(0 < params[1] <= 1 for params in self.materials.values()),
             "materials friction must be in (0, 1]"),
            (all(0 <= params[2] <= 1 for params in self.materials.values()),
             "materials slip_proneness must be in [0, 1]"),
            (self.sensor.rate_hz > 0, "sensor.rate_hz must be > 0"),
            (self.filter.sigma >= 0, "filter.sigma must be >= 0"),
            (self.filter.w_occupied > 1 > self.filter.w_free > 0,
             "filter weights must satisfy w_occupied > 1 > w_free > 0"),
            (self.filter.n_particles >= 1,
             "filter.n_particles must be >= 1"),
            (self.encoder.latent_dim <= self.encoder.lstm_hidden,
             "encoder.latent_dim must be <= encoder.lstm_hidden"),
            (_is_integral(self.encoder.window_s
                          * self.encoder.training_rate_hz),
             "encoder.window_s x encoder.training_rate_hz must be an "
             "integer frame count"),
            (0 < self.heads.holdout_fraction <= 0.5,
             "heads.holdout_fraction must be in (0, 0.5]"),
            (self.gwos.t_max >= 1, "gwos.t_max must be >= 1"),
            (0 < self.gwos.p_threshold < 1 or self.gwos.p_threshold == 0,
             "gwos.p_threshold must be in [0, 1)"),
            (self.gwos.initializer in INITIALIZERS,
             "gwos.initializer must be one of %s" % (INITIALIZERS,)),
        ]
        for good, reason in checks:
            if not good:
                raise ConfigError(reason)

    def aperture(self, mode):
        """ Full finger opening (m) for a gripper mode.
        """
        return dict(self.sim.apertures)[mode]


INITIALIZERS = ('touch+random', 'oracle', 'perfect', 'noisy_oracle')


def _is_integral(value):
    """ True when 'value' is within float noise of an integer.
    """
    return abs(value - round(value)) < 1e-9


def _coerce(name, default, value):
    """Coerce a JSON value to the type of the dataclass default it
    replaces.

    """
    try:
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise TypeError("expected a boolean")
            return value
        if isinstance(default, int):
            if isinstance(value, bool) or int(value) != value:
                raise TypeError("expected an integer")
            return int(value)
        if isinstance(default, float):
            if isinstance(value, bool):
                raise TypeError("expected a number")
            return float(value)
        if isinstance(default, tuple):
            if not isinstance(value, (list, tuple)):
                raise TypeError("expected a list")
            return tuple(tuple(item) if isinstance(item, list) else item
                         for item in value)
        if isinstance(default, str):
            if not isinstance(value, str):
                raise TypeError("expected a string")
            return value
    except (TypeError, ValueError) as err:
        raise ConfigError("invalid value for '%s': %s" % (name, err)) from err
    return value


def _build_block(factory, data, prefix):
    """Build one parameter block dataclass from a dictionary, rejecting
    unknown keys.

    """
    if not isinstance(data, dict):
        raise ConfigError("'%s' must be a JSON object" % prefix)
    defaults = factory()
    known = {fld.name for fld in dataclasses.fields(defaults)}
    values = {}
    for key, value in data.items():
        name = "%s.%s" % (prefix, key)
        if key not in known:
            raise ConfigError("unknown configuration key '%s'" % name)
        values[key] = _coerce(name, getattr(defaults, key), value)
    return dataclasses.replace(defaults, **values)


def _build_materials(data):
    """ Merge a partial material table over the defaults.
    """
    if not isinstance(data, dict):
        raise ConfigError("'materials' must be a JSON object")
    table = _default_materials()
    for label, params in data.items():
        if label not in table:
            raise ConfigError("unknown configuration key 'materials.%s'"
                              % label)
        if not isinstance(params, (list, tuple)) or len(params) != 3:
            raise ConfigError("'materials.%s' must be [stiffness, friction, "
                              "slip_proneness]" % label)
        table[label] = tuple(float(value) for value in params)
    return table


def apply_overrides(data, overrides):
    """Apply flat dotted overrides ("heads.policy_lr=1e-3") to a nested
    configuration dictionary.  Values are parsed as JSON when possible
    and used as plain strings otherwise.

    """
    data = json.loads(json.dumps(data))
    for override in overrides:
        if '=' not in override:
            raise ConfigError("override '%s' is not of the form key=value"
                              % override)
        key, raw = override.split('=', 1)
        try:
            value = json.loads(raw)
        except ValueError:
            value = raw
        parts = key.strip().split('.')
        node = data
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError("override '%s' descends into a non-block "
                                  "key" % key)
        node[parts[-1]] = value
    return data


def load_config(path=None, overrides=()):
    """Load a RunConfig from the JSON file at 'path' (or from defaults
    when 'path' is None) and apply 'overrides'.

    """
    data = {}
    if path is not None:
        try:
            with open(path, 'r', encoding='utf-8') as infile:
                data = json.load(infile)
        except OSError as err:
            raise ConfigError("cannot read config '%s': %s"
                              % (path, err)) from err
        except ValueError as err:
            raise ConfigError("config '%s' is not valid JSON: %s"
                              % (path, err)) from err
    data = apply_overrides(data, overrides)
    return RunConfig.from_dict(data)
