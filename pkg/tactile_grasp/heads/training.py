"""Training and inference of the supervised heads

All heads read frozen features (latent vectors or hand-crafted
features); nothing here updates the encoder.

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
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit
from sklearn.model_selection import train_test_split

from ..config import MATERIAL_LABELS, RunConfig
from ..errors import (
    ArgumentError,
    InsufficientDataError,
    StratificationError,
    TrainingError,
)
from ..nn.losses import (
    hinge_loss,
    loss_bce,
    regrasp_loss,
    softmax_cross_entropy,
)
from ..nn.optim import AdamState, adam_step, clip_global_norm
from .bins import DEFAULT_BINS, bin_decode
from .metrics import (
    accuracy,
    average_class_accuracy,
    confusion_matrix,
    majority_rate,
    normalize_rows,
)
from .networks import (
    LinearHinge,
    MaterialNet,
    RegraspPolicyNet,
    StabilityNet,
    predict_class,
)

LOGGER = logging.getLogger(__name__)

CLASSIFIER_KINDS = ('deep', 'linear_hinge')


@dataclass(frozen=True)
class TrainingExample:
    """One executed grasp seen through its haptic features.

    'latent' is H of the grasp at step t, 'executed_bins' the bins of
    the correction applied after it (None for the last grasp of an
    episode), 'label' the success of the grasp that correction
    produced, and 'stability_label' the success of the grasp at step t.

    """
    latent: np.ndarray
    executed_bins: tuple
    label: int
    material: str
    stability_label: int
    object_id: str = None
    episode_id: str = None


@dataclass
class HeadTraining:
    """ A trained head with its loss curve and evaluation metrics.
    """
    model: object
    curve: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)


def _weight_blocks(params):
    return [name for name in params if name.endswith('.W')]


def fit_head(model, features, targets, loss_fn, learning_rate, epochs,
             batch_size, rng, clip_norm=None, l2=0.0):
    """Minibatch ADAM on 'model' (a FeatureHead).

    'loss_fn(outputs, targets)' returns (loss, gradient w.r.t. the
    outputs); 'l2' adds 0.5 * l2 * ||W||^2 over the weight matrices.
    Returns (trained model, per epoch mean training loss).

    """
    features = np.asarray(features, dtype=np.float64)
    state = AdamState.create(model.parameters(), learning_rate)
    curve = []
    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(features))
        total = 0.0
        for start in range(0, len(order), batch_size):
            index = order[start:start + batch_size]
            outputs, cache = model.forward(features[index])
            value, grad_out = loss_fn(outputs, targets[index])
            grads, _ = model.backward(cache, grad_out)
            if l2:
                for name in _weight_blocks(grads):
                    value += 0.5 * l2 * float(np.sum(model.params[name] ** 2))
                    grads[name] = grads[name] + l2 * model.params[name]
            if not math.isfinite(value):
                raise TrainingError("%s training diverged in epoch %d"
                                    % (model.kind, epoch))
            grads, _ = clip_global_norm(grads, clip_norm)
            params, state = adam_step(state, model.parameters(), grads)
            model = model.with_parameters(params)
            total += value * len(index)
        curve.append(total / len(features))
        LOGGER.debug("%s epoch %d: loss %.5f", model.kind, epoch, curve[-1])
    return model, curve


def stratified_split(labels, fraction, rng, n_classes=None):
    """Seeded stratified split; returns (train index, test index).

    Parameters:

        labels:

            Class label per example.

        fraction:

            Share of the examples held out (0 < fraction <= 0.5).  The
            held-out side gets at least one slot per class.

        rng:

            numpy Generator; it seeds the scikit-learn shuffle.

        n_classes:

            When given, a class of 0 .. n_classes - 1 missing from
            'labels' is an error.

    Raises StratificationError when a class has fewer than two
    examples or a class is missing.

    """
    labels = np.asarray(labels)
    classes, counts = np.unique(labels, return_counts=True)
    if n_classes is not None:
        missing = sorted(set(range(n_classes)) - set(classes.tolist()))
        if missing:
            raise StratificationError("class %s is missing from the "
                                      "training data" % missing)
    if not 0.0 < fraction <= 0.5:
        raise ArgumentError("held-out fraction must be in (0, 0.5], got %r"
                            % (fraction,))
    sparse = counts < 2
    if np.any(sparse):
        raise StratificationError("class %s has too few examples (%d) "
                                  "for a train / test split"
                                  % (classes[sparse][0], counts[sparse][0]))
    n_test = min(max(len(classes), int(round(fraction * len(labels)))),
                 len(labels) - len(classes))
    try:
        train, test = train_test_split(
            np.arange(len(labels)), test_size=n_test, stratify=labels,
            random_state=int(rng.integers(2 ** 31 - 1)))
    except ValueError as err:
        raise StratificationError("cannot stratify %d examples: %s"
                                  % (len(labels), err)) from err
    return np.sort(train).astype(np.int64), np.sort(test).astype(np.int64)


def _binary_targets(labels):
    labels = np.asarray(labels, dtype=np.float64)
    if not np.all((labels == 0.0) | (labels == 1.0)):
        raise ArgumentError("stability labels must be 0 or 1")
    return labels


def train_stability(examples, config=None, rng=None, kind='deep',
                    features=None):
    """Train the grasp stability estimator.

    Parameters:

        examples:

            TrainingExample list; their stability labels are the
            targets.

        kind:

            'deep' (dense stack, binary cross entropy) or
            'linear_hinge' (two class one-vs-rest hinge loss).

        features:

            Optional (n, d) features replacing the examples' latent
            vectors (hand-crafted features, for instance).

    Metrics are computed on a stratified held-out split:
    accuracy, majority_rate, confusion (2 x 2 counts) and
    confusion_normalized.

    """
    config = config or RunConfig()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    params = config.heads
    if features is None:
        features = np.stack([example.latent for example in examples])
    features = np.asarray(features, dtype=np.float64)
    labels = _binary_targets([example.stability_label for example in examples])
    if len(np.unique(labels)) < 2:
        raise TrainingError("stability training needs both success and "
                            "failure examples")
    train, test = stratified_split(labels, params.holdout_fraction, rng)
    model, curve = _train_binary(features[train], labels[train], kind,
                                 params, rng)
    predicted = predict_class(model, features[test])
    truth = labels[test].astype(np.int64)
    matrix = confusion_matrix(truth, predicted, 2)
    metrics = {
        'kind': kind,
        'n_train': int(len(train)),
        'n_test': int(len(test)),
        'accuracy': accuracy(truth, predicted),
        'majority_rate': majority_rate(truth),
        'confusion': matrix.tolist(),
        'confusion_normalized': normalize_rows(matrix).tolist(),
    }
    LOGGER.info("stability (%s): held-out accuracy %.3f, majority %.3f",
                kind, metrics['accuracy'], metrics['majority_rate'])
    return HeadTraining(model, curve, metrics)


def _train_binary(features, labels, kind, params, rng):
    if kind == 'deep':
        model = StabilityNet.build(rng, features.shape[1],
                                   params.stability_layers, 1, features)
        return fit_head(
            model, features, labels[:, None],
            lambda out, target: loss_bce(out, target),
            params.stability_lr, params.epochs, params.batch_size, rng,
            params.clip_norm)
    if kind == 'linear_hinge':
        model = LinearHinge.build(rng, features.shape[1], (), 2, features)
        return fit_head(model, features, labels.astype(np.int64), hinge_loss,
                        params.linear_lr, params.epochs, params.batch_size,
                        rng, params.clip_norm, params.hinge_l2)
    raise ArgumentError("classifier kind must be one of %s"
                        % (CLASSIFIER_KINDS,))


def train_policy(examples, config=None, rng=None):
    """Train the re-grasp policy with the masked multi-way binary cross
    entropy over the examples that carry an executed correction.

    """
    config = config or RunConfig()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    params = config.heads
    usable = [example for example in examples
              if example.executed_bins is not None]
    if not usable:
        raise InsufficientDataError("policy training needs examples with "
                                    "executed re-grasps")
    features = np.stack([example.latent for example in usable])
    bins = np.array([example.executed_bins for example in usable],
                    dtype=np.int64)
    labels = _binary_targets([example.label for example in usable])
    targets = np.column_stack([labels, bins])
    model = RegraspPolicyNet.build(
        rng, features.shape[1], params.policy_layers,
        DEFAULT_BINS.dims * DEFAULT_BINS.n_bins, features)

    def loss_fn(outputs, target):
        return regrasp_loss(outputs, target[:, 1:].astype(np.int64),
                            target[:, 0])

    model, curve = fit_head(model, features, targets, loss_fn,
                            params.policy_lr, params.epochs,
                            params.batch_size, rng, params.clip_norm)
    metrics = {'n_train': len(usable), 'success_rate': float(labels.mean()),
               'final_loss': curve[-1] if curve else None}
    LOGGER.info("policy: %d examples, final loss %s", len(usable),
                metrics['final_loss'])
    return HeadTraining(model, curve, metrics)


def regrasp_table(policy, latent):
    """ (K, 5) table of sigmoid(logit) for one latent vector.
    """
    return expit(policy.logit_table(latent)[0])


def select_regrasp(policy, latent, bins=DEFAULT_BINS):
    """Per dimension argmax of the policy, decoded to bin centers.  Ties
    go to the lower bin index.

    """
    table = policy.logit_table(latent)[0]
    return bin_decode(tuple(int(np.argmax(row)) for row in table), bins)


def material_index(labels):
    """ Map material labels (or indices) to indices into MATERIAL_LABELS.
    """
    result = []
    for label in labels:
        if isinstance(label, str):
            if label not in MATERIAL_LABELS:
                raise ArgumentError("unknown material '%s'" % label)
            result.append(MATERIAL_LABELS.index(label))
        else:
            result.append(int(label))
    return np.array(result, dtype=np.int64)


def train_material(features, labels, classifier_kind='deep', config=None,
                   rng=None):
    """Train a 7-way material classifier on an 80 / 20 stratified split
    and report the average class accuracy and the confusion matrix.

    """
    config = config or RunConfig()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    params = config.heads
    features = np.asarray(features, dtype=np.float64)
    labels = material_index(labels)
    n_classes = len(MATERIAL_LABELS)
    train, test = stratified_split(labels, params.holdout_fraction, rng,
                                   n_classes)
    if classifier_kind == 'deep':
        model = MaterialNet.build(rng, features.shape[1],
                                  params.material_layers, n_classes,
                                  features[train])
        model, curve = fit_head(model, features[train], labels[train],
                                softmax_cross_entropy, params.material_lr,
                                params.epochs, params.batch_size, rng,
                                params.clip_norm)
    elif classifier_kind == 'linear_hinge':
        model = LinearHinge.build(rng, features.shape[1], (), n_classes,
                                  features[train])
        model, curve = fit_head(model, features[train], labels[train],
                                hinge_loss, params.linear_lr, params.epochs,
                                params.batch_size, rng, params.clip_norm,
                                params.hinge_l2)
    else:
        raise ArgumentError("classifier kind must be one of %s"
                            % (CLASSIFIER_KINDS,))
    predicted = predict_class(model, features[test])
    matrix = confusion_matrix(labels[test], predicted, n_classes)
    metrics = {
        'kind': classifier_kind,
        'n_train': int(len(train)),
        'n_test': int(len(test)),
        'average_class_accuracy': average_class_accuracy(matrix),
        'accuracy': accuracy(labels[test], predicted),
        'chance': 1.0 / n_classes,
        'labels': list(MATERIAL_LABELS),
        'confusion': matrix.tolist(),
        'confusion_normalized': normalize_rows(matrix).tolist(),
    }
    LOGGER.info("material (%s): average class accuracy %.3f",
                classifier_kind, metrics['average_class_accuracy'])
    return HeadTraining(model, curve, metrics)
