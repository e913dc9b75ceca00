"""Loss functions.  Every loss returns (value, gradient with respect to
its first argument).

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
import numpy as np
from scipy.special import expit, log_softmax, softmax

from ..errors import ArgumentError, ShapeError

PROB_CLAMP = 1e-7


def _check_shapes(operation, first, second):
    if first.shape != second.shape:
        raise ShapeError(operation, first.shape, second.shape)


def _check_binary(labels):
    if not np.all((labels == 0.0) | (labels == 1.0)):
        raise ArgumentError("binary labels must be 0 or 1")


def loss_l2(pred, target):
    """ Mean squared error over all elements.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    _check_shapes("loss_l2", pred, target)
    diff = pred - target
    return float(np.mean(diff * diff)), 2.0 * diff / diff.size


def _bce_terms(prob, labels):
    """Per element loss and d loss / d prob, with prob clamped to
    [1e-7, 1 - 1e-7] (zero gradient where the clamp is active).

    """
    clamped = np.clip(prob, PROB_CLAMP, 1.0 - PROB_CLAMP)
    loss = -(labels * np.log(clamped) + (1.0 - labels) * np.log1p(-clamped))
    inside = (prob >= PROB_CLAMP) & (prob <= 1.0 - PROB_CLAMP)
    grad = np.where(inside,
                    -(labels / clamped) + (1.0 - labels) / (1.0 - clamped),
                    0.0)
    return loss, grad


def loss_bce(values, labels, from_logits=True):
    """Mean binary cross entropy.

    'values' are logits (from_logits=True, the sigmoid is applied here)
    or probabilities.  The gradient is with respect to 'values'.

    """
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    _check_shapes("loss_bce", values, labels)
    _check_binary(labels)
    prob = expit(values) if from_logits else values
    loss, grad_prob = _bce_terms(prob, labels)
    grad = grad_prob * prob * (1.0 - prob) if from_logits else grad_prob
    return float(np.mean(loss)), grad / loss.size


def softmax_cross_entropy(logits, labels):
    """ Mean over the batch of -log softmax(logits)[label].
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels)
    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ShapeError("softmax_cross_entropy", logits.shape, labels.shape)
    if np.any(labels < 0) or np.any(labels >= logits.shape[1]):
        raise ArgumentError("class labels must index a logit column")
    batch = logits.shape[0]
    rows = np.arange(batch)
    loss = -log_softmax(logits, axis=1)[rows, labels]
    grad = softmax(logits, axis=1)
    grad[rows, labels] -= 1.0
    return float(np.mean(loss)), grad / batch


def hinge_loss(scores, labels):
    """One-vs-rest hinge loss: mean over the batch of
    sum_k max(0, 1 - t_k s_k) with t_k = +1 for the true class and -1
    for the others.

    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 2 or labels.shape != (scores.shape[0],):
        raise ShapeError("hinge_loss", scores.shape, labels.shape)
    batch = scores.shape[0]
    targets = -np.ones_like(scores)
    targets[np.arange(batch), labels] = 1.0
    margins = 1.0 - targets * scores
    active = margins > 0.0
    loss = np.where(active, margins, 0.0).sum(axis=1)
    grad = np.where(active, -targets, 0.0)
    return float(np.mean(loss)), grad / batch


def regrasp_loss(logits, executed_bins, labels, n_bins=5):
    """Masked multi-way binary cross entropy of the re-grasp policy.

    'logits' is (batch, K * n_bins) (or (batch, K, n_bins)),
    'executed_bins' (batch, K) the bin executed in each dimension and
    'labels' (batch,) the success of the resulting grasp.  Per sample,
    only the executed bin of each dimension contributes a binary cross
    entropy term between its sigmoid and the label; the loss is the
    batch mean of the per sample sums.  The gradient has the shape of
    'logits' and is exactly zero on non executed bins.

    """
    logits = np.asarray(logits, dtype=np.float64)
    executed_bins = np.asarray(executed_bins, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.float64)
    batch, dims = executed_bins.shape
    table = logits.reshape(batch, dims, n_bins)
    if labels.shape != (batch,) or table.size != logits.size:
        raise ShapeError("regrasp_loss", logits.shape, executed_bins.shape,
                         labels.shape)
    _check_binary(labels)
    if np.any(executed_bins < 0) or np.any(executed_bins >= n_bins):
        raise ArgumentError("executed bins must lie in [0, %d)" % n_bins)
    rows = np.arange(batch)[:, None]
    cols = np.arange(dims)[None, :]
    chosen = table[rows, cols, executed_bins]
    targets = np.broadcast_to(labels[:, None], chosen.shape)
    prob = expit(chosen)
    loss, grad_prob = _bce_terms(prob, targets)
    grad = np.zeros_like(table)
    grad[rows, cols, executed_bins] = grad_prob * prob * (1.0 - prob) / batch
    return float(loss.sum(axis=1).mean()), grad.reshape(logits.shape)
