"""Classification metrics

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
from scipy.stats import norm
from sklearn import metrics as skmetrics


def confusion_matrix(truth, predicted, n_classes):
    """ Count matrix over classes 0 .. n_classes - 1, rows are true
    classes and columns predictions.
    """
    return skmetrics.confusion_matrix(
        np.asarray(truth, dtype=np.int64),
        np.asarray(predicted, dtype=np.int64),
        labels=np.arange(n_classes)).astype(np.int64)


def normalize_rows(matrix):
    """ Rows scaled to sum to 1 (empty rows stay zero).
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    totals = matrix.sum(axis=1, keepdims=True)
    return np.divide(matrix, totals, out=np.zeros_like(matrix),
                     where=totals > 0)


def accuracy(truth, predicted):
    """ Fraction of matching labels.
    """
    truth = np.asarray(truth)
    if truth.size == 0:
        return float('nan')
    return float(skmetrics.accuracy_score(truth, np.asarray(predicted)))


def average_class_accuracy(matrix):
    """ Mean of the per class recalls over classes that occur.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    totals = matrix.sum(axis=1)
    present = totals > 0
    return float(np.mean(np.diag(matrix)[present] / totals[present]))


def majority_rate(labels):
    """ Share of the most frequent label.
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        return float('nan')
    _, counts = np.unique(labels, return_counts=True)
    return float(counts.max() / labels.size)


def wilson_interval(successes, trials, confidence=0.95):
    """ Wilson score interval (low, high) for a binomial proportion.
    """
    if trials == 0:
        return 0.0, 1.0
    z_score = norm.ppf(0.5 + confidence / 2.0)
    phat = successes / trials
    denom = 1.0 + z_score * z_score / trials
    center = (phat + z_score * z_score / (2.0 * trials)) / denom
    half = (z_score * math.sqrt(phat * (1.0 - phat) / trials
                                + z_score * z_score / (4.0 * trials * trials))
            / denom)
    return max(0.0, center - half), min(1.0, center + half)
