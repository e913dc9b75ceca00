"""Supervised heads on haptic features

Every head is a dense stack (see nn.model.MLP) that standardizes its
input with statistics frozen from its training features.  Heads output
logits (or scores for the hinge loss variants); probabilities are
derived from them where needed.

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
from scipy.special import expit

from ..nn.losses import PROB_CLAMP
from ..nn.model import MLP, register_model
from .bins import DIMENSIONS, N_BINS


class FeatureHead(MLP):
    """ MLP with an input standardizer kept in the buffers.
    """
    kind = None
    hidden_activation = 'relu'

    @classmethod
    def build(cls, rng, n_in, hidden, n_out, features=None):
        """Initialize the head; 'features' (n, n_in), when given, fix the
        input standardization.

        """
        base = MLP.create(rng, n_in, hidden, n_out, cls.hidden_activation)
        mean, std = np.zeros(n_in), np.ones(n_in)
        if features is not None and len(features):
            features = np.asarray(features, dtype=np.float64)
            mean = features.mean(axis=0)
            std = features.std(axis=0)
            std = np.where(std > 0.0, std, 1.0)
        return cls(base.architecture, base.params,
                   {'input.mean': mean, 'input.std': std})

    def standardize(self, features):
        """ Apply the frozen input standardization.
        """
        features = np.asarray(features, dtype=np.float64)
        if 'input.mean' not in self.buffers:
            return features
        return ((features - self.buffers['input.mean'])
                / self.buffers['input.std'])

    def forward(self, inputs):
        return super().forward(self.standardize(inputs))


@register_model
class StabilityNet(FeatureHead):
    """ Grasp stability estimator: one logit, p = sigmoid(logit).
    """
    kind = 'stability'

    def probability(self, features):
        """ Success probability, strictly inside (0, 1).
        """
        logits = self.predict(np.atleast_2d(features))[:, 0]
        return np.clip(expit(logits), PROB_CLAMP, 1.0 - PROB_CLAMP)


@register_model
class RegraspPolicyNet(FeatureHead):
    """ Re-grasp policy: K x 5 logits, one per dimension and bin.
    """
    kind = 'regrasp_policy'

    def logit_table(self, features):
        """ (n, K, 5) logits.
        """
        logits = self.predict(np.atleast_2d(features))
        return logits.reshape(logits.shape[0], len(DIMENSIONS), N_BINS)


@register_model
class MaterialNet(FeatureHead):
    """ Deep material classifier: one logit per material class.
    """
    kind = 'material'


@register_model
class LinearHinge(FeatureHead):
    """One-vs-rest linear classifier trained with the hinge loss (a
    stack with no hidden layer).

    """
    kind = 'linear_hinge'


def predict_class(head, features):
    """ Class index with the highest logit / score (lowest index on ties).
    """
    outputs = head.predict(np.atleast_2d(features))
    if outputs.shape[1] == 1:
        return (outputs[:, 0] > 0.0).astype(np.int64)
    return np.argmax(outputs, axis=1)
