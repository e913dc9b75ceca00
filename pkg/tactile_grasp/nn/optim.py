"""ADAM optimizer and gradient clipping over named parameter blocks

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
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ShapeError, TrainingError


@dataclass(frozen=True)
class AdamState:
    """ Per block first / second moments and the step count.
    """
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    first: dict = field(default_factory=dict)
    second: dict = field(default_factory=dict)

    @classmethod
    def create(cls, params, learning_rate, **kwargs):
        """ Zero moments shaped like the blocks of 'params'.
        """
        return cls(
            learning_rate=learning_rate,
            first={name: np.zeros_like(value)
                   for name, value in params.items()},
            second={name: np.zeros_like(value)
                    for name, value in params.items()},
            **kwargs
        )


def adam_step(state, params, grads):
    """One bias corrected ADAM update.

    Returns (new params, new state); the inputs are not modified.
    Raises TrainingError naming the first block with a non-finite
    gradient.

    """
    for name, grad in grads.items():
        if name not in params or grad.shape != params[name].shape:
            raise ShapeError("adam_step %s" % name,
                             np.shape(params.get(name)), grad.shape)
        if not np.all(np.isfinite(grad)):
            raise TrainingError("non-finite gradient in parameter block "
                                "'%s'" % name)
    step = state.step + 1
    correct1 = 1.0 - state.beta1 ** step
    correct2 = 1.0 - state.beta2 ** step
    new_params, first, second = {}, {}, {}
    for name, value in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(value)
        first[name] = (state.beta1 * state.first[name]
                       + (1.0 - state.beta1) * grad)
        second[name] = (state.beta2 * state.second[name]
                        + (1.0 - state.beta2) * grad * grad)
        update = (first[name] / correct1) / (np.sqrt(second[name] / correct2)
                                             + state.eps)
        new_params[name] = value - state.learning_rate * update
    return new_params, replace(state, step=step, first=first, second=second)


def global_norm(grads):
    """ L2 norm of all gradient blocks taken together.
    """
    return float(np.sqrt(sum(float(np.sum(grad * grad))
                             for grad in grads.values())))


def clip_global_norm(grads, max_norm):
    """Scale all blocks by max_norm / norm when the global norm exceeds
    max_norm.  Returns (clipped grads, norm before clipping).

    """
    norm = global_norm(grads)
    if max_norm is None or norm <= max_norm or norm == 0.0:
        return dict(grads), norm
    scale = max_norm / norm
    return {name: grad * scale for name, grad in grads.items()}, norm
