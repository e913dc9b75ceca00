"""Dense layers and activations

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
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ..errors import ArgumentError, ShapeError

ACTIVATIONS = ('identity', 'relu', 'tanh', 'sigmoid')


def activate(name, pre):
    """ Apply activation 'name' to the pre-activation array.
    """
    if name == 'identity':
        return pre
    if name == 'relu':
        return np.maximum(pre, 0.0)
    if name == 'tanh':
        return np.tanh(pre)
    if name == 'sigmoid':
        return expit(pre)
    raise ArgumentError("unknown activation '%s'" % name)


def activation_grad(name, pre, out):
    """Derivative of activation 'name' given its input and output.  The
    relu subgradient at 0 is 0.

    """
    if name == 'identity':
        return np.ones_like(pre)
    if name == 'relu':
        return (pre > 0.0).astype(np.float64)
    if name == 'tanh':
        return 1.0 - out * out
    if name == 'sigmoid':
        return out * (1.0 - out)
    raise ArgumentError("unknown activation '%s'" % name)


@dataclass(frozen=True)
class DenseLayer:
    """ y = act(x W^T + b) with W (out, in) and b (out,).
    """
    W: np.ndarray  # pylint: disable=invalid-name
    b: np.ndarray
    activation: str = 'identity'

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ArgumentError("unknown activation '%s'" % self.activation)
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise ShapeError("DenseLayer", self.W.shape, self.b.shape)


def glorot_uniform(rng, n_in, n_out):
    """ Uniform in +-sqrt(6 / (fan_in + fan_out)), shape (n_out, n_in).
    """
    limit = np.sqrt(6.0 / (n_in + n_out))
    return rng.uniform(-limit, limit, size=(n_out, n_in))


def init_dense(rng, n_in, n_out, activation='identity'):
    """ Glorot initialized layer with zero bias.
    """
    return DenseLayer(glorot_uniform(rng, n_in, n_out), np.zeros(n_out),
                      activation)


def _check_input(layer, x_in):
    if x_in.ndim not in (1, 2) or x_in.shape[-1] != layer.W.shape[1]:
        raise ShapeError("dense_forward", layer.W.shape, x_in.shape)


def dense_forward(layer, x_in):
    """ Forward pass for a (in,) vector or an (batch, in) matrix.
    """
    x_in = np.asarray(x_in, dtype=np.float64)
    _check_input(layer, x_in)
    return activate(layer.activation, x_in @ layer.W.T + layer.b)


def dense_backward(layer, x_in, grad_out):
    """Exact gradients of a dense layer.

    Returns (grad_x, grad_W, grad_b) for the input 'x_in' and the
    gradient 'grad_out' of the loss with respect to the layer output.

    """
    x_in = np.asarray(x_in, dtype=np.float64)
    _check_input(layer, x_in)
    pre = x_in @ layer.W.T + layer.b
    if grad_out.shape != pre.shape:
        raise ShapeError("dense_backward", pre.shape, grad_out.shape)
    out = activate(layer.activation, pre)
    grad_pre = grad_out * activation_grad(layer.activation, pre, out)
    if x_in.ndim == 1:
        return (grad_pre @ layer.W, np.outer(grad_pre, x_in), grad_pre.copy())
    return grad_pre @ layer.W, grad_pre.T @ x_in, grad_pre.sum(axis=0)
