"""Long short-term memory recurrence with backpropagation through time

The four gate blocks are stacked in one matrix W of shape
(4h, h + in) in the order input, forget, output, candidate; each step
multiplies W by the concatenation [h_prev, x_t].

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

from ..errors import ShapeError

GATES = ('input', 'forget', 'output', 'candidate')


@dataclass(frozen=True)
class LSTMCell:
    """ Gate weights W (4h, h + in) and biases b (4h,).
    """
    W: np.ndarray  # pylint: disable=invalid-name
    b: np.ndarray

    def __post_init__(self):
        rows = self.W.shape[0]
        if (self.W.ndim != 2 or rows % 4 or self.b.shape != (rows,)
                or self.W.shape[1] <= rows // 4):
            raise ShapeError("LSTMCell", self.W.shape, self.b.shape)

    @property
    def hidden(self):
        """ Hidden state size h.
        """
        return self.W.shape[0] // 4

    @property
    def n_in(self):
        """ Input size.
        """
        return self.W.shape[1] - self.hidden


def init_lstm(rng, n_in, hidden):
    """Gate weights uniform in +-1/sqrt(h), zero biases except the
    forget gate bias which starts at 1.

    """
    limit = 1.0 / np.sqrt(hidden)
    weights = rng.uniform(-limit, limit, size=(4 * hidden, hidden + n_in))
    bias = np.zeros(4 * hidden)
    bias[hidden:2 * hidden] = 1.0
    return LSTMCell(weights, bias)


def _gates(cell, x_t, h_prev):
    hidden = cell.hidden
    joined = np.concatenate([h_prev, x_t], axis=-1)
    pre = joined @ cell.W.T + cell.b
    gate_i = expit(pre[..., :hidden])
    gate_f = expit(pre[..., hidden:2 * hidden])
    gate_o = expit(pre[..., 2 * hidden:3 * hidden])
    gate_g = np.tanh(pre[..., 3 * hidden:])
    return joined, gate_i, gate_f, gate_o, gate_g


def lstm_step(cell, x_t, h_prev, c_prev):
    """ One recurrence step; returns (h_t, c_t).
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    if x_t.shape[-1] != cell.n_in:
        raise ShapeError("lstm_step", cell.W.shape, x_t.shape)
    if h_prev.shape[-1] != cell.hidden or h_prev.shape != c_prev.shape:
        raise ShapeError("lstm_step", h_prev.shape, c_prev.shape)
    _, gate_i, gate_f, gate_o, gate_g = _gates(cell, x_t, h_prev)
    c_t = gate_f * c_prev + gate_i * gate_g
    h_t = gate_o * np.tanh(c_t)
    return h_t, c_t


@dataclass
class LSTMCache:
    """ Intermediate values of lstm_forward() needed by lstm_backward().
    """
    joined: list
    gates: list
    cells: list
    c_init: np.ndarray


def lstm_forward(cell, inputs, h_init=None, c_init=None):
    """Run the cell over 'inputs' of shape (T, batch, in).

    Returns (hidden states (T, batch, h), final cell state, cache).

    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 3 or inputs.shape[2] != cell.n_in:
        raise ShapeError("lstm_forward", cell.W.shape, inputs.shape)
    steps, batch, _ = inputs.shape
    shape = (batch, cell.hidden)
    h_t = np.zeros(shape) if h_init is None else h_init
    c_t = np.zeros(shape) if c_init is None else c_init
    cache = LSTMCache([], [], [], c_t)
    states = np.empty((steps, batch, cell.hidden))
    for step in range(steps):
        joined, gate_i, gate_f, gate_o, gate_g = _gates(cell, inputs[step],
                                                        h_t)
        c_t = gate_f * c_t + gate_i * gate_g
        h_t = gate_o * np.tanh(c_t)
        cache.joined.append(joined)
        cache.gates.append((gate_i, gate_f, gate_o, gate_g))
        cache.cells.append(c_t)
        states[step] = h_t
    return states, c_t, cache


def lstm_backward(cell, cache, grad_states, grad_c_final=None):
    """Backpropagation through time.

    'grad_states' (T, batch, h) is the loss gradient with respect to
    every hidden state returned by lstm_forward(); 'grad_c_final' the
    gradient with respect to the final cell state, if any.

    Returns (grad_inputs (T, batch, in), grad_W, grad_b, grad_h_init,
    grad_c_init).

    """
    hidden = cell.hidden
    steps = len(cache.joined)
    if grad_states.shape[0] != steps:
        raise ShapeError("lstm_backward", (steps,), grad_states.shape)
    batch = grad_states.shape[1]
    grad_w = np.zeros_like(cell.W)
    grad_b = np.zeros_like(cell.b)
    grad_inputs = np.empty((steps, batch, cell.n_in))
    grad_h = np.zeros((batch, hidden))
    grad_c = (np.zeros((batch, hidden)) if grad_c_final is None
              else grad_c_final.copy())
    for step in reversed(range(steps)):
        gate_i, gate_f, gate_o, gate_g = cache.gates[step]
        c_t = cache.cells[step]
        c_prev = cache.cells[step - 1] if step > 0 else cache.c_init
        tanh_c = np.tanh(c_t)
        grad_h = grad_h + grad_states[step]
        grad_c = grad_c + grad_h * gate_o * (1.0 - tanh_c * tanh_c)
        grad_pre = np.concatenate([
            grad_c * gate_g * gate_i * (1.0 - gate_i),
            grad_c * c_prev * gate_f * (1.0 - gate_f),
            grad_h * tanh_c * gate_o * (1.0 - gate_o),
            grad_c * gate_i * (1.0 - gate_g * gate_g),
        ], axis=1)
        grad_w += grad_pre.T @ cache.joined[step]
        grad_b += grad_pre.sum(axis=0)
        grad_joined = grad_pre @ cell.W
        grad_h = grad_joined[:, :hidden]
        grad_inputs[step] = grad_joined[:, hidden:]
        grad_c = grad_c * gate_f
    return grad_inputs, grad_w, grad_b, grad_h, grad_c
