"""Models: named parameter blocks plus a declared architecture

A model's architecture is a JSON-able dictionary; its fingerprint is
the digest of (kind, architecture) and ties weight files, encoders and
heads together.  Parameters are ordered dictionaries of float64 arrays
updated only through with_parameters(), so trained models can be shared
read-only.

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

from ..errors import ArgumentError, ShapeError
from ..utils import digest_json
from .layers import DenseLayer, dense_backward, dense_forward, init_dense

MODEL_KINDS = {}


def register_model(cls):
    """ Class decorator making a Model subclass loadable by kind.
    """
    MODEL_KINDS[cls.kind] = cls
    return cls


def model_class(kind):
    """ Registered Model subclass for 'kind'.
    """
    try:
        return MODEL_KINDS[kind]
    except KeyError as err:
        raise ArgumentError("unknown model kind '%s'" % kind) from err


class Model:
    """Base class for everything saved with save_weights().

    Subclasses set 'kind', implement block_shapes() from the
    architecture, and may keep non-trained arrays (normalization
    statistics) in 'buffers'.

    """
    kind = None

    def __init__(self, architecture, params, buffers=None):
        self.architecture = dict(architecture)
        self.params = dict(params)
        self.buffers = dict(buffers or {})
        expected = self.block_shapes()
        for name, shape in expected.items():
            value = self.params.get(name)
            if value is None or value.shape != tuple(shape):
                raise ShapeError("%s block '%s'" % (self.kind, name), shape,
                                 () if value is None else value.shape)
        if set(self.params) != set(expected):
            raise ArgumentError("unexpected parameter blocks %s for '%s'"
                                % (sorted(set(self.params) - set(expected)),
                                   self.kind))

    def block_shapes(self):
        """ Ordered {block name: shape} required by the architecture.
        """
        raise NotImplementedError

    def fingerprint(self):
        """ Digest of kind and architecture.
        """
        return architecture_fingerprint(self.kind, self.architecture)

    def parameters(self):
        """ Parameter blocks in block_shapes() order.
        """
        return {name: self.params[name] for name in self.block_shapes()}

    def with_parameters(self, params):
        """ Same architecture and buffers with new parameter blocks.
        """
        return type(self)(self.architecture, params, self.buffers)

    def parameter_count(self):
        """ Total number of trainable scalars.
        """
        return int(sum(value.size for value in self.params.values()))


def architecture_fingerprint(kind, architecture):
    """ Fingerprint of a (kind, architecture) pair.
    """
    return digest_json({'kind': kind, 'architecture': architecture})


@register_model
class MLP(Model):
    """Stack of dense layers.

    Architecture keys: n_in, hidden (list of sizes), n_out,
    hidden_activation, output_activation.

    """
    kind = 'mlp'

    @classmethod
    def create(cls, rng, n_in, hidden, n_out, hidden_activation='relu',
               output_activation='identity'):
        """ Glorot initialized network.
        """
        architecture = {
            'n_in': int(n_in), 'hidden': [int(size) for size in hidden],
            'n_out': int(n_out), 'hidden_activation': hidden_activation,
            'output_activation': output_activation,
        }
        sizes = _sizes(architecture)
        params = {}
        for index, (size_in, size_out) in enumerate(zip(sizes, sizes[1:])):
            layer = init_dense(rng, size_in, size_out)
            params['dense%d.W' % index] = layer.W
            params['dense%d.b' % index] = layer.b
        return cls(architecture, params)

    def block_shapes(self):
        sizes = _sizes(self.architecture)
        shapes = {}
        for index, (size_in, size_out) in enumerate(zip(sizes, sizes[1:])):
            shapes['dense%d.W' % index] = (size_out, size_in)
            shapes['dense%d.b' % index] = (size_out,)
        return shapes

    def layers(self):
        """ DenseLayer views of the parameter blocks.
        """
        count = len(self.architecture['hidden']) + 1
        result = []
        for index in range(count):
            activation = (self.architecture['output_activation']
                          if index == count - 1 else
                          self.architecture['hidden_activation'])
            result.append(DenseLayer(self.params['dense%d.W' % index],
                                     self.params['dense%d.b' % index],
                                     activation))
        return result

    def forward(self, inputs):
        """ Returns (outputs, cache) for an (batch, n_in) input.
        """
        inputs = np.asarray(inputs, dtype=np.float64)
        cache = [inputs]
        for layer in self.layers():
            cache.append(dense_forward(layer, cache[-1]))
        return cache[-1], cache

    def predict(self, inputs):
        """ forward() without the cache.
        """
        return self.forward(inputs)[0]

    def backward(self, cache, grad_out):
        """ Returns ({block name: gradient}, gradient w.r.t. the input).
        """
        grads = {}
        grad = grad_out
        layers = self.layers()
        for index in reversed(range(len(layers))):
            grad, grad_w, grad_b = dense_backward(layers[index], cache[index],
                                                  grad)
            grads['dense%d.W' % index] = grad_w
            grads['dense%d.b' % index] = grad_b
        return grads, grad


def _sizes(architecture):
    return ([architecture['n_in']] + list(architecture['hidden'])
            + [architecture['n_out']])
