"""Central finite difference gradient checks

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


def numeric_gradient(func, array, step=1e-5):
    """Central difference gradient of the scalar 'func()' with respect
    to every element of 'array', which is perturbed in place and
    restored.

    """
    grad = np.zeros_like(array)
    flat = array.reshape(-1)
    flat_grad = grad.reshape(-1)
    for index in range(flat.size):
        saved = flat[index]
        flat[index] = saved + step
        upper = func()
        flat[index] = saved - step
        lower = func()
        flat[index] = saved
        flat_grad[index] = (upper - lower) / (2.0 * step)
    return grad


def relative_error(analytic, numeric, floor=1e-8):
    """ ||a - n|| / max(||a|| + ||n||, floor).
    """
    diff = np.linalg.norm(np.ravel(analytic) - np.ravel(numeric))
    scale = np.linalg.norm(np.ravel(analytic)) + np.linalg.norm(
        np.ravel(numeric))
    return float(diff / max(scale, floor))


def check_gradient(func, arrays, analytic, step=1e-5):
    """Compare analytic gradients with central differences.

    'arrays' maps names to the arrays 'func()' reads (perturbed in
    place), 'analytic' maps the same names to their gradients.  Returns
    {name: relative error}.

    """
    return {
        name: relative_error(analytic[name],
                             numeric_gradient(func, array, step))
        for name, array in arrays.items()
    }
