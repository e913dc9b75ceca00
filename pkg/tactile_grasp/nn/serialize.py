"""Weight files

A weight file is one line of canonical JSON (the header) followed by a
raw little-endian float64 payload:

    {"architecture": {...}, "blocks": [{"name": "dense0.W",
     "shape": [64, 16]}, ...], "fingerprint": "...", "format_version": 1,
     "kind": "mlp", "metadata": {...}, "payload_bytes": 8192,
     "payload_sha256": "..."}\n
    <payload>

Blocks are stored in header order, parameters first and then buffers
(named "buffer:<name>").  Nothing time dependent is written, so saving
the same model twice produces identical files.

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
import json
import logging
import os

import numpy as np

from ..errors import CorruptWeightsError, FingerprintError, WeightsVersionError
from ..utils import canonical_json, digest_bytes
from .model import architecture_fingerprint, model_class

LOGGER = logging.getLogger(__name__)

WEIGHTS_FORMAT_VERSION = 1
BUFFER_PREFIX = "buffer:"
_DTYPE = np.dtype('<f8')


def _payload(model):
    """ Ordered (name, array) blocks and their concatenated bytes.
    """
    arrays = [(name, value) for name, value in model.parameters().items()]
    arrays += [(BUFFER_PREFIX + name, value)
               for name, value in sorted(model.buffers.items())]
    payload = b''.join(np.ascontiguousarray(value, dtype=_DTYPE).tobytes()
                       for _, value in arrays)
    return arrays, payload


def parameter_digest(model):
    """SHA-256 of the weight payload of 'model' (equal to the
    payload_sha256 its weight file records).

    """
    return digest_bytes(_payload(model)[1])


def save_weights(model, path, metadata=None):
    """Write 'model' to 'path' (atomically, through a temporary file).
    'metadata' is an optional JSON-able dictionary kept in the header.

    """
    arrays, payload = _payload(model)
    header = {
        'format_version': WEIGHTS_FORMAT_VERSION,
        'kind': model.kind,
        'fingerprint': model.fingerprint(),
        'architecture': model.architecture,
        'blocks': [{'name': name, 'shape': list(np.shape(value))}
                   for name, value in arrays],
        'metadata': metadata or {},
        'payload_bytes': len(payload),
        'payload_sha256': digest_bytes(payload),
    }
    tmp_path = "%s.tmp" % path
    with open(tmp_path, 'wb') as outfile:
        outfile.write(canonical_json(header).encode('utf-8'))
        outfile.write(b'\n')
        outfile.write(payload)
    os.replace(tmp_path, path)
    LOGGER.debug("saved %s model (%d blocks) to '%s'", model.kind,
                 len(arrays), path)


def read_header(path):
    """ Parse and version check the header of a weight file.
    """
    with open(path, 'rb') as infile:
        data = infile.read()
    end = data.find(b'\n')
    if end < 0:
        raise CorruptWeightsError("weight file '%s' has no header" % path)
    try:
        header = json.loads(data[:end].decode('utf-8'))
    except ValueError as err:
        raise CorruptWeightsError("weight file '%s' header is not valid "
                                  "JSON" % path) from err
    if not isinstance(header, dict):
        raise CorruptWeightsError("weight file '%s' header is not a JSON "
                                  "object" % path)
    version = header.get('format_version')
    if version != WEIGHTS_FORMAT_VERSION:
        raise WeightsVersionError("weight file '%s' has format_version %r, "
                                  "expected %d" % (path, version,
                                                   WEIGHTS_FORMAT_VERSION))
    return header, data[end + 1:]


def load_weights(path, expected_fingerprint=None):
    """Load the model stored at 'path'.

    Raises WeightsVersionError, FingerprintError (recorded fingerprint
    does not match the architecture, or differs from
    'expected_fingerprint') or CorruptWeightsError (truncated or
    altered payload).  No model is built unless every check passes.

    """
    header, payload = read_header(path)
    try:
        kind = header['kind']
        architecture = header['architecture']
        blocks = header['blocks']
        size = int(header['payload_bytes'])
        digest = header['payload_sha256']
    except (KeyError, TypeError, ValueError) as err:
        raise CorruptWeightsError("weight file '%s' header is missing %s"
                                  % (path, err)) from err
    if len(payload) != size:
        raise CorruptWeightsError("weight file '%s' is truncated: %d of %d "
                                  "payload bytes" % (path, len(payload), size))
    if digest_bytes(payload) != digest:
        raise CorruptWeightsError("weight file '%s' payload digest does not "
                                  "match its header" % path)
    fingerprint = architecture_fingerprint(kind, architecture)
    if fingerprint != header.get('fingerprint'):
        raise FingerprintError("weight file '%s' fingerprint does not match "
                               "its architecture" % path)
    if (expected_fingerprint is not None
            and fingerprint != expected_fingerprint):
        raise FingerprintError("weight file '%s' has fingerprint %s, "
                               "expected %s" % (path, fingerprint[:12],
                                                expected_fingerprint[:12]))
    params, buffers = {}, {}
    offset = 0
    for block in blocks:
        shape = tuple(block['shape'])
        count = int(np.prod(shape, dtype=np.int64))
        end = offset + count * _DTYPE.itemsize
        if end > len(payload):
            raise CorruptWeightsError("weight file '%s' block '%s' runs past "
                                      "the payload" % (path, block['name']))
        value = np.frombuffer(payload[offset:end], dtype=_DTYPE)
        value = value.reshape(shape).astype(np.float64)
        offset = end
        name = block['name']
        if name.startswith(BUFFER_PREFIX):
            buffers[name[len(BUFFER_PREFIX):]] = value
        else:
            params[name] = value
    if offset != len(payload):
        raise CorruptWeightsError("weight file '%s' payload has %d unused "
                                  "bytes" % (path, len(payload) - offset))
    return model_class(kind)(architecture, params, buffers)
