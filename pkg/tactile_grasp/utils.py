""" Small helpers shared across tactile_grasp

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
import hashlib
import json
import re

import numpy as np


def clean_desc(desc):
    """Clean up whitespace in description strings.

    """
    clean = re.sub(r"\s+", " ", desc)
    clean = re.sub(r"^\s+", "", clean)
    clean = re.sub(r"\s+$", "", clean)
    return clean


def canonical_json(data):
    """Serialize 'data' as compact JSON with sorted keys.  Floats are
    written with repr() precision by the json module, so a load of the
    result gives back bit-identical values.

    """
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def digest_bytes(data):
    """ SHA-256 hex digest of a bytes object.
    """
    return hashlib.sha256(data).hexdigest()


def digest_json(data):
    """ SHA-256 hex digest of the canonical JSON form of 'data'.
    """
    return digest_bytes(canonical_json(data).encode('utf-8'))


def file_digest(path, chunk_size=1 << 20):
    """SHA-256 hex digest of the contents of the file at 'path'.

    """
    sha = hashlib.sha256()
    with open(path, 'rb') as infile:
        while True:
            chunk = infile.read(chunk_size)
            if not chunk:
                break
            sha.update(chunk)
    return sha.hexdigest()


def make_rng(seed, *keys):
    """Build an independent numpy Generator for the stream identified by
    'seed' and the integer path in 'keys'.  Two calls with the same
    arguments always produce identical streams, and streams with
    different key paths are statistically independent.

    Example:

        rng = make_rng(7, object_index, orientation, repeat)

    """
    seq = np.random.SeedSequence(int(seed),
                                 spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(seq)


def wrap_angle(theta):
    """ Wrap an angle (or array of angles) into [-pi, pi).
    """
    return (np.asarray(theta) + np.pi) % (2.0 * np.pi) - np.pi
