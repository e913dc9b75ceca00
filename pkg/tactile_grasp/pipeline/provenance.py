"""Provenance manifests

Every artifact written by a command gets a '<artifact>.manifest.json'
next to it:

    {"kind": "dataset", "artifact": "dataset.jsonl",
     "artifact_sha256": "...", "config_digest": "...", "seed": 0,
     "parents": {"catalog": "<sha256>"}, "version": "1.0.0"}

Consumers check that the artifact on disk still has the recorded digest
and that the parents they were handed are the ones the artifact was
made from.

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

from ..errors import ArtifactMissingError, ProvenanceError
from ..utils import canonical_json, file_digest
from ..version import VERSION

LOGGER = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


def manifest_path(path):
    """ Location of the manifest of the artifact at 'path'.
    """
    return path + MANIFEST_SUFFIX


def write_manifest(path, kind, config, parents=None, extra=None):
    """Record the provenance of the artifact at 'path'.  'parents' maps
    names to the digests of the artifacts it was made from.

    """
    manifest = {
        'kind': kind,
        'artifact': os.path.basename(path),
        'artifact_sha256': file_digest(path),
        'config_digest': config.digest(),
        'seed': config.seed,
        'parents': dict(parents or {}),
        'version': VERSION,
    }
    if extra:
        manifest.update(extra)
    with open(manifest_path(path), 'w', encoding='utf-8',
              newline='\n') as outfile:
        outfile.write(canonical_json(manifest))
        outfile.write('\n')
    return manifest


def read_manifest(path):
    """ Manifest of the artifact at 'path'.
    """
    mpath = manifest_path(path)
    if not os.path.exists(path):
        raise ArtifactMissingError("artifact '%s' does not exist" % path)
    if not os.path.exists(mpath):
        raise ArtifactMissingError("artifact '%s' has no provenance "
                                   "manifest" % path)
    try:
        with open(mpath, 'r', encoding='utf-8') as infile:
            return json.load(infile)
    except ValueError as err:
        raise ProvenanceError("manifest '%s' is not valid JSON" % mpath) \
            from err


def check_artifact(path, kind=None, parents=None):
    """Verify the artifact at 'path' against its manifest.

    Raises ProvenanceError when the artifact's digest changed, its kind
    is not 'kind', or any of the 'parents' digests given differs from
    the recorded one.  Returns the manifest.

    """
    manifest = read_manifest(path)
    if kind is not None and manifest.get('kind') != kind:
        raise ProvenanceError("artifact '%s' is a %r, expected %r"
                              % (path, manifest.get('kind'), kind))
    if file_digest(path) != manifest.get('artifact_sha256'):
        raise ProvenanceError("artifact '%s' does not match the digest in "
                              "its manifest" % path)
    recorded = manifest.get('parents', {})
    for name, digest in (parents or {}).items():
        if recorded.get(name) != digest:
            raise ProvenanceError("artifact '%s' was not made from the "
                                  "current %s" % (path, name))
    LOGGER.debug("provenance of '%s' verified", path)
    return manifest


def artifact_digest(path):
    """ Digest of an artifact recorded in its manifest (verified).
    """
    return check_artifact(path)['artifact_sha256']
