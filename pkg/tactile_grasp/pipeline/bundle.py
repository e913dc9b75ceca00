"""The trained models used by the grasping controller

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
import logging
import os
from dataclasses import dataclass

from ..errors import ArtifactMissingError, FingerprintError
from ..features.autoencoder import encode, encode_many, encoder_config_for
from ..nn.serialize import (
    load_weights,
    parameter_digest,
    read_header,
    save_weights,
)

LOGGER = logging.getLogger(__name__)

ENCODER_FILE = "encoder.weights"
STABILITY_FILE = "stability.weights"
POLICY_FILE = "policy.weights"


@dataclass
class ModelBundle:
    """Encoder (with its EncoderConfig), stability estimator and
    re-grasp policy.  The heads were trained on latent vectors of this
    encoder.

    """
    encoder: object
    encoder_config: object
    stability: object = None
    policy: object = None

    def latent(self, episode):
        """ H of one episode.
        """
        return encode(self.encoder, episode, self.encoder_config)

    def latents(self, episodes):
        """ H of many episodes, (n, latent_dim).
        """
        return encode_many(self.encoder, episodes, self.encoder_config)

    def stability_probability(self, latent):
        """ Probability that the grasp that produced 'latent' is stable.
        """
        return float(self.stability.probability(latent)[0])


def save_encoder(model, models_dir, metadata=None):
    """ Write the encoder weights; returns the file path.
    """
    os.makedirs(models_dir, exist_ok=True)
    path = os.path.join(models_dir, ENCODER_FILE)
    save_weights(model, path, metadata)
    return path


def save_head(model, models_dir, filename, encoder, metadata=None):
    """Write a head's weights, recording the fingerprint and weight
    digest of the encoder whose latent vectors it was trained on.

    """
    os.makedirs(models_dir, exist_ok=True)
    path = os.path.join(models_dir, filename)
    metadata = dict(metadata or {})
    metadata['encoder_fingerprint'] = encoder.fingerprint()
    metadata['encoder_sha256'] = parameter_digest(encoder)
    save_weights(model, path, metadata)
    return path


def _require(path):
    if not os.path.exists(path):
        raise ArtifactMissingError("model file '%s' does not exist" % path)
    return path


def load_encoder(models_dir, config=None):
    """ (encoder, EncoderConfig) from 'models_dir'.
    """
    encoder = load_weights(_require(os.path.join(models_dir, ENCODER_FILE)))
    return encoder, encoder_config_for(encoder, config)


def load_head(models_dir, filename, encoder):
    """Load a head and check it was trained on 'encoder'.  Raises
    FingerprintError otherwise.

    """
    path = _require(os.path.join(models_dir, filename))
    header, _ = read_header(path)
    recorded = header.get('metadata', {})
    if (recorded.get('encoder_fingerprint') != encoder.fingerprint()
            or recorded.get('encoder_sha256') != parameter_digest(encoder)):
        raise FingerprintError("head '%s' was trained on a different "
                               "encoder" % path)
    return load_weights(path)


def load_bundle(models_dir, config=None, with_policy=True):
    """ ModelBundle from the files in 'models_dir'.
    """
    encoder, encoder_config = load_encoder(models_dir, config)
    stability = load_head(models_dir, STABILITY_FILE, encoder)
    policy = None
    if with_policy:
        policy = load_head(models_dir, POLICY_FILE, encoder)
    LOGGER.debug("loaded model bundle from '%s'", models_dir)
    return ModelBundle(encoder, encoder_config, stability, policy)
