"""Conditional recurrent autoencoder over haptic episodes

The encoder LSTM reads the 16-D input sequence (12 force channels, the
gripper DOF scaled to [0, 1] and the one-hot gripper mode) and its final
hidden state is projected to the latent vector H.  The decoder LSTM
receives H together with the control slice (f_t, one-hot mode) at every
step and reconstructs the 12 force channels only.

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
import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..config import GRIPPER_MODES, RunConfig
from ..errors import (
    ArgumentError,
    ConfigError,
    FingerprintError,
    InsufficientDataError,
    TrainingError,
    ValidationError,
)
from ..haptics import N_CHANNELS, downsample
from ..nn.lstm import LSTMCell, init_lstm, lstm_backward, lstm_forward
from ..nn.losses import loss_l2
from ..nn.model import Model, architecture_fingerprint, register_model
from ..nn.optim import AdamState, adam_step, clip_global_norm

LOGGER = logging.getLogger(__name__)

N_CONTROL = 1 + len(GRIPPER_MODES)
N_INPUT = N_CHANNELS + N_CONTROL


@dataclass(frozen=True)
class EncoderConfig:
    """ Shape and training settings of the autoencoder.
    """
    latent_dim: int = 64
    lstm_hidden: int = 128
    window_s: float = 3.0
    training_rate_hz: float = 25.0
    learning_rate: float = 1e-5
    post_enclosure_s: float = 0.5
    epochs: int = 20
    batch_size: int = 32
    validation_fraction: float = 0.1
    min_episodes: int = 500
    clip_norm: float = 5.0
    f_max: float = 255.0

    def __post_init__(self):
        if self.latent_dim > self.lstm_hidden:
            raise ConfigError("latent_dim must be <= lstm_hidden")
        frames = self.window_s * self.training_rate_hz
        if abs(frames - round(frames)) > 1e-9 or round(frames) < 1:
            raise ConfigError("window_s x training_rate_hz must be a "
                              "positive integer frame count")

    @classmethod
    def from_config(cls, config):
        """ EncoderConfig from config.encoder and config.sim.f_max.
        """
        params = config.encoder
        return cls(
            latent_dim=params.latent_dim,
            lstm_hidden=params.lstm_hidden,
            window_s=params.window_s,
            training_rate_hz=params.training_rate_hz,
            learning_rate=params.learning_rate,
            post_enclosure_s=params.post_enclosure_s,
            epochs=params.epochs,
            batch_size=params.batch_size,
            validation_fraction=params.validation_fraction,
            min_episodes=params.min_episodes,
            clip_norm=params.clip_norm,
            f_max=config.sim.f_max,
        )

    @property
    def steps(self):
        """ Frames per input window.
        """
        return int(round(self.window_s * self.training_rate_hz))

    def architecture(self):
        """ Architecture dictionary of the autoencoder this config builds.
        """
        return {
            'n_forces': N_CHANNELS, 'n_control': N_CONTROL,
            'hidden': int(self.lstm_hidden), 'latent': int(self.latent_dim),
            'steps': self.steps, 'training_rate_hz': self.training_rate_hz,
            'window_s': self.window_s,
            'post_enclosure_s': self.post_enclosure_s,
            'f_max': self.f_max,
        }


class Standardizer:
    """ Per channel mean / std of the 12 force channels.
    """
    def __init__(self, mean, std):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.std = np.asarray(std, dtype=np.float64)

    @classmethod
    def fit(cls, windows):
        """Statistics over every frame of 'windows' (n, steps, 16).
        Constant channels get std 1.

        """
        forces = np.asarray(windows)[..., :N_CHANNELS].reshape(-1, N_CHANNELS)
        mean = forces.mean(axis=0)
        std = forces.std(axis=0)
        return cls(mean, np.where(std > 0.0, std, 1.0))

    @classmethod
    def identity(cls):
        """ No-op standardizer.
        """
        return cls(np.zeros(N_CHANNELS), np.ones(N_CHANNELS))

    def apply(self, windows):
        """ Standardize the force columns, leaving controls untouched.
        """
        result = np.array(windows, dtype=np.float64)
        forces = result[..., :N_CHANNELS]
        result[..., :N_CHANNELS] = (forces - self.mean) / self.std
        return result


def prepare_input(episode, config, standardizer=None):
    """Turn 'episode' into the (steps, 16) autoencoder input.

    The episode is resampled to config.training_rate_hz and cut to a
    window of config.window_s ending config.post_enclosure_s after the
    stall event.  Indices before the first frame repeat the first frame
    and indices past the end repeat the last frame.

    """
    if len(episode) == 0:
        raise ValidationError("cannot prepare an empty episode")
    if episode.rate_hz > config.training_rate_hz:
        episode = downsample(episode, config.training_rate_hz)
    elif episode.rate_hz < config.training_rate_hz:
        raise ArgumentError("episode rate %g Hz is below the training rate "
                            "%g Hz" % (episode.rate_hz,
                                       config.training_rate_hz))
    steps = config.steps
    last = episode.close_event_index + int(round(config.post_enclosure_s
                                                 * episode.rate_hz))
    index = np.clip(np.arange(last - steps + 1, last + 1), 0,
                    len(episode) - 1)
    window = np.zeros((steps, N_INPUT))
    window[:, :N_CHANNELS] = episode.frames[index]
    window[:, N_CHANNELS] = episode.f_trace[index] / config.f_max
    window[:, N_CHANNELS + 1 + episode.mode_index] = 1.0
    if standardizer is not None:
        window = standardizer.apply(window)
    return window


@register_model
class ConditionalAutoencoder(Model):
    """Encoder (M_ENC) and decoder (M_DEC) with the force standardizer
    kept in the buffers.

    Blocks: enc.W, enc.b (encoder LSTM), latent.W, latent.b (final
    hidden state to H), dec.W, dec.b (decoder LSTM over [H, controls]),
    out.W, out.b (decoder hidden state to the 12 forces).

    """
    kind = 'conditional_autoencoder'

    @classmethod
    def create(cls, rng, config, standardizer=None):
        """ Freshly initialized autoencoder for 'config'.
        """
        hidden, latent = config.lstm_hidden, config.latent_dim
        encoder = init_lstm(rng, N_INPUT, hidden)
        limit = math.sqrt(6.0 / (hidden + latent))
        latent_w = rng.uniform(-limit, limit, size=(latent, hidden))
        decoder = init_lstm(rng, latent + N_CONTROL, hidden)
        limit = math.sqrt(6.0 / (hidden + N_CHANNELS))
        out_w = rng.uniform(-limit, limit, size=(N_CHANNELS, hidden))
        standardizer = standardizer or Standardizer.identity()
        params = {
            'enc.W': encoder.W, 'enc.b': encoder.b,
            'latent.W': latent_w, 'latent.b': np.zeros(latent),
            'dec.W': decoder.W, 'dec.b': decoder.b,
            'out.W': out_w, 'out.b': np.zeros(N_CHANNELS),
        }
        buffers = {'standardizer.mean': standardizer.mean,
                   'standardizer.std': standardizer.std}
        return cls(config.architecture(), params, buffers)

    def block_shapes(self):
        hidden = self.architecture['hidden']
        latent = self.architecture['latent']
        n_in = self.architecture['n_forces'] + self.architecture['n_control']
        return {
            'enc.W': (4 * hidden, hidden + n_in), 'enc.b': (4 * hidden,),
            'latent.W': (latent, hidden), 'latent.b': (latent,),
            'dec.W': (4 * hidden, hidden + latent
                      + self.architecture['n_control']),
            'dec.b': (4 * hidden,),
            'out.W': (self.architecture['n_forces'], hidden),
            'out.b': (self.architecture['n_forces'],),
        }

    def standardizer(self):
        """ The Standardizer frozen at training time.
        """
        return Standardizer(self.buffers['standardizer.mean'],
                            self.buffers['standardizer.std'])

    def encoder_cell(self):
        """ M_ENC recurrence.
        """
        return LSTMCell(self.params['enc.W'], self.params['enc.b'])

    def decoder_cell(self):
        """ M_DEC recurrence.
        """
        return LSTMCell(self.params['dec.W'], self.params['dec.b'])

    def encode_batch(self, windows):
        """ H for standardized windows of shape (batch, steps, 16).
        """
        inputs = np.asarray(windows, dtype=np.float64).transpose(1, 0, 2)
        states, _, _ = lstm_forward(self.encoder_cell(), inputs)
        return states[-1] @ self.params['latent.W'].T + self.params['latent.b']

    def forward(self, windows):
        """Reconstruct the forces of standardized 'windows'.  Returns
        (reconstruction (batch, steps, 12), cache).

        """
        inputs = np.asarray(windows, dtype=np.float64).transpose(1, 0, 2)
        n_forces = self.architecture['n_forces']
        enc_states, _, enc_cache = lstm_forward(self.encoder_cell(), inputs)
        final = enc_states[-1]
        latent = final @ self.params['latent.W'].T + self.params['latent.b']
        steps = inputs.shape[0]
        dec_inputs = np.concatenate([
            np.broadcast_to(latent, (steps,) + latent.shape),
            inputs[:, :, n_forces:],
        ], axis=2)
        dec_states, _, dec_cache = lstm_forward(self.decoder_cell(),
                                                dec_inputs)
        recon = dec_states @ self.params['out.W'].T + self.params['out.b']
        cache = (enc_states, enc_cache, final, dec_states, dec_cache)
        return recon.transpose(1, 0, 2), cache

    def backward(self, cache, grad_recon):
        """ Gradients of all blocks given d loss / d reconstruction.
        """
        enc_states, enc_cache, final, dec_states, dec_cache = cache
        grad_recon = grad_recon.transpose(1, 0, 2)
        latent = self.architecture['latent']
        grads = {
            'out.W': np.einsum('tbo,tbh->oh', grad_recon, dec_states),
            'out.b': grad_recon.sum(axis=(0, 1)),
        }
        grad_dec_states = grad_recon @ self.params['out.W']
        grad_dec_in, grads['dec.W'], grads['dec.b'], _, _ = lstm_backward(
            self.decoder_cell(), dec_cache, grad_dec_states)
        grad_latent = grad_dec_in[:, :, :latent].sum(axis=0)
        grads['latent.W'] = grad_latent.T @ final
        grads['latent.b'] = grad_latent.sum(axis=0)
        grad_enc_states = np.zeros_like(enc_states)
        grad_enc_states[-1] = grad_latent @ self.params['latent.W']
        _, grads['enc.W'], grads['enc.b'], _, _ = lstm_backward(
            self.encoder_cell(), enc_cache, grad_enc_states)
        return grads

    def loss(self, windows):
        """ (L2 reconstruction loss, cache, gradient w.r.t. the output).
        """
        recon, cache = self.forward(windows)
        target = np.asarray(windows)[:, :, :self.architecture['n_forces']]
        value, grad = loss_l2(recon, target)
        return value, cache, grad


@dataclass
class AutoencoderTraining:
    """Outcome of train_autoencoder().  'curve' has one entry per epoch
    (epoch 0 is the untrained model) with train and validation loss.

    """
    model: ConditionalAutoencoder
    curve: list = field(default_factory=list)
    baseline_loss: float = None
    train_index: list = field(default_factory=list)
    validation_index: list = field(default_factory=list)


def _dataset_loss(model, windows, chunk=256):
    """ Mean reconstruction loss over all windows, in fixed order.
    """
    if len(windows) == 0:
        return float('nan')
    total = 0.0
    for start in range(0, len(windows), chunk):
        part = windows[start:start + chunk]
        value, _, _ = model.loss(part)
        total += value * len(part)
    return total / len(windows)


def constant_baseline_loss(windows):
    """Loss of predicting every force channel by its mean over
    'windows' (the standardized training split).

    """
    forces = np.asarray(windows)[:, :, :N_CHANNELS]
    mean = forces.reshape(-1, N_CHANNELS).mean(axis=0)
    return float(np.mean((forces - mean) ** 2))


def split_indices(count, fraction, rng):
    """ (train, validation) index lists from a seeded permutation.
    """
    order = rng.permutation(count)
    n_val = int(round(fraction * count))
    if fraction > 0 and count > 1:
        n_val = min(max(1, n_val), count - 1)
    return sorted(order[n_val:].tolist()), sorted(order[:n_val].tolist())


def train_autoencoder(episodes, config, rng):
    """Train the conditional autoencoder on 'episodes'.

    Parameters:

        episodes:

            Sequence of HapticEpisode (the training split of the
            dataset; a further validation_fraction is held out here).

        config:

            EncoderConfig.

        rng:

            numpy Generator driving the split, the initialization and
            the minibatch order.

    Returns an AutoencoderTraining.  Raises InsufficientDataError when
    fewer than config.min_episodes episodes are given and TrainingError
    when the loss diverges.

    """
    if len(episodes) < max(1, config.min_episodes):
        raise InsufficientDataError(
            "autoencoder training needs at least %d episodes, got %d"
            % (config.min_episodes, len(episodes)))
    raw = np.stack([prepare_input(episode, config) for episode in episodes])
    train_index, validation_index = split_indices(
        len(raw), config.validation_fraction, rng)
    standardizer = Standardizer.fit(raw[train_index])
    windows = standardizer.apply(raw)
    train = windows[train_index]
    validation = windows[validation_index]

    model = ConditionalAutoencoder.create(rng, config, standardizer)
    state = AdamState.create(model.parameters(), config.learning_rate)
    baseline = constant_baseline_loss(train)
    curve = [_curve_entry(0, model, train, validation)]
    LOGGER.info("autoencoder: %d train / %d validation episodes, baseline "
                "loss %.4f, initial loss %.4f", len(train), len(validation),
                baseline, curve[0]['train_loss'])
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(train))
        for start in range(0, len(order), config.batch_size):
            batch = train[order[start:start + config.batch_size]]
            value, cache, grad = model.loss(batch)
            if not math.isfinite(value):
                raise TrainingError("autoencoder loss diverged in epoch %d"
                                    % epoch)
            grads, _ = clip_global_norm(model.backward(cache, grad),
                                        config.clip_norm)
            params, state = adam_step(state, model.parameters(), grads)
            model = model.with_parameters(params)
        entry = _curve_entry(epoch, model, train, validation)
        if not math.isfinite(entry['train_loss']):
            raise TrainingError("autoencoder loss diverged in epoch %d"
                                % epoch)
        curve.append(entry)
        LOGGER.info("autoencoder epoch %d: train %.4f validation %.4f",
                    epoch, entry['train_loss'], entry['validation_loss'])
    return AutoencoderTraining(model, curve, baseline, train_index,
                               validation_index)


def _curve_entry(epoch, model, train, validation):
    return {'epoch': epoch, 'train_loss': _dataset_loss(model, train),
            'validation_loss': _dataset_loss(model, validation)}


def check_encoder(model, config):
    """ Raise FingerprintError unless 'model' was built from 'config'.
    """
    expected = architecture_fingerprint(ConditionalAutoencoder.kind,
                                        config.architecture())
    if model.fingerprint() != expected:
        raise FingerprintError("encoder fingerprint %s does not match the "
                               "configured architecture %s"
                               % (model.fingerprint()[:12], expected[:12]))


def encode(model, episode, config):
    """ Latent vector H (latent_dim,) of one episode.
    """
    return encode_many(model, [episode], config)[0]


def encode_many(model, episodes, config, batch_size=256):
    """ (n, latent_dim) latent vectors, encoded in fixed size batches.
    """
    check_encoder(model, config)
    standardizer = model.standardizer()
    latent = np.zeros((len(episodes), config.latent_dim))
    for start in range(0, len(episodes), batch_size):
        part = episodes[start:start + batch_size]
        windows = np.stack([prepare_input(episode, config, standardizer)
                            for episode in part])
        latent[start:start + len(part)] = model.encode_batch(windows)
    if not np.all(np.isfinite(latent)):
        raise TrainingError("encoder produced non-finite latent vectors")
    return latent


def encoder_config_for(model, config=None):
    """EncoderConfig matching a trained model's architecture (training
    settings taken from 'config').

    """
    config = config or RunConfig()
    base = EncoderConfig.from_config(config)
    arch = model.architecture
    return EncoderConfig(
        latent_dim=arch['latent'], lstm_hidden=arch['hidden'],
        window_s=arch['window_s'], training_rate_hz=arch['training_rate_hz'],
        learning_rate=base.learning_rate,
        post_enclosure_s=arch['post_enclosure_s'], epochs=base.epochs,
        batch_size=base.batch_size,
        validation_fraction=base.validation_fraction,
        min_episodes=base.min_episodes, clip_norm=base.clip_norm,
        f_max=arch['f_max'],
    )


def export_latents(episode_ids, latents, path):
    """ Write one 'episode_id,h_0,...,h_{d-1}' line per episode.
    """
    with open(path, 'w', encoding='utf-8', newline='') as outfile:
        writer = csv.writer(outfile, lineterminator='\n')
        writer.writerow(['episode_id'] + ['h_%d' % index for index in
                                          range(np.shape(latents)[1])])
        for episode_id, vector in zip(episode_ids, latents):
            writer.writerow([episode_id] + [repr(float(v)) for v in vector])
