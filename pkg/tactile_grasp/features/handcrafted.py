"""Hand-crafted baseline haptic features

The raw 12-D frames at three events of the closure are concatenated:
before contact (the first frame), when the fingers stall (the stall
event) and at equilibrium (the last frame).

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

from ..haptics import N_CHANNELS

EVENTS = ('pre_contact', 'stall', 'equilibrium')
N_FEATURES = len(EVENTS) * N_CHANNELS


def event_indices(episode):
    """ Frame index of each event in EVENTS.
    """
    return 0, episode.close_event_index, len(episode) - 1


def handcrafted_features(episode):
    """ 36-D feature vector of one episode.
    """
    return np.concatenate([episode.frames[index]
                           for index in event_indices(episode)])


def handcrafted_many(episodes):
    """ (n, 36) feature matrix.
    """
    if not episodes:
        return np.zeros((0, N_FEATURES))
    return np.stack([handcrafted_features(episode) for episode in episodes])
