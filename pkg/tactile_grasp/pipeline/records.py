"""Dataset records and their storage

A dataset is a record store flushed to a JSON lines file (one
EpisodeRecord per line, then one DatasetInfo line) plus a sidecar
'.npy' matrix holding the haptic frames of every executed grasp.  Each
grasp of a record points at its rows of the sidecar matrix.  See
docs/dataset_format.md.

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

import numpy as np

from ..errors import ArtifactMissingError, ContaminationError, ValidationError
from ..haptics import HapticEpisode
from ..heads.bins import RegraspDelta
from ..lockable import Lockable
from ..record_model import RecordAttr, RecordModel
from ..store import KeyStore, open_store
from ..utils import digest_bytes
from ..world.sim import GraspOutcome, GraspPose

LOGGER = logging.getLogger(__name__)

DATASET_FORMAT_VERSION = 1


class EpisodeRecord(RecordModel):
    """One collected interaction: an initial grasp followed by its
    re-grasps on the same object.

    Attributes:

        scene: object_id, material, split, test_set and the ground
               truth pose (kept for evaluation only)
        grasps: per executed grasp {"grasp", "delta", "outcome",
                "haptics"}; "delta" is the correction that produced
                this grasp from the previous one (None for the first)
                and "haptics" locates its frames in the sidecar
        success_labels: success of each grasp, in order
        timestamps: simulated start time (s) of each grasp
        seed_path: the integer key path of the record's random stream

    """
    model_prefix = "/episodes"
    episode_id = RecordAttr(is_record_id=True)
    format_version = RecordAttr(default=DATASET_FORMAT_VERSION)
    sequence = RecordAttr(default=0)
    collection_set = RecordAttr(default="set1")
    split = RecordAttr(default="train")
    scene = RecordAttr(default={})
    grasps = RecordAttr(default=[])
    localization = RecordAttr(default=None)
    success_labels = RecordAttr(default=[])
    timestamps = RecordAttr(default=[])
    seed_path = RecordAttr(default=[])

    def steps(self):
        """ [(GraspPose, RegraspDelta or None, GraspOutcome)] per grasp.
        """
        result = []
        for item in self.grasps:
            delta = item.get('delta')
            result.append((
                GraspPose.from_dict(item['grasp']),
                None if delta is None else RegraspDelta.from_dict(delta),
                GraspOutcome.from_dict(item['outcome']),
            ))
        return result

    def validate(self):
        """ Raise ValidationError naming the first violated invariant.
        """
        if self.format_version != DATASET_FORMAT_VERSION:
            raise ValidationError("record '%s' has format_version %r"
                                  % (self.episode_id, self.format_version))
        if self.split not in ('train', 'test'):
            raise ValidationError("record '%s' split must be 'train' or "
                                  "'test'" % self.episode_id)
        if self.scene.get('split') != self.split:
            raise ValidationError("record '%s' split does not match its "
                                  "object's split" % self.episode_id)
        if any(item.get('haptics') is None for item in self.grasps):
            raise ValidationError("record '%s' must have one haptic episode "
                                  "per executed grasp" % self.episode_id)
        outcomes = [bool(item['outcome']['success']) for item in self.grasps]
        if outcomes != [bool(label) for label in self.success_labels]:
            raise ValidationError("record '%s' labels are not consistent "
                                  "with its outcomes" % self.episode_id)
        return self


class DatasetInfo(RecordModel):
    """ Dataset level facts, stored after the episode records.
    """
    model_prefix = "/dataset"
    name = RecordAttr(is_record_id=True, default=lambda: "info")
    format_version = RecordAttr(default=DATASET_FORMAT_VERSION)
    seed = RecordAttr(default=0)
    config_digest = RecordAttr(default=None)
    catalog_digest = RecordAttr(default=None)
    haptics_rows = RecordAttr(default=0)
    haptics_sha256 = RecordAttr(default=None)
    counts = RecordAttr(default={})


class DatasetWriter(Lockable):
    """Single writer for a dataset.  Records are appended in call order
    under the writer lock and the sidecar matrix grows with them.

    """
    LOCK_NAME = "/datasets/writer"

    def __init__(self, store=None):
        store = store if store is not None else KeyStore()
        Lockable.__init__(self, self.LOCK_NAME, store)
        self.store = store
        self.chunks = []
        self.rows = 0
        self.count = 0

    def append(self, record, episodes):
        """Store 'record' with one HapticEpisode per grasp in
        'episodes', filling in the grasps' sidecar references.

        """
        if len(episodes) != len(record.grasps):
            raise ValidationError("record '%s' must have one haptic episode "
                                  "per executed grasp" % record.episode_id)
        with self.lock():
            for item, episode in zip(record.grasps, episodes):
                matrix = episode.to_matrix()
                item['haptics'] = {
                    'row_offset': self.rows,
                    'n_frames': len(episode),
                    'duration_s': episode.duration_s,
                    'close_event_index': episode.close_event_index,
                    'rate_hz': episode.rate_hz,
                }
                self.chunks.append(matrix)
                self.rows += len(episode)
            record.sequence = self.count
            record.validate()
            record.put(self.store)
            self.count += 1

    def haptics_matrix(self):
        """ All haptic rows stacked, (rows, 14).
        """
        if not self.chunks:
            return np.zeros((0, 14))
        return np.vstack(self.chunks)

    def close(self, dataset_path, haptics_path, info):
        """Write the sidecar matrix and the record file.  'info' is the
        DatasetInfo to store last.

        """
        with self.lock():
            matrix = self.haptics_matrix()
            tmp_path = "%s.tmp.npy" % haptics_path
            np.save(tmp_path, matrix, allow_pickle=False)
            os.replace(tmp_path, haptics_path)
            info.haptics_rows = int(matrix.shape[0])
            info.haptics_sha256 = digest_bytes(matrix.tobytes())
            info.put(self.store)
            self.store.flush(dataset_path)
        LOGGER.info("wrote %d records (%d haptic rows) to '%s'", self.count,
                    matrix.shape[0], dataset_path)


@dataclass
class Dataset:
    """ A loaded dataset: records, info and the sidecar matrix.
    """
    records: list
    info: DatasetInfo
    haptics: np.ndarray

    def episode(self, record, grasp_index):
        """ HapticEpisode of grasp 'grasp_index' of 'record'.
        """
        ref = record.grasps[grasp_index]['haptics']
        start = ref['row_offset']
        rows = self.haptics[start:start + ref['n_frames']]
        if rows.shape[0] != ref['n_frames']:
            raise ValidationError("record '%s' haptics run past the sidecar "
                                  "matrix" % record.episode_id)
        return HapticEpisode.from_matrix(rows, ref['duration_s'],
                                         ref['close_event_index'],
                                         ref['rate_hz'])

    def episodes(self, record):
        """ HapticEpisode of every grasp of 'record'.
        """
        return [self.episode(record, index)
                for index in range(len(record.grasps))]

    def split(self, name):
        """ Records of the 'train' or 'test' split.
        """
        return [record for record in self.records if record.split == name]


def load_dataset(dataset_path, haptics_path, catalog=None):
    """Load and validate a dataset.  With 'catalog', also verify that
    every record's split agrees with its object's split in the catalog.

    """
    for path in (dataset_path, haptics_path):
        if not os.path.exists(path):
            raise ArtifactMissingError("dataset artifact '%s' does not exist"
                                       % path)
    store = open_store(dataset_path)
    records = [record.validate() for record in EpisodeRecord.get_all(store)]
    info = DatasetInfo.get(store, "info")
    if info is None:
        raise ValidationError("dataset '%s' has no info record"
                              % dataset_path)
    haptics = np.load(haptics_path, allow_pickle=False)
    if haptics.ndim != 2 or haptics.shape[0] != info.haptics_rows:
        raise ValidationError("haptics sidecar '%s' does not match the "
                              "dataset" % haptics_path)
    content = digest_bytes(np.ascontiguousarray(haptics).tobytes())
    if content != info.haptics_sha256:
        raise ValidationError("haptics sidecar '%s' content does not match "
                              "the digest recorded in the dataset"
                              % haptics_path)
    if catalog is not None:
        check_disjoint(records, catalog)
    return Dataset(records, info, haptics)


def check_disjoint(records, catalog):
    """Raise ContaminationError if a train split record uses an object
    the catalog holds out for testing (or the other way round).

    """
    splits = {entry.object_id: entry.split for entry in catalog.entries}
    for record in records:
        object_id = record.scene.get('object_id')
        if splits.get(object_id, record.split) != record.split:
            raise ContaminationError(
                "record '%s' tags object '%s' as %s but the catalog holds it "
                "in the %s split" % (record.episode_id, object_id,
                                     record.split, splits[object_id]))
    train_objects = {record.scene.get('object_id') for record in records
                     if record.split == 'train'}
    held_out = {object_id for object_id, split in splits.items()
                if split == 'test'}
    overlap = sorted(train_objects & held_out)
    if overlap:
        raise ContaminationError("held-out objects %s appear in training "
                                 "records" % overlap)
