"""Dataset collection

Two sets are collected and combined.  Set 1 visits the first
set1_objects training objects with set1_grasps initial grasps each,
every one followed by set1_regrasps random corrections.  Set 2 visits
a subset of set2_objects training objects covering every material with
more initial grasps and more corrections.  Initial grasps come from
the noisy oracle; corrections are drawn uniformly over the continuous
action ranges.

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
from dataclasses import dataclass

import numpy as np

from ..config import MATERIAL_LABELS, RunConfig
from ..errors import ValidationError
from ..haptics import generate_episode
from ..heads.bins import bin_encode, random_regrasp
from ..heads.training import TrainingExample
from ..utils import digest_json, make_rng
from ..world.catalog import create_scene
from ..world.sim import displace_object, execute_grasp
from .gwos import GwosConfig, apply_delta, initial_grasp
from .records import (
    Dataset,
    DatasetInfo,
    DatasetWriter,
    EpisodeRecord,
)

LOGGER = logging.getLogger(__name__)

COLLECTION_STREAM = 2


def _midpoint(count_range):
    low, high = count_range
    return (low + high) / 2.0


def dry_count(params):
    """Expected collection sizes from CollectionParams without
    simulating anything.  Ranges count at their midpoint, so fixed
    ranges give exact counts.

    Returns a dictionary with 'objects', 'records' (initial grasps),
    'regrasp_interactions' (initial grasps times corrections, the
    number of labelled correction examples) and 'interactions' (every
    executed grasp).

    """
    sets = (
        (params.set1_objects, params.set1_grasps, params.set1_regrasps),
        (params.set2_objects, params.set2_grasps, params.set2_regrasps),
    )
    records = 0.0
    regrasps = 0.0
    for objects, grasps, corrections in sets:
        initial = objects * _midpoint(grasps)
        records += initial
        regrasps += initial * _midpoint(corrections)
    counts = {
        'objects': max(params.set1_objects, params.set2_objects),
        'records': records,
        'regrasp_interactions': regrasps,
        'interactions': records + regrasps,
    }
    return {key: int(value) if float(value).is_integer() else value
            for key, value in counts.items()}


def material_cover(entries, count):
    """The first entry of each material (in catalog order), then further
    entries in catalog order, up to 'count' entries.  Raises
    ValidationError when a material has no entry.

    """
    chosen = []
    for label in MATERIAL_LABELS:
        match = [entry for entry in entries if entry.material == label]
        if not match:
            raise ValidationError("collection needs a training object of "
                                  "material '%s'" % label)
        chosen.append(match[0])
    chosen = chosen[:count]
    for entry in entries:
        if len(chosen) >= count:
            break
        if entry not in chosen:
            chosen.append(entry)
    return chosen


def _scene_dict(obj):
    return {
        'object_id': obj.object_id,
        'material': obj.material.label,
        'split': obj.split,
        'test_set': obj.test_set,
        'height': obj.height,
        'pose': list(obj.pose),
    }


def collect_record(entry, config, seed, seed_path, n_regrasps,
                   collection_set):
    """Simulate one record: a noisy oracle grasp on a fresh scene of
    'entry' followed by 'n_regrasps' random corrections.  Returns the
    EpisodeRecord (without sidecar references) and its HapticEpisodes.

    """
    rng = make_rng(seed, *seed_path)
    scene_seed = int(rng.integers(0, 2 ** 31 - 1))
    workspace, obj = create_scene(scene_seed, entry, config)
    scene = _scene_dict(obj)
    gwos = GwosConfig.from_config(config, initializer='noisy_oracle',
                                  regrasp='random')
    grasp = initial_grasp(gwos, workspace, obj, rng, config)
    grasps, episodes, timestamps = [], [], []
    delta = None
    clock = 0.0
    for step in range(n_regrasps + 1):
        outcome = execute_grasp(workspace, obj, grasp, rng, config)
        episode = generate_episode(obj, grasp, outcome, rng, config)
        grasps.append({'grasp': grasp.to_dict(),
                       'delta': None if delta is None else delta.to_dict(),
                       'outcome': outcome.to_dict(),
                       'haptics': None})
        episodes.append(episode)
        timestamps.append(clock)
        clock += episode.duration_s
        if any(outcome.object_displacement):
            obj = displace_object(obj, outcome.object_displacement, workspace)
        if step < n_regrasps:
            delta = random_regrasp(rng)
            grasp = apply_delta(grasp, delta, workspace)
    record = EpisodeRecord(
        episode_id="%s-%s-%s" % (collection_set, entry.object_id,
                                 "-".join(str(key) for key in seed_path[2:])),
        collection_set=collection_set,
        split=entry.split,
        scene=scene,
        grasps=grasps,
        success_labels=[bool(item['outcome']['success']) for item in grasps],
        timestamps=timestamps,
        seed_path=list(seed_path),
    )
    return record, episodes


@dataclass
class Collection:
    """ The filled DatasetWriter and the DatasetInfo to store with it.
    """
    writer: DatasetWriter
    info: DatasetInfo

    def records(self):
        """ Collected records, in collection order.
        """
        return EpisodeRecord.get_all(self.writer.store)

    def dataset(self):
        """ The collection as an in-memory Dataset.
        """
        return Dataset(self.records(), self.info,
                       self.writer.haptics_matrix())

    def write(self, dataset_path, haptics_path):
        """ Write the record file and the haptics sidecar.
        """
        self.writer.close(dataset_path, haptics_path, self.info)


def collect_dataset(catalog, config=None, seed=None):
    """Collect both sets over the training objects of 'catalog'.

    Every record draws from its own stream make_rng(seed, 2, set,
    object, grasp), so the result depends only on the seed, the
    catalog and the configuration.

    """
    config = config or RunConfig()
    seed = config.seed if seed is None else seed
    params = config.collection
    train = catalog.split('train')
    present = {entry.material for entry in train}
    missing = sorted(set(MATERIAL_LABELS) - present)
    if missing:
        raise ValidationError("catalog training split lacks materials %s"
                              % missing)
    sets = (
        ('set1', train[:params.set1_objects], params.set1_grasps,
         params.set1_regrasps),
        ('set2', material_cover(train, params.set2_objects),
         params.set2_grasps, params.set2_regrasps),
    )
    writer = DatasetWriter()
    interactions = 0
    for set_index, (name, entries, grasp_range, regrasp_range) in \
            enumerate(sets, start=1):
        for object_index, entry in enumerate(entries):
            count_rng = make_rng(seed, COLLECTION_STREAM, set_index,
                                 object_index)
            n_grasps = int(count_rng.integers(grasp_range[0],
                                              grasp_range[1] + 1))
            for grasp_index in range(n_grasps):
                n_regrasps = int(count_rng.integers(regrasp_range[0],
                                                    regrasp_range[1] + 1))
                seed_path = (COLLECTION_STREAM, set_index, object_index,
                             grasp_index)
                record, episodes = collect_record(entry, config, seed,
                                                  seed_path, n_regrasps, name)
                writer.append(record, episodes)
                interactions += len(episodes)
            LOGGER.info("%s: %d records on '%s'", name, n_grasps,
                        entry.object_id)
    info = DatasetInfo(seed=seed, config_digest=config.digest(),
                       catalog_digest=digest_json(catalog.to_dict()),
                       counts={'records': writer.count,
                               'interactions': interactions,
                               'regrasp_interactions':
                               interactions - writer.count})
    LOGGER.info("collected %d records, %d grasp interactions", writer.count,
                interactions)
    return Collection(writer, info)


def build_training_examples(dataset, bundle):
    """TrainingExample per executed grasp of every training record.

    H is the latent vector of grasp t; the executed bins are those of
    the correction that led to grasp t + 1 and the label is the
    success of grasp t + 1.  The last grasp of a record carries no
    correction and is used for stability training only.

    """
    records = dataset.split('train')
    episodes = [episode for record in records
                for episode in dataset.episodes(record)]
    latents = bundle.latents(episodes) if episodes else np.zeros((0, 0))
    examples = []
    row = 0
    for record in records:
        steps = record.steps()
        for index, (_, _, outcome) in enumerate(steps):
            executed = None
            label = int(outcome.success)
            if index + 1 < len(steps):
                executed = bin_encode(steps[index + 1][1])
                label = int(steps[index + 1][2].success)
            examples.append(TrainingExample(
                latent=latents[row],
                executed_bins=executed,
                label=label,
                material=record.scene['material'],
                stability_label=int(outcome.success),
                object_id=record.scene['object_id'],
                episode_id=record.episode_id,
            ))
            row += 1
    LOGGER.info("built %d training examples from %d records", len(examples),
                len(records))
    return examples
