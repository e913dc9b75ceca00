"""
Tests for dataset records, provenance manifests and model bundles

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

import numpy as np
import pytest

from tactile_grasp.errors import (
    ArtifactMissingError,
    ContaminationError,
    FingerprintError,
    ProvenanceError,
    ValidationError,
)
from tactile_grasp.pipeline import (
    DatasetInfo,
    DatasetWriter,
    EpisodeRecord,
    POLICY_FILE,
    STABILITY_FILE,
    check_artifact,
    check_disjoint,
    collect_record,
    load_bundle,
    load_dataset,
    manifest_path,
    read_manifest,
    save_encoder,
    save_head,
    write_manifest,
)
from tactile_grasp.pipeline.bundle import load_head
from tactile_grasp.pipeline.records import DATASET_FORMAT_VERSION

from .conftest import make_bundle, small_catalog


def _record(catalog, config, object_id='train_0', n_regrasps=1, key=0):
    entry = catalog.by_id(object_id)
    return collect_record(entry, config, config.seed, (2, 1, 0, key),
                          n_regrasps, 'set1')


def _written_dataset(tmp_path, catalog, config):
    writer = DatasetWriter()
    for key, object_id in enumerate(('train_0', 'train_3')):
        record, episodes = _record(catalog, config, object_id, 1 + key, key)
        writer.append(record, episodes)
    dataset_path = str(tmp_path / "dataset.jsonl")
    haptics_path = str(tmp_path / "haptics.npy")
    writer.close(dataset_path, haptics_path, DatasetInfo(seed=config.seed))
    return dataset_path, haptics_path


def test_collect_record_shape(catalog, config):
    """A record holds one grasp per execution, labels matching the
    outcomes and a seed path.

    """
    record, episodes = _record(catalog, config, n_regrasps=2)
    assert len(record.grasps) == len(episodes) == 3
    assert record.grasps[0]['delta'] is None
    assert all(item['delta'] is not None for item in record.grasps[1:])
    assert record.success_labels == [item['outcome']['success']
                                     for item in record.grasps]
    assert record.timestamps[0] == 0.0
    assert record.timestamps[1] == episodes[0].duration_s
    assert record.seed_path == [2, 1, 0, 0]
    assert record.scene['object_id'] == 'train_0'
    assert record.episode_id == 'set1-train_0-0-0'


def test_collect_record_is_deterministic(catalog, config):
    """ Equal seed paths give equal records and haptics.
    """
    first, first_episodes = _record(catalog, config)
    second, second_episodes = _record(catalog, config)
    assert first.to_dict() == second.to_dict()
    for one, other in zip(first_episodes, second_episodes):
        assert np.array_equal(one.frames, other.frames)
    third, _ = _record(catalog, config, key=1)
    assert third.to_dict() != first.to_dict()


def test_dataset_round_trip(tmp_path, catalog, config):
    """ Records and haptic episodes survive the file round trip.
    """
    writer = DatasetWriter()
    record, episodes = _record(catalog, config, n_regrasps=2)
    writer.append(record, episodes)
    dataset_path = str(tmp_path / "dataset.jsonl")
    haptics_path = str(tmp_path / "haptics.npy")
    writer.close(dataset_path, haptics_path, DatasetInfo(seed=config.seed))
    dataset = load_dataset(dataset_path, haptics_path, catalog)
    assert len(dataset.records) == 1
    loaded = dataset.records[0]
    assert loaded.to_dict() == record.to_dict()
    assert dataset.info.haptics_rows == sum(len(e) for e in episodes)
    for index, episode in enumerate(dataset.episodes(loaded)):
        assert np.array_equal(episode.frames, episodes[index].frames)
        assert episode.close_event_index == episodes[index].close_event_index
        assert episode.mode == episodes[index].mode
    assert dataset.split('train') == dataset.records
    assert dataset.split('test') == []


def test_dataset_sequence_order(tmp_path, catalog, config):
    """ Records come back in append order with their sequence numbers.
    """
    dataset_path, haptics_path = _written_dataset(tmp_path, catalog, config)
    dataset = load_dataset(dataset_path, haptics_path)
    assert [record.sequence for record in dataset.records] == [0, 1]
    assert [len(record.grasps) for record in dataset.records] == [2, 3]
    assert dataset.records[1].grasps[0]['haptics']['row_offset'] == sum(
        item['haptics']['n_frames'] for item in dataset.records[0].grasps)


def test_dataset_missing_and_tampered(tmp_path, catalog, config):
    """Missing files and a sidecar that no longer matches its digest
    are refused.

    """
    dataset_path, haptics_path = _written_dataset(tmp_path, catalog, config)
    with pytest.raises(ArtifactMissingError):
        load_dataset(str(tmp_path / "nothing.jsonl"), haptics_path)
    matrix = np.load(haptics_path)
    matrix[0, 0] += 1.0
    np.save(haptics_path, matrix)
    with pytest.raises(ValidationError, match="digest"):
        load_dataset(dataset_path, haptics_path)
    np.save(haptics_path, matrix[:-1])
    with pytest.raises(ValidationError, match="does not match"):
        load_dataset(dataset_path, haptics_path)


def test_record_validation(catalog, config):
    """ Inconsistent records are refused before they are stored.
    """
    record, episodes = _record(catalog, config)
    writer = DatasetWriter()
    with pytest.raises(ValidationError, match="one haptic episode"):
        writer.append(record, episodes[:1])
    record.success_labels = [not label for label in record.success_labels]
    with pytest.raises(ValidationError, match="labels"):
        writer.append(record, episodes)
    record, episodes = _record(catalog, config)
    record.split = 'test'
    with pytest.raises(ValidationError, match="split"):
        writer.append(record, episodes)
    record.format_version = DATASET_FORMAT_VERSION + 1
    with pytest.raises(ValidationError, match="format_version"):
        record.validate()


def test_check_disjoint(catalog, config):
    """Records whose object the catalog holds out for testing are
    contamination.

    """
    record, _ = _record(catalog, config)
    check_disjoint([record], catalog)
    record.scene = dict(record.scene, object_id='test_box')
    with pytest.raises(ContaminationError, match="test_box"):
        check_disjoint([record], catalog)
    other = EpisodeRecord(episode_id='x', split='test',
                          scene={'object_id': 'train_1', 'split': 'test'})
    with pytest.raises(ContaminationError, match="train_1"):
        check_disjoint([other], catalog)


def test_manifest_round_trip(tmp_path, config):
    """ A manifest records the artifact digest, kind and parents.
    """
    path = tmp_path / "artifact.json"
    path.write_text('{"a": 1}\n', encoding='utf-8')
    manifest = write_manifest(str(path), 'catalog', config,
                              {'parent': 'abc'})
    assert manifest_path(str(path)).endswith(".manifest.json")
    assert read_manifest(str(path)) == manifest
    assert manifest['config_digest'] == config.digest()
    assert check_artifact(str(path), 'catalog', {'parent': 'abc'}) == manifest


def test_manifest_mismatches(tmp_path, config):
    """ Changed artifacts, kinds and parents raise ProvenanceError.
    """
    path = tmp_path / "artifact.json"
    path.write_text('{"a": 1}\n', encoding='utf-8')
    write_manifest(str(path), 'catalog', config, {'parent': 'abc'})
    with pytest.raises(ProvenanceError, match="expected 'dataset'"):
        check_artifact(str(path), 'dataset')
    with pytest.raises(ProvenanceError, match="parent"):
        check_artifact(str(path), parents={'parent': 'def'})
    path.write_text('{"a": 2}\n', encoding='utf-8')
    with pytest.raises(ProvenanceError, match="digest"):
        check_artifact(str(path))
    with open(manifest_path(str(path)), 'w', encoding='utf-8') as outfile:
        outfile.write("{not json")
    with pytest.raises(ProvenanceError, match="not valid JSON"):
        read_manifest(str(path))


def test_manifest_missing(tmp_path):
    """ Missing artifacts and manifests are ArtifactMissingError.
    """
    path = tmp_path / "artifact.json"
    with pytest.raises(ArtifactMissingError):
        read_manifest(str(path))
    path.write_text("{}", encoding='utf-8')
    with pytest.raises(ArtifactMissingError, match="manifest"):
        read_manifest(str(path))


def test_bundle_round_trip(tmp_path, config):
    """ A saved bundle loads back with identical outputs.
    """
    bundle = make_bundle(config, stability_logit=1.5,
                         policy_bins=(0, 1, 3, 4))
    models = str(tmp_path / "models")
    save_encoder(bundle.encoder, models)
    save_head(bundle.stability, models, STABILITY_FILE, bundle.encoder)
    save_head(bundle.policy, models, POLICY_FILE, bundle.encoder)
    loaded = load_bundle(models, config)
    latent = np.linspace(-1.0, 1.0, bundle.encoder_config.latent_dim)
    assert loaded.stability_probability(latent) == \
        bundle.stability_probability(latent)
    assert np.array_equal(loaded.policy.predict(latent[None]),
                          bundle.policy.predict(latent[None]))
    assert loaded.encoder.fingerprint() == bundle.encoder.fingerprint()
    assert loaded.encoder_config.steps == bundle.encoder_config.steps
    assert load_bundle(models, config, with_policy=False).policy is None


def test_head_needs_its_encoder(tmp_path, config):
    """Heads saved against one encoder are refused with another one,
    and missing files are reported.

    """
    bundle = make_bundle(config)
    other = make_bundle(config, seed=4)
    models = str(tmp_path / "models")
    save_head(bundle.stability, models, STABILITY_FILE, bundle.encoder)
    with pytest.raises(FingerprintError):
        load_head(models, STABILITY_FILE, other.encoder)
    with pytest.raises(ArtifactMissingError):
        load_head(models, POLICY_FILE, bundle.encoder)
    with pytest.raises(ArtifactMissingError):
        load_bundle(models, config)


def test_dataset_info_line(tmp_path, catalog, config):
    """ The info record is the last line of the record file.
    """
    dataset_path, _ = _written_dataset(tmp_path, catalog, config)
    with open(dataset_path, encoding='utf-8') as infile:
        lines = [line for line in infile.read().splitlines() if line]
    assert len(lines) == 3
    assert "haptics_sha256" in lines[-1]
    assert json.loads(lines[0])


def test_small_catalog_splits():
    """ The shared catalog keeps two held-out objects.
    """
    catalog = small_catalog()
    assert [entry.object_id for entry in catalog.split('test')] == \
        ['test_box', 'test_prism']
