"""Metrics files and report tables

Evaluation commands store their metrics as canonical JSON files with a
provenance manifest.  The report renders tab separated tables and a
plain text summary from those files alone; a metrics file that no
longer matches its manifest stops the report with a ProvenanceError.

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
import json
import logging
import os

from ..errors import ArtifactMissingError
from ..utils import canonical_json
from .provenance import check_artifact, write_manifest

LOGGER = logging.getLogger(__name__)

METRICS_FILES = {
    'perception': "perception.json",
    'regrasping': "regrasping.json",
    'gwos': "gwos.json",
    'autoencoder': "autoencoder.json",
    'heads': "heads.json",
}

GRASPING_COLUMNS = ('arm', 'test_set', 'successes', 'trials', 'accuracy',
                    'ci_low', 'ci_high', 'mean_grasps')


def metrics_path(reports_dir, kind):
    """ Location of the metrics file of 'kind'.
    """
    return os.path.join(reports_dir, METRICS_FILES[kind])


def write_metrics(reports_dir, kind, data, config, parents=None):
    """ Store 'data' as the metrics of 'kind' with its manifest.
    """
    os.makedirs(reports_dir, exist_ok=True)
    path = metrics_path(reports_dir, kind)
    tmp_path = path + ".tmp"
    with open(tmp_path, 'w', encoding='utf-8', newline='\n') as outfile:
        outfile.write(canonical_json(data))
        outfile.write('\n')
    os.replace(tmp_path, path)
    write_manifest(path, "metrics:%s" % kind, config, parents)
    LOGGER.info("wrote %s metrics to '%s'", kind, path)
    return path


def load_metrics(reports_dir, kind):
    """ Verified metrics of 'kind'.
    """
    path = metrics_path(reports_dir, kind)
    check_artifact(path, "metrics:%s" % kind)
    with open(path, 'r', encoding='utf-8') as infile:
        return json.load(infile)


def _write_tsv(path, header, rows):
    with open(path, 'w', encoding='utf-8', newline='') as outfile:
        writer = csv.writer(outfile, delimiter='\t', lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    return path


def _cell(value):
    if isinstance(value, float):
        return "%.4f" % value
    return value


def perception_tables(perception, reports_dir):
    """Feature x classifier grids for material recognition (average
    class accuracy) and stability estimation (accuracy), plus the
    normalized material confusion matrix of every cell.

    """
    written = []
    for task, key in (('material', 'average_class_accuracy'),
                      ('stability', 'accuracy')):
        grid = perception[task]
        kinds = sorted({kind for cells in grid.values() for kind in cells})
        rows = [[feature] + [grid[feature].get(kind, {}).get(key, '')
                             for kind in kinds]
                for feature in grid]
        written.append(_write_tsv(
            os.path.join(reports_dir, "table_%s.tsv" % task),
            ['features'] + kinds, rows))
    for feature, cells in perception['material'].items():
        for kind, metrics in cells.items():
            labels = metrics['labels']
            rows = [[label] + values for label, values in
                    zip(labels, metrics['confusion_normalized'])]
            written.append(_write_tsv(
                os.path.join(reports_dir, "confusion_material_%s_%s.tsv"
                             % (feature, kind)),
                ['truth'] + labels, rows))
    return written


def grasping_table(evaluation, reports_dir, name):
    """ Accuracy table of a grasping evaluation.
    """
    rows = [[row[column] for column in GRASPING_COLUMNS]
            for row in evaluation['table']]
    return _write_tsv(os.path.join(reports_dir, "table_%s.tsv" % name),
                      list(GRASPING_COLUMNS), rows)


def _summary_lines(loaded):
    lines = []
    autoencoder = loaded.get('autoencoder')
    if autoencoder:
        final = autoencoder['curve'][-1]
        lines.append("Autoencoder: train loss %.4f, validation loss %.4f, "
                     "constant baseline %.4f"
                     % (final['train_loss'], final['validation_loss'],
                        autoencoder['baseline_loss']))
    heads = loaded.get('heads')
    if heads:
        lines.append("Stability head: held-out accuracy %.4f (majority %.4f)"
                     % (heads['stability']['accuracy'],
                        heads['stability']['majority_rate']))
        lines.append("Re-grasp policy: %d examples, final loss %s"
                     % (heads['policy']['n_train'],
                        heads['policy']['final_loss']))
    perception = loaded.get('perception')
    if perception:
        lines.append("Material recognition (average class accuracy)")
        for feature, cells in perception['material'].items():
            for kind, metrics in cells.items():
                lines.append("  %-12s %-13s %.4f (chance %.4f)"
                             % (feature, kind,
                                metrics['average_class_accuracy'],
                                metrics['chance']))
        lines.append("Grasp stability estimation (accuracy)")
        for feature, cells in perception['stability'].items():
            for kind, metrics in cells.items():
                lines.append("  %-12s %-13s %.4f (majority %.4f)"
                             % (feature, kind, metrics['accuracy'],
                                metrics['majority_rate']))
    for name, title in (('regrasping', "Re-grasping, oracle location"),
                        ('gwos', "Full controller")):
        evaluation = loaded.get(name)
        if not evaluation:
            continue
        lines.append(title)
        for row in evaluation['table']:
            lines.append("  %-22s %-4s %4d/%-4d %.4f [%.4f, %.4f]"
                         % (row['arm'], row['test_set'], row['successes'],
                            row['trials'], row['accuracy'], row['ci_low'],
                            row['ci_high']))
    return lines


def render_report(reports_dir):
    """Render every table whose metrics exist in 'reports_dir' and a
    summary.txt.  Raises ArtifactMissingError when there are no metrics
    at all.  Returns the written paths.

    """
    loaded = {}
    for kind in METRICS_FILES:
        if os.path.exists(metrics_path(reports_dir, kind)):
            loaded[kind] = load_metrics(reports_dir, kind)
    if not loaded:
        raise ArtifactMissingError("no metrics found in '%s'" % reports_dir)
    written = []
    if 'perception' in loaded:
        written.extend(perception_tables(loaded['perception'], reports_dir))
    for name in ('regrasping', 'gwos'):
        if name in loaded:
            written.append(grasping_table(loaded[name], reports_dir, name))
    summary = os.path.join(reports_dir, "summary.txt")
    with open(summary, 'w', encoding='utf-8', newline='\n') as outfile:
        outfile.write("\n".join(_summary_lines(loaded)))
        outfile.write("\n")
    written.append(summary)
    LOGGER.info("rendered %d report files in '%s'", len(written),
                reports_dir)
    return written
