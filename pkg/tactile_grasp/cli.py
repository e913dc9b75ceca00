"""Command line interface: tactile-grasp

Every command reads one RunConfig (--config plus --set overrides),
resolves the artifact paths it names under --workspace-root, checks
the provenance of its inputs and writes its outputs with a manifest.

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
import argparse
import json
import logging
import os
import sys

from .config import Config, load_config
from .errors import (
    EXIT_CONFIG,
    EXIT_CONTAMINATION,
    EXIT_MISSING_ARTIFACT,
    EXIT_OK,
    EXIT_PROVENANCE,
    EXIT_TRAINING,
    EXIT_UNEXPECTED,
    EXIT_USAGE,
    EXIT_VALIDATION,
    TactileGraspError,
)
from .features.autoencoder import EncoderConfig, train_autoencoder
from .heads.training import train_policy, train_stability
from .pipeline.bundle import (
    ENCODER_FILE,
    POLICY_FILE,
    STABILITY_FILE,
    ModelBundle,
    load_bundle,
    load_encoder,
    save_encoder,
    save_head,
)
from .pipeline.collect import (
    build_training_examples,
    collect_dataset,
    dry_count,
)
from .pipeline.evaluate import (
    evaluate_gwos,
    evaluate_perception,
    evaluate_regrasping,
)
from .pipeline.provenance import check_artifact, write_manifest
from .pipeline.records import load_dataset
from .pipeline.reports import render_report, write_metrics
from .utils import clean_desc, make_rng
from .version import VERSION
from .world.catalog import gen_catalog, load_catalog, save_catalog

LOGGER = logging.getLogger(__name__)

AUTOENCODER_STREAM = 6
HEADS_STREAM = 7

EXIT_CODES_HELP = """\
exit codes:
  %d  success
  %d  unexpected error
  %d  usage error (bad flags or arguments)
  %d  configuration error
  %d  missing artifact
  %d  provenance or weight file error (digest or fingerprint mismatch)
  %d  validation error (invalid input, inconsistent data, failed replay)
  %d  training error (divergence, single class data, too few episodes)
  %d  train / test contamination

Errors are reported on one stderr line:
  error code=<n> kind=<ErrorClass> message="<reason>"
""" % (EXIT_OK, EXIT_UNEXPECTED, EXIT_USAGE, EXIT_CONFIG,
       EXIT_MISSING_ARTIFACT, EXIT_PROVENANCE, EXIT_VALIDATION,
       EXIT_TRAINING, EXIT_CONTAMINATION)


class Paths:
    """ Artifact locations of a run, resolved under the workspace root.
    """
    def __init__(self, root, config):
        params = config.paths
        self.root = root
        self.catalog = os.path.join(root, params.catalog)
        self.dataset = os.path.join(root, params.dataset)
        self.haptics = os.path.join(root, params.haptics)
        self.models = os.path.join(root, params.models)
        self.reports = os.path.join(root, params.reports)

    def model(self, filename):
        """ Path of a weight file in the models directory.
        """
        return os.path.join(self.models, filename)


def _digests(*manifests):
    return [manifest['artifact_sha256'] for manifest in manifests]


def _checked_catalog(paths):
    manifest = check_artifact(paths.catalog, 'catalog')
    return load_catalog(paths.catalog), manifest


def _checked_dataset(paths, catalog=None, catalog_manifest=None):
    parents = None
    if catalog_manifest is not None:
        parents = {'catalog': catalog_manifest['artifact_sha256']}
    manifest = check_artifact(paths.dataset, 'dataset', parents)
    return load_dataset(paths.dataset, paths.haptics, catalog), manifest


def _checked_models(paths, dataset_manifest, with_policy=True):
    encoder = check_artifact(paths.model(ENCODER_FILE), 'encoder',
                             {'dataset': dataset_manifest['artifact_sha256']})
    parents = {'encoder': encoder['artifact_sha256']}
    manifests = {'encoder': encoder,
                 'stability': check_artifact(paths.model(STABILITY_FILE),
                                             'stability_head', parents)}
    if with_policy:
        manifests['policy'] = check_artifact(paths.model(POLICY_FILE),
                                             'policy_head', parents)
    return manifests


# Every command takes (args, config, paths).
# pylint: disable=unused-argument
def cmd_gen_catalog(args, config, paths):
    """ Generate the object catalog.
    """
    catalog = gen_catalog(config, args.seed)
    os.makedirs(os.path.dirname(paths.catalog) or ".", exist_ok=True)
    save_catalog(catalog, paths.catalog)
    write_manifest(paths.catalog, 'catalog', config)
    print(paths.catalog)


def cmd_collect(args, config, paths):
    """ Collect the dataset (or print its expected size).
    """
    if args.dry_run:
        print(json.dumps(dry_count(config.collection), sort_keys=True))
        return
    catalog, catalog_manifest = _checked_catalog(paths)
    collection = collect_dataset(catalog, config)
    os.makedirs(os.path.dirname(paths.dataset) or ".", exist_ok=True)
    collection.write(paths.dataset, paths.haptics)
    write_manifest(paths.dataset, 'dataset', config,
                   {'catalog': catalog_manifest['artifact_sha256']},
                   {'counts': collection.info.counts})
    print(json.dumps(collection.info.counts, sort_keys=True))


def cmd_train_ae(args, config, paths):
    """ Train the autoencoder on the training split of the dataset.
    """
    catalog, catalog_manifest = _checked_catalog(paths)
    dataset, dataset_manifest = _checked_dataset(paths, catalog,
                                                 catalog_manifest)
    episodes = [episode for record in dataset.split('train')
                for episode in dataset.episodes(record)]
    training = train_autoencoder(episodes, EncoderConfig.from_config(config),
                                 make_rng(config.seed, AUTOENCODER_STREAM))
    parents = {'dataset': dataset_manifest['artifact_sha256']}
    path = save_encoder(training.model, paths.models,
                        {'config_digest': config.digest()})
    write_manifest(path, 'encoder', config, parents)
    write_metrics(paths.reports, 'autoencoder',
                  {'curve': training.curve,
                   'baseline_loss': training.baseline_loss,
                   'n_train': len(training.train_index),
                   'n_validation': len(training.validation_index)},
                  config, parents)
    print(path)


def cmd_train_heads(args, config, paths):
    """ Train the stability head and the re-grasp policy.
    """
    catalog, catalog_manifest = _checked_catalog(paths)
    dataset, dataset_manifest = _checked_dataset(paths, catalog,
                                                 catalog_manifest)
    encoder_manifest = check_artifact(
        paths.model(ENCODER_FILE), 'encoder',
        {'dataset': dataset_manifest['artifact_sha256']})
    bundle = load_bundle_encoder_only(paths, config)
    examples = build_training_examples(dataset, bundle)
    stability = train_stability(examples, config,
                                make_rng(config.seed, HEADS_STREAM, 0))
    policy = train_policy(examples, config,
                          make_rng(config.seed, HEADS_STREAM, 1))
    parents = {'encoder': encoder_manifest['artifact_sha256']}
    for model, filename, kind in ((stability.model, STABILITY_FILE,
                                   'stability_head'),
                                  (policy.model, POLICY_FILE, 'policy_head')):
        path = save_head(model, paths.models, filename, bundle.encoder,
                         {'config_digest': config.digest()})
        write_manifest(path, kind, config, parents)
    write_metrics(paths.reports, 'heads',
                  {'stability': stability.metrics,
                   'stability_curve': stability.curve,
                   'policy': policy.metrics,
                   'policy_curve': policy.curve},
                  config, parents)
    print(paths.models)


def load_bundle_encoder_only(paths, config):
    """ ModelBundle holding just the encoder (heads not trained yet).
    """
    encoder, encoder_config = load_encoder(paths.models, config)
    return ModelBundle(encoder, encoder_config)


def cmd_eval_perception(args, config, paths):
    """ Material and stability grids for every feature and classifier.
    """
    catalog, catalog_manifest = _checked_catalog(paths)
    dataset, dataset_manifest = _checked_dataset(paths, catalog,
                                                 catalog_manifest)
    manifests = _checked_models(paths, dataset_manifest, with_policy=False)
    bundle = load_bundle(paths.models, config, with_policy=False)
    grid = evaluate_perception(dataset, bundle, config)
    write_metrics(paths.reports, 'perception', grid, config,
                  {'dataset': dataset_manifest['artifact_sha256'],
                   'encoder': manifests['encoder']['artifact_sha256']})
    print(paths.reports)


def cmd_eval_grasping(args, config, paths):
    """ Re-grasping and full controller evaluations.
    """
    catalog, catalog_manifest = _checked_catalog(paths)
    dataset, dataset_manifest = _checked_dataset(paths, catalog,
                                                 catalog_manifest)
    manifests = _checked_models(paths, dataset_manifest)
    bundle = load_bundle(paths.models, config)
    training_objects = {record.scene['object_id']
                        for record in dataset.split('train')}
    parents = dict(zip(('catalog', 'encoder', 'stability', 'policy'),
                       _digests(catalog_manifest, manifests['encoder'],
                                manifests['stability'],
                                manifests['policy'])))
    if args.protocol in ('regrasping', 'all'):
        evaluation = evaluate_regrasping(catalog, bundle, config,
                                         training_objects)
        write_metrics(paths.reports, 'regrasping', evaluation.to_dict(),
                      config, parents)
    if args.protocol in ('gwos', 'all'):
        evaluation = evaluate_gwos(catalog, bundle, config, training_objects,
                                   empty=args.empty)
        write_metrics(paths.reports, 'gwos', evaluation.to_dict(), config,
                      parents)
    print(paths.reports)


def cmd_report(args, config, paths):
    """ Render tables and the summary from stored metrics.
    """
    for path in render_report(paths.reports):
        print(path)


COMMANDS = {
    'gen-catalog': cmd_gen_catalog,
    'collect': cmd_collect,
    'train-ae': cmd_train_ae,
    'train-heads': cmd_train_heads,
    'eval-perception': cmd_eval_perception,
    'eval-grasping': cmd_eval_grasping,
    'report': cmd_report,
}


def build_parser():
    """ The argparse parser of tactile-grasp.
    """
    parser = argparse.ArgumentParser(
        prog='tactile-grasp',
        description="Tactile grasping simulator: catalog generation, "
                    "dataset collection, training and evaluation.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('--workspace-root', default=".",
                        help="directory every configured path is relative "
                             "to (default: current directory)")
    parser.add_argument('--config', default=None,
                        help="JSON run configuration (default: built-in "
                             "defaults)")
    parser.add_argument('--set', dest='overrides', action='append',
                        default=[], metavar='KEY=VALUE',
                        help="override a configuration value, e.g. "
                             "heads.policy_lr=1e-3 (repeatable)")
    parser.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help="logging level (default: "
                             "$TACTILE_GRASP_LOG_LEVEL or WARNING)")
    parser.add_argument('--version', action='version', version=VERSION)
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    sub = subparsers.add_parser(
        'gen-catalog', help=clean_desc(cmd_gen_catalog.__doc__))
    sub.add_argument('--seed', type=int, default=None,
                     help="catalog seed (default: the config seed)")
    sub = subparsers.add_parser('collect',
                                help=clean_desc(cmd_collect.__doc__))
    sub.add_argument('--dry-run', action='store_true',
                     help="print the expected counts without simulating")
    subparsers.add_parser('train-ae', help=clean_desc(cmd_train_ae.__doc__))
    subparsers.add_parser('train-heads',
                          help=clean_desc(cmd_train_heads.__doc__))
    subparsers.add_parser('eval-perception',
                          help=clean_desc(cmd_eval_perception.__doc__))
    sub = subparsers.add_parser('eval-grasping',
                                help=clean_desc(cmd_eval_grasping.__doc__))
    sub.add_argument('--protocol', default='all',
                     choices=['regrasping', 'gwos', 'all'],
                     help="which evaluation to run (default: all)")
    sub.add_argument('--empty', action='store_true',
                     help="remove the object from every controller scene")
    subparsers.add_parser('report', help=clean_desc(cmd_report.__doc__))
    return parser


def format_error(err):
    """ Single machine readable line describing 'err'.
    """
    if isinstance(err, TactileGraspError):
        code, message = err.exit_code, err.reason
    else:
        code, message = EXIT_UNEXPECTED, str(err)
    message = str(message).replace('\\', '\\\\').replace('"', '\\"')
    message = message.replace('\n', ' ')
    return 'error code=%d kind=%s message="%s"' % (code,
                                                   type(err).__name__,
                                                   message)


def main(argv=None):
    """ Entry point of the tactile-grasp console script.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level or Config.TACTILE_GRASP_LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config, args.overrides)
        paths = Paths(args.workspace_root, config)
        COMMANDS[args.command](args, config, paths)
    except TactileGraspError as err:
        sys.stderr.write(format_error(err) + "\n")
        return err.exit_code
    except Exception as err:  # pylint: disable=broad-except
        LOGGER.debug("unexpected error", exc_info=True)
        sys.stderr.write(format_error(err) + "\n")
        return EXIT_UNEXPECTED
    return EXIT_OK


if __name__ == '__main__':  # pragma no cover
    sys.exit(main())
