""" Exception hierarchy for tactile_grasp

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

# Exit codes used by the command line interface.  Documented in
# 'tactile-grasp --help'.
EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_MISSING_ARTIFACT = 4
EXIT_PROVENANCE = 5
EXIT_VALIDATION = 6
EXIT_TRAINING = 7
EXIT_CONTAMINATION = 8


class TactileGraspError(Exception):
    """Base class for all errors raised by tactile_grasp.  The 'reason'
    is the single line of text reported to users.

    """
    exit_code = EXIT_UNEXPECTED

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class ConfigError(TactileGraspError, ValueError):
    """ A run configuration failed validation.
    """
    exit_code = EXIT_CONFIG


class ValidationError(TactileGraspError, ValueError):
    """Some input (catalog entry, polygon, grasp, dataset record) violates
    an invariant.  The reason names the invariant.

    """
    exit_code = EXIT_VALIDATION


class ArgumentError(TactileGraspError, ValueError):
    """ A caller passed an argument outside an operation's domain.
    """
    exit_code = EXIT_VALIDATION


class ShapeError(TactileGraspError, ValueError):
    """ Array shapes are not compatible for a tensor operation.
    """
    exit_code = EXIT_VALIDATION

    def __init__(self, operation, *shapes):
        reason = "%s: incompatible shapes %s" % (
            operation, " vs ".join(str(tuple(shape)) for shape in shapes)
        )
        super().__init__(reason)
        self.shapes = shapes


class ConsistencyError(TactileGraspError, ValueError):
    """ A grasp outcome does not agree with the request made from it.
    """
    exit_code = EXIT_VALIDATION


class FilterStateError(TactileGraspError, RuntimeError):
    """ A particle filter operation was asked of an unusable state.
    """
    exit_code = EXIT_VALIDATION


class TrainingError(TactileGraspError, RuntimeError):
    """ Training cannot proceed (divergence, degenerate data, ...).
    """
    exit_code = EXIT_TRAINING


class StratificationError(TrainingError):
    """ A class is missing from one side of a train / test split.
    """


class InsufficientDataError(TrainingError):
    """ Fewer examples than the operation requires.
    """


class WeightsError(TactileGraspError):
    """ Base class for weight file problems.
    """
    exit_code = EXIT_PROVENANCE


class WeightsVersionError(WeightsError):
    """ The weight file was written with an unsupported format_version.
    """


class FingerprintError(WeightsError):
    """ An architecture fingerprint does not match what was expected.
    """


class CorruptWeightsError(WeightsError):
    """ The weight file is truncated or otherwise unreadable.
    """


class ArtifactMissingError(TactileGraspError, FileNotFoundError):
    """ An artifact required by a command does not exist.
    """
    exit_code = EXIT_MISSING_ARTIFACT


class ProvenanceError(TactileGraspError):
    """An artifact's recorded digest chain does not match what is on
    disk (tampering, stale inputs, mixed configurations).

    """
    exit_code = EXIT_PROVENANCE


class ContaminationError(TactileGraspError):
    """ A held-out object shows up in training data.
    """
    exit_code = EXIT_CONTAMINATION


class ReplayMismatchError(TactileGraspError):
    """ Offline replay of a grasping trace made a different decision.
    """
    exit_code = EXIT_VALIDATION
