"""Exception types raised across the pipeline.

Every error is a subclass of PipelineError so callers can catch the whole
family; the CLI maps subfamilies onto stable exit codes.
"""


class PipelineError(Exception):
    """Base class for all tendonsense errors."""


class EmptyInputError(PipelineError, ValueError):
    """An operation received an empty sequence where data is required."""


class InconsistentFeaturesError(PipelineError, ValueError):
    """Feature vectors in one dataset do not share a single name ordering."""


class IndexOutOfRangeError(PipelineError, IndexError):
    """A row or feature index lies outside the dataset."""


class UnknownLabelError(PipelineError, KeyError):
    """A class label is not present where it was requested."""


class OutOfPlateError(PipelineError, ValueError):
    """A palpation coordinate lies outside the plate."""


class ConfigError(PipelineError, ValueError):
    """A simulation spec or config violates its invariants."""


class TraceTooShortError(PipelineError, ValueError):
    """A trace has fewer samples than the requested window needs."""

    def __init__(self, required: int, actual: int, trial_id: str = ""):
        where = f"record {trial_id!r}: " if trial_id else ""
        super().__init__(
            f"{where}trace too short: need {required} samples, have {actual}"
        )
        self.required = required
        self.actual = actual
        self.trial_id = trial_id


class StaticPhaseTooShortError(PipelineError, ValueError):
    """Phase segmentation left too few samples between peak and release."""


class TooFewPointsError(PipelineError, ValueError):
    """Regression needs at least two points."""


class DimensionMismatchError(PipelineError, ValueError):
    """A query vector's length differs from the model's feature count."""


class SingleClassError(PipelineError, ValueError):
    """Training data contains fewer than two classes."""


class NonFiniteError(PipelineError, ValueError):
    """NaN or infinity encountered in numeric input."""


class TooFewPerClassError(PipelineError, ValueError):
    """A class has fewer rows than the number of folds."""


class LengthMismatchError(PipelineError, ValueError):
    """Two parallel sequences have different lengths."""


class MixedTasksError(PipelineError, ValueError):
    """A corpus mixes texture and stiffness records (or FC and AC modes)."""


class FormatError(PipelineError, ValueError):
    """A file does not parse as the expected corpus/feature/report format."""
