"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto distinct exit codes (config 2, validation 3,
alignment 4), so keep the split between "the data is malformed" and
"the two inputs do not line up".
"""


class SoftEvalError(Exception):
    """Base class for all softeval errors."""


class ValidationError(SoftEvalError, ValueError):
    """Malformed input: out-of-range values, duplicates, bad file format."""


class AlignmentError(SoftEvalError):
    """Prediction and reference inputs do not line up (items, classes, lengths)."""


class ConfigError(SoftEvalError, ValueError):
    """Invalid option or parameter combination."""


class NoScorableClassesError(ValidationError):
    """Every class was excluded by the degenerate-class rule; macro F is undefined."""
