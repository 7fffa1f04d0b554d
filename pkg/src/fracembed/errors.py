class DataFormatError(Exception):
    """Input files or manifests that cannot be parsed or fail consistency checks."""


class NumericError(Exception):
    """Numerical failure: eigensolver breakdown or non-finite intermediate values."""
