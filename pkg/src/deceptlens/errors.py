"""Exception types shared across the pipeline."""


class DataError(ValueError):
    """Invalid input data: malformed files, bad labels, empty text, size mismatches."""


class ModelFormatError(DataError):
    """A model file is truncated, malformed, or has an unsupported schema version."""
