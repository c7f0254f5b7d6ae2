"""Error types shared across the package."""


class DataError(Exception):
    """Bad input data: malformed files, inconsistent rows, missing labels."""


class PipelineError(Exception):
    """A pipeline stage failed; the message carries the stage name and cause."""
