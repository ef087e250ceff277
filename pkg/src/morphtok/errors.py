"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """Bad user-supplied data or arguments; maps to CLI exit code 1."""


class FormatError(InputError):
    """A data file does not match its declared on-disk format."""


class MergeOverflowError(RuntimeError):
    """The merge fixed point exceeded its iteration guard."""
