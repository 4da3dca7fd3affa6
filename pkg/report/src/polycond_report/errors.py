"""Exception hierarchy for the report renderer."""


class ReportError(Exception):
    """Base class for every error this package raises on purpose."""


class SchemaError(ReportError):
    """An artifact violates the CSV/sidecar contract; the message names
    the offending file and, for column problems, the column."""


class InputError(ReportError):
    """The input directory is unusable: missing, empty, or self-targeting."""
