class PlotkitError(Exception):
    """Base class for everything ptplot raises on purpose."""


class SchemaError(PlotkitError):
    """Input CSV does not match the declared schema for the figure kind."""
