"""Shared exception types."""


class DataError(Exception):
    """Bad input data: malformed manifest, synonym file, or segment."""


class QueryError(Exception):
    """Unparseable or unexecutable query (maps to HTTP 400)."""
