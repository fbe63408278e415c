"""Exceptions shared across the package."""


class CapExceeded(RuntimeError):
    """A computation would exceed a configured size cap (horizon, subset
    count, enumeration budget).  Distinct from ValueError so the CLI can
    map it to its own exit code."""
