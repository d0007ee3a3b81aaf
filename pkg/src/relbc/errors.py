"""Shared exception types."""


class CapabilityError(RuntimeError):
    """An operation was requested beyond its enumeration / search cap."""


class FieldMismatchError(ValueError):
    """Values from two different field specifications were mixed."""
