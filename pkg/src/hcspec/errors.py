"""Shared exception base for the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised by hcspec modules."""
