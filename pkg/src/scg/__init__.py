"""Small-cancellation toolkit for relator families over free groups."""

__version__ = "0.1.0"
