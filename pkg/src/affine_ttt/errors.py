"""Shared exception types."""


class AffineTTTError(Exception):
    """Base class for all package errors."""


class NotPrimePower(AffineTTTError):
    """Field order is not a prime power."""


class OutOfRange(AffineTTTError):
    """Index or parameter outside its documented range."""


class InvalidArgs(AffineTTTError):
    """Arguments are structurally invalid (wrong dimension, bad spec)."""


class BoardTooLarge(AffineTTTError):
    """q**m exceeds the configured enumeration limit."""


class IllegalMove(AffineTTTError):
    """Move targets an occupied cell, a finished game, or a bad index."""


class NoLegalMove(AffineTTTError):
    """A strategy was asked to move on a full or finished board."""


class ResourceExhausted(AffineTTTError):
    """Search exceeded its node or time budget."""

    def __init__(self, message, nodes=None, elapsed_ms=None):
        super().__init__(message)
        self.nodes = nodes
        self.elapsed_ms = elapsed_ms


class WrongCharacteristic(AffineTTTError):
    """Operation requires a specific field characteristic (usually q = 2)."""


class Undefined(AffineTTTError):
    """Requested quantity is undefined for these parameters."""


class InternalInconsistency(AffineTTTError):
    """An internal cross-check failed; indicates a bug, not user error."""
