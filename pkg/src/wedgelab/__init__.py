"""Euler elements, causal symmetric space wedges, standard subspaces and Hardy-space models."""

from .errors import (
    DomainError,
    NumericError,
    PreconditionError,
    SingularityError,
    UnsupportedError,
    WedgeLabError,
)

__version__ = "0.1.0"
