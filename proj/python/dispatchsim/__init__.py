"""Frequency-domain analysis of demand dispatch for grid regulation."""

from ._core import *  # noqa: F401,F403
from ._core import DispatchError, Design, StabilityVerdict  # noqa: F401

__version__ = "0.1.0"
