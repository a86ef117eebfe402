"""Simulation and verification toolkit for Hilbert-space-valued
volatility-modulated fields."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
