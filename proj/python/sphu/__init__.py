"""Variances and uncertainty products of zonal spherical wavelets."""

from ._core import *  # noqa: F401,F403
from ._core import NumericalError, ValidationError  # noqa: F401

__version__ = "0.1.0"
