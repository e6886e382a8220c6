"""Generalized energy detection with a white-band noise reference."""

from ._gedsense import *  # noqa: F401,F403
from ._gedsense import __doc__  # noqa: F401

__version__ = "0.1.0"
