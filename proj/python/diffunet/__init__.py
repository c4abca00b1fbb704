"""Diffusion steepest descent for one-bit compressed sensing over sensor networks."""

from ._diffunet import *  # noqa: F401,F403
from ._diffunet import __doc__  # noqa: F401

__version__ = "0.1.0"
