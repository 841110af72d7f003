"""Particle scheme for one-dimensional aggregation-diffusion gradient flows."""

from ._core import *  # noqa: F401,F403
from ._core import InvalidInput, SingularConfiguration  # noqa: F401
