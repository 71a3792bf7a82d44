"""Recurrent prediction-update filtering for 2D trajectories."""

from ._pucycle import *  # noqa: F401,F403
from ._pucycle import __version__  # noqa: F401
