"""Behavioral Vernier delay-line TDC simulator.

All times are integer femtoseconds; seeds are unsigned 64-bit integers.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
