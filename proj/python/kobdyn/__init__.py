"""Kobayashi-geometry iteration toolkit.

Python facade over the C++ core: domains, Kobayashi distance and geodesics,
horofunctions, holomorphic self-maps, dynamical classification and backward
orbits with bounded Kobayashi step.
"""

from ._kobdyn import *  # noqa: F401,F403
from ._kobdyn import __version__  # noqa: F401
