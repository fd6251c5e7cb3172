"""Regional fractional Laplacian toolkit."""

from ._rfrac import *  # noqa: F401,F403
from ._rfrac import __doc__  # noqa: F401

__version__ = "0.1.0"
