"""Hyperspectral to multispectral band adaptation."""

from ._hsadapt import *  # noqa: F401,F403
from ._hsadapt import HsadaptError, __version__  # noqa: F401
