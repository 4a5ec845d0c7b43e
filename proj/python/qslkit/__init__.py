from . import _core
from ._core import *  # noqa: F401,F403

__version__ = _core.__version__
