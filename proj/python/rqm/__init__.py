from ._rqm import *  # noqa: F401,F403
from ._rqm import __version__  # noqa: F401
