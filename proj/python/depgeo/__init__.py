from ._depgeo import *  # noqa: F401,F403
from ._depgeo import __doc__  # noqa: F401
