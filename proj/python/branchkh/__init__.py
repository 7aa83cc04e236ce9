from ._branchkh import *  # noqa: F401,F403
from ._branchkh import __doc__  # noqa: F401
