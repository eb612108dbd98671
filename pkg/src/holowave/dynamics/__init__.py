"""Evolution equations, time stepping and paradifferential diagnostics."""

from .rhs import *  # noqa: F401,F403
from .diagnostics import *  # noqa: F401,F403
from .stepping import *  # noqa: F401,F403
