"""Normal-form symbol catalog, quadratic corrections and modified energies."""

from .symbols import *  # noqa: F401,F403
from .energies import *  # noqa: F401,F403
from .symbols import __all__ as _s
from .energies import __all__ as _e

__all__ = list(_s) + list(_e)
