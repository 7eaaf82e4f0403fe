"""Symbol correspondences for spin systems.

Exact Clebsch-Gordan algebra, families of characteristic numbers, the
twisted product of symbols, localization of projector symbols, and the
quantization of J3-invariant functions.
"""

from .correspondence_catalog import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .exact_spin_algebra import *  # noqa: F401,F403
from .ground_space import *  # noqa: F401,F403
from .localization_lab import *  # noqa: F401,F403
from .quantization import *  # noqa: F401,F403
from .series import *  # noqa: F401,F403
from .symbol_calculus import *  # noqa: F401,F403

__version__ = "0.1.0"
