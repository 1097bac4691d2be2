"""Leonard pair parameter arrays over exact fields.

``lpkit.sweep`` is the sweep module; run a sweep with ``lpkit.sweep.sweep``.
"""

from .array import *  # noqa: F401,F403
from .families import *  # noqa: F401,F403
from .fields import *  # noqa: F401,F403
from .matrices import *  # noqa: F401,F403
from .sweep import FAMILIES, Sample, SweepConfig, SweepSummary, iter_samples  # noqa: F401
from .theorems import *  # noqa: F401,F403

__version__ = "0.1.0"
