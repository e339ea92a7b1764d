"""Cox-Thompson inverse scattering at fixed energy.

General, semi-analytic (single-parity) and parity-split approximate
inversions of phase shifts into potentials, plus a Numerov forward solver
used to check every reconstruction.
"""

from .core import (
    ConditioningError,
    CoxThompsonError,
    DegeneracyError,
    ParityError,
    PhaseShiftSet,
    PoleError,
    SolveReport,
)
from .generalct import combine_spin_orbit, solve_approximate, solve_general
from .newton import NewtonOptions
from .pipeline import Inversion, invert
from .semianalytic import solve_parity

__all__ = [
    "ConditioningError",
    "CoxThompsonError",
    "DegeneracyError",
    "Inversion",
    "NewtonOptions",
    "ParityError",
    "PhaseShiftSet",
    "PoleError",
    "SolveReport",
    "combine_spin_orbit",
    "invert",
    "solve_approximate",
    "solve_general",
    "solve_parity",
]

__version__ = "0.1.0"
