"""Ground states of nonlocal Schroedinger operators -m u + a * u on Q_p^n,
and recurrence of the random walk with jump density a."""

from .padic_core import GridSpec, PadicApprox, padic_norm, valuation
from .radial_fourier import (DualProfile, PowerTail, RadialProfile,
                             fourier_radial, normalize, power_law_profile,
                             shell_character_integral)
from .recurrence import (Classification, classify, green_series,
                         return_probabilities, return_probability_exact)
from .spectral_solver import (GroundState, NoGroundStateDetected, Potential,
                              SolverTolerances, find_ground_state,
                              green_kernel, q_matrix, spectral_radius)
from .walk_sim import WalkConfig, recurrence_estimate, simulate_walk

__version__ = "0.1.0"
