"""Zero-curvature eigenstates of infinite wells with delta-function spikes."""
__version__ = "0.1.0"

from .analysis import (EnergyBreakdown, MomentumMoments, MomentumSample, kinetic_expectation,
                       momentum_density, momentum_moments, momentum_wavefunction,
                       potential_expectation)
from .asymwell import (AsymmetricWell, EnergyLevel, Regime, region_probabilities, solve_levels,
                       solve_zc_chi, solve_zc_V0, tuned_well, zc_wave)
from .core import Boundary, Knot, PiecewiseLinearWave, UnitSystem, WellDomain, eval_wave, normalize
from .designer import (DeltaArrayPotential, DeltaSpike, FeasibilityReport, ZcDesign,
                       critical_strengths, discretize_smooth, triangle_design, triangle_strength,
                       twin_designs, validate_bc)
from .errors import *  # noqa: F401,F403
from .oracle import (Grid, SpectralReport, build_hamiltonian, isospectral_check,
                     lowest_eigenpairs, verify_design, verify_potential)
from .susy import IsospectralPair, PartnerPotential, isospectral_pair, partner_potential, superpotential
