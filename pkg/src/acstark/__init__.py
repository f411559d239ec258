"""Phase-controlled gain and dispersion on the ac-Stark-allowed transition of a Lambda system."""
from .analytic import (
    DressedPair,
    dressed_detuning,
    dressed_states,
    generalized_rabi,
    rho_ab_bare,
    rho_ab_dressed,
    rho_ab_weak,
    rho_ac_bare,
    rho_ac_dressed,
    rho_ac_weak,
)
from .dynamics import Peak, Spectrum, Trajectory, evolve, find_peaks, spectral_lines, spectrum
from .model import SystemParams, build_hamiltonian, build_liouvillian, validate_params
from .scan import Grid1D, ScanTable, map_phase_detuning, strong_probe_suite, sweep_detuning
from .steady import SteadyStateResult, coherence, populations, residual, steady_state

__version__ = "0.1.0"
