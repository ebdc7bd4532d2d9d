"""Simulation of the periodically driven PXP chain in the Rydberg-blockaded subspace."""

__version__ = "0.1.0"

from .basis import BlockadedBasis, enumerate_basis, fibonacci, index_of
from .estimators import FloquetSpectrum, RevivalLawRegressor
from .exceptions import (
    DecompositionError, FitError, FloquetPXPError, IntegrationError, InvalidStateError,
    NoArcError, SizeError,
)
from .floquet import (
    FloquetDecomposition, OverlapProfile, decompose, dominant_spacing, fold_quasi_energy,
    overlaps, revival_index,
)
from .operators import (
    DriveParams, SparseOperator, build_number_diagonal, build_pxp, build_site_operator,
)
from .propagation import (
    PropagatorMatrix, one_period_propagator, propagate, stroboscopic_fidelities,
    stroboscopic_orbit,
)
from .states import StateVector, fidelity, neel, polarized, product_state, theta_plus
from .sweep import (
    FitResult, SweepGrid, SweepResult, bessel_j0, fidelity_sweep, fit_nrev, min_revival_index,
    nrev_profile, track_peaks,
)
from .thermal import (
    BlochVector, ThermalizationTrace, bloch_vector, ergodic_z, instantaneous_distance,
    reduced_single_site, signal_std, thermalization_trace, time_averaged_distance,
)
