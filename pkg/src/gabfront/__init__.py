"""Gabor phase-space analysis toolkit.

Short-time Fourier and Wigner transforms of analytic test distributions,
Gabor frames on separable lattices with canonical dual windows, wave front
set estimation by conic decay analysis of lattice coefficients, and exact
transport of singularities under quadratic Schrodinger flows.
"""

from .errors import (
    BadPartition,
    DegenerateFit,
    DomainError,
    GabfrontError,
    GridMismatch,
    InsufficientLattice,
    NearSingularTime,
    NoConvergence,
    NotAFrame,
    NotSymplectic,
    UnsupportedAtom,
)
from .tfcore import (
    Atom,
    Chirp,
    CustomWindow,
    Delta,
    Gaussian,
    Grid1D,
    PhaseGrid,
    PlaneWave,
    SampledSignal,
    Shifted,
    StandardGaussian,
    Sum,
    default_grid,
    default_phase_grid,
    dft,
    eval_atom,
    idft,
    stft_analytic,
    stft_numeric,
    wigner_numeric,
)
from .frames import (
    FrameReport,
    GaborCoefficients,
    LatticeSpec,
    default_lattice,
    dual_window,
    frame_bounds,
    frame_operator_apply,
    gabor_coefficients,
    modulation_norm,
    reconstruct,
)
from .wavefront import (
    ConicSector,
    DecayClass,
    DecayProfile,
    LpStat,
    SupStat,
    WaveFrontEstimate,
    classify_decay,
    compare_discrete_continuous,
    decay_profile,
    estimate_wavefront,
    sector_partition,
    transport_estimate,
)
from .quadflow import (
    FREE_PARTICLE,
    HARMONIC_OSCILLATOR,
    HamiltonianMatrix,
    PropagationReport,
    QuadraticHamiltonian,
    SymplecticMatrix,
    classical_flow,
    hamiltonian_matrix,
    propagate_free,
    propagate_harmonic,
    verify_propagation,
)

__version__ = "0.1.0"
