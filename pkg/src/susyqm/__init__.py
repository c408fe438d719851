"""Numerical laboratory for N=2 supersymmetric quantum mechanics.

Partner Hamiltonians factorized from a superpotential on a finite-difference
grid, their shared spectra and intertwined eigenstates, spin-times-mode
entanglement of supercharge eigenstates, and the hidden SUSY structure of the
resonant Jaynes-Cummings model.
"""

from .entanglement import (
    EntanglementReport,
    SpinorState,
    SuperchargeEigenstates,
    analyze,
    apply_q1,
    apply_q2,
    build_energy_eigenstate,
    concurrence_from_spin,
    concurrence_overlap,
    concurrence_svd,
    schmidt_coefficients,
    schmidt_svd_oracle,
    spin_expectation,
    supercharge_eigenstates,
    supercharge_residual,
)
from .errors import (
    ConfigError,
    DegeneracyError,
    GridMismatchError,
    IndeterminateSignError,
    PhysicsViolationError,
    SignConditionError,
    SusyQMError,
    ZeroNormError,
)
from .grid import (
    Grid,
    Wavefunction,
    fix_phase,
    inner_product,
    make_grid,
    norm,
    normalize,
    wavefunction_to_csv,
)
from .jaynescummings import (
    FockSpace,
    JCAlgebraReport,
    JCLevelRow,
    JCMatchReport,
    JCSystem,
    analytic_eigenstate,
    analytic_ground_energy,
    analytic_spectrum,
    build_jc,
    numeric_vs_analytic,
    verify_susy_algebra,
)
from .operators import (
    SusySystem,
    build_annihilator,
    build_supercharges,
    build_susy_hamiltonian,
    build_susy_system,
    check_sign_condition,
    matrix_to_csv,
    witten_parity,
)
from .spectral import (
    EPS0,
    DegeneracyReport,
    EigenPair,
    LevelPair,
    align_phase,
    eigen_residual,
    intertwine_down,
    intertwine_up,
    operator_norm,
    pair_partner_levels,
    solve_spectrum,
    zero_mode,
    zero_mode_profile_overlap,
)
from .superpotentials import REGISTRY_NAMES, Superpotential, get_superpotential

__version__ = "0.1.0"

__all__ = [
    "EPS0",
    "REGISTRY_NAMES",
    "ConfigError",
    "DegeneracyError",
    "DegeneracyReport",
    "EigenPair",
    "EntanglementReport",
    "FockSpace",
    "Grid",
    "GridMismatchError",
    "IndeterminateSignError",
    "JCAlgebraReport",
    "JCLevelRow",
    "JCMatchReport",
    "JCSystem",
    "LevelPair",
    "PhysicsViolationError",
    "SignConditionError",
    "SpinorState",
    "SuperchargeEigenstates",
    "Superpotential",
    "SusyQMError",
    "SusySystem",
    "Wavefunction",
    "ZeroNormError",
    "align_phase",
    "analytic_eigenstate",
    "analytic_ground_energy",
    "analytic_spectrum",
    "analyze",
    "apply_q1",
    "apply_q2",
    "build_annihilator",
    "build_energy_eigenstate",
    "build_jc",
    "build_supercharges",
    "build_susy_hamiltonian",
    "build_susy_system",
    "check_sign_condition",
    "concurrence_from_spin",
    "concurrence_overlap",
    "concurrence_svd",
    "eigen_residual",
    "fix_phase",
    "get_superpotential",
    "inner_product",
    "intertwine_down",
    "intertwine_up",
    "make_grid",
    "matrix_to_csv",
    "norm",
    "normalize",
    "numeric_vs_analytic",
    "operator_norm",
    "pair_partner_levels",
    "schmidt_coefficients",
    "schmidt_svd_oracle",
    "solve_spectrum",
    "spin_expectation",
    "supercharge_eigenstates",
    "supercharge_residual",
    "verify_susy_algebra",
    "wavefunction_to_csv",
    "witten_parity",
    "zero_mode",
    "zero_mode_profile_overlap",
]
