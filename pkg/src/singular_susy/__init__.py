"""Supersymmetric quantum mechanics with a point singularity.

Classification of U(2) point interactions on the line and the interval by
the supersymmetry they admit, closed-form supercharges, secular-equation
spectra, and numerical verification of every claimed property.
"""

from .errors import (
    GeometryMismatchError,
    NotDiagonalError,
    NotNormalizableError,
    NotUnitaryError,
    OutOfDomainError,
    ParseError,
    SingularSusyError,
    ThetaPiError,
)
from .matkit import (
    IDENTITY,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    circular_distance,
    conjugate,
    diagonalize_u2,
    euler_angles_of,
    is_unitary,
    pauli_combination,
    pauli_vector,
    random_unitary_2x2,
    su2_from_euler,
)
from .system import (
    BoundaryData,
    Geometry,
    LengthScale,
    SystemSpec,
    WaveFunction,
    boundary_data,
    connection_residual,
    derivative,
    derivative_rep,
    evaluate,
    half_parity,
    inverse_robin_length,
    l2_norm,
    normalize,
    robin_length,
    robin_matrix,
    theta_for_scale,
    wall_residual,
    wf_inner,
)
from .spectra import (
    DecoupledRoots,
    Level,
    Spectrum,
    oracle_decoupled_roots,
    secular_matrix,
    solve_interval_spectrum,
    solve_line_bound_states,
)
from .classify import (
    SuperchargeSpec,
    SusyClassification,
    admits_susy_at_point,
    annihilates,
    build_supercharge,
    classify_interval,
    classify_line,
    classify_system,
    half_parity_system,
    point_condition_residual,
)
from .verify import (
    CheckResult,
    VerificationReport,
    apply_supercharge,
    boundary_form,
    check_algebra,
    check_degeneracy_pairing,
    check_domain_preservation,
    check_lower_bound,
    deficiency_indices,
    run_verification,
    susy_boundary_form,
    witten_parity_search,
)

__version__ = "0.1.0"
