"""Product-formula workbench: build splittings of partitioned Hamiltonians,
measure their exact energy-estimation error spectroscopically, and predict it
from the nested-commutator expansion of the step generator."""

from .bench import (
    ClaimReport,
    FitResult,
    SweepConfig,
    SweepRow,
    fit_slope,
    read_sweep_csv,
    reproduce_figures,
    run_sweep,
    verify_claim,
    write_family_csv,
    write_sweep_csv,
)
from .designer import (
    BranchOutOfRange,
    NoRealSolution,
    SolverSolution,
    family_scan,
    solve_w2,
    w2_condition_residuals,
)
from .expansion import (
    ConditionReport,
    ExponentExpansion,
    check_w2_conditions,
    expand_exponent,
    exponent_matrix,
    magnus_h1,
    predicted_delta_e,
)
from .formulas import (
    ProductFormula,
    compose,
    custom_w2,
    lie_trotter,
    parse_formula,
    reverse,
    step_matrix,
    strang,
    suzuki4,
)
from .hamiltonians import (
    HamTerm,
    PartitionedHamiltonian,
    PauliString,
    build_random_two_term,
    build_xy_lattice,
    hamiltonian_digest,
    load_hamiltonian_file,
    pauli_dense,
    term_dense,
    total_dense,
)
from .linalg import (
    EigenphaseAliasingError,
    EigSystem,
    commutator,
    eig_hermitian,
    expm_i,
    logm_unitary,
    nested_commutator,
    spectral_norm,
)
from .spectro import (
    AmbiguousMatchError,
    DegenerateTargetError,
    Eigenpair,
    SpectroReport,
    delta_e_exact,
    exact_eigenpair,
    first_order_shift,
    overlap_deficiency,
    spectral_error,
)

__version__ = "0.1.0"
