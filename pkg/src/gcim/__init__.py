"""Exact-simulation workbench for the ADAPT-GCIM family of eigensolvers."""

from .adapt import (
    ADAPT_GCIM,
    ADAPT_GCIM_MN,
    ADAPT_VQE,
    ADAPT_VQE_GCIM,
    ADAPT_VQE_GCIM_1,
    ALGORITHMS,
    AdaptConfig,
    AdaptTrace,
    gcim_energy_gradient,
    pool_gradients,
    run_adapt_gcim,
    run_adapt_gcim_mn,
    run_adapt_vqe,
    run_adapt_vqe_gcim,
    run_adapt_vqe_gcim_one_shot,
    run_algorithm,
    select_operator,
    ucc_translate,
    uccsd_recipe,
    vqe_minimize,
)
from .fcidump import SpatialIntegrals, assemble_hamiltonian, dumps_fcidump, parse_fcidump
from .fermion import FermionHamiltonian, FermionOperator, SpinOrbitalMap, jordan_wigner
from .pauli import (
    PauliString,
    PauliSum,
    jw_to_matrix,
    parse_pauli_json,
    pauli_mul,
    pauli_sum_to_json,
    simplify,
)
from .pool import PoolOperator, build_pool, pool_gradient_operator, pool_to_json
from .resources import ansatz_cnot_total, cnot_count, measurement_estimate
from .shots import (
    EntryEstimator,
    ShotConfig,
    allocate_shots_is,
    chebyshev_shots,
    exact_decomposition,
    hf_filter,
    mc_experiment,
    perturb_matrices,
    sample_entry,
)
from .statevector import (
    ExactSpectrum,
    StateVector,
    apply_paulisum,
    exact_spectrum,
    exp_apply,
    expectation,
    hf_state,
    overlap,
)
from .subspace import (
    BasisRecipe,
    GevpResult,
    SubspaceBasis,
    build_matrices,
    excitation_energies,
    orthogonalize_basis,
    overlap_deficit,
    reconstruct_state,
    solve_gevp,
)
from .toy import toy_integrals, toy_system

__version__ = "0.1.0"
