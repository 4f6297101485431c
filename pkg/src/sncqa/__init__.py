"""Exchange-symmetric vs hardware-efficient VQE benchmarks on J1-J2 lattices."""

from .ansatz import (
    ParamCircuit,
    PheaConfig,
    SnCQAConfig,
    build_phea,
    build_sncqa,
    count_resources,
    decompose_to_primitives,
    prepare_sector_init,
    prepare_singlet_init,
)
from .hamiltonian import (
    HeisenbergHamiltonian,
    build_hamiltonian,
    exact_ground_energy,
    expectation,
    total_spin_sq_expectation,
    total_sz_expectation,
)
from .lattice import Lattice, LatticeSpec, build_lattice, snake_ordering
from .sectors import irrep_dim, scaling_ratio, schur_weyl_check
from .simulator import (
    GateOp,
    RngStream,
    StateVector,
    adjoint_gradient,
    evaluate_circuit,
    parameter_shift_gradient,
    sampled_energy,
    zero_state,
)
from .vqe import (
    BenchmarkCase,
    OptimizerConfig,
    RunRecord,
    benchmark_suite,
    chain_hamiltonian,
    convergence_iteration,
    vqe_run,
)

__version__ = "0.1.0"
