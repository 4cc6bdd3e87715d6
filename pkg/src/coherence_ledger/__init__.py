"""Work and clock resources of quantum coherence.

Internal coherence (between product-basis states of equal total energy) is
convertible to single-shot work; external coherence (between different
total energies) makes a system a quantum clock.  This package computes both
resources for composite noninteracting systems, verifies the trade-off
bounds between them, and covers the transverse-field Ising chain through
its free-fermion quasiparticle picture.
"""

from .clock import (
    ClockReport,
    catalyst_ladder_qfi,
    clock_report,
    coherent_gibbs_qfi_identity,
    covariant_channel,
    monotonicity_audit,
    producibility_witness,
    pure_qfi_from_levels,
    qfi,
    skew_information,
    variance,
)
from .divergence import (
    AlphaScan,
    asymmetry_entropy,
    asymmetry_modes,
    classical_renyi,
    free_energy,
    free_energy_correlation,
    kl_divergence,
    pure_state_work_criterion,
    renyi_divergence,
    thermomajorization_curve,
    thermomajorizes,
    w_coh,
    w_incoh,
    w_tot,
    work_distance,
)
from .ising import (
    IsingChain,
    degeneracy_histogram,
    dispersion,
    ed_oracle,
    effective_quasiparticle_system,
    ising_qfi_bounds,
    ising_tradeoff,
    sector_spectrum,
)
from .linalg import HermitianEigensystem, dagger, eigh, mat_pow, tensor, trace
from .model import (
    BlockStructure,
    CompositeSystem,
    EnergyWindows,
    GibbsData,
    build_blocks,
    energy_windows,
    gibbs,
    qubit_system,
)
from .states import (
    ClassicalEnergyData,
    QuantumState,
    classical_data,
    coherent_gibbs,
    dense,
    dephase_blocks,
    dephase_full,
    dicke,
    ghz,
    make_state,
    reduced_state,
    supplemental_rho,
    supplemental_sigma,
    tensor_power,
    two_qubit_psi,
    uniform_superposition,
)
from .tradeoff import (
    TradeoffEntry,
    TradeoffReport,
    binary_entropy,
    bound_sweep,
    degeneracy_bound,
    energy_window_tradeoff,
    general_tradeoff_bound,
    hoeffding_frequency_bound,
    log_binomial,
    proof_chain,
    qubit_binary_entropy_bound,
    tight_binomial_bound,
    tradeoff_report,
    two_qubit_linear_bound,
    verify_binomial_inequality,
)

__version__ = "0.1.0"
