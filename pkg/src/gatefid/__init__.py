"""Gate fidelity of quantum channels.

Exact fidelity quantities, dimension-only variance and concentration
bounds, seeded Monte-Carlo probes, epsilon-net minimum estimation, and the
constructive demonstration that distinct non-depolarizing channels can
share one gate fidelity function.
"""

from .channels import (
    ChoiMatrix,
    CptpReport,
    QuantumChannel,
    adjoint,
    amplitude_damping,
    apply_channel,
    channel_from_kraus,
    channels_close,
    choi_from_kraus,
    compose,
    depolarizing,
    identity_channel,
    kraus_from_choi,
    phase_spread_unitary,
    random_channel,
    reduce_to_lambda,
    unitary_channel,
    unitary_operator_basis,
    validate_cptp,
)
from .fidelity import (
    CONCENTRATION_C,
    LIPSCHITZ_CONSTANT,
    FidelityBoundSet,
    average_gate_fidelity,
    depolarizing_gate_fidelity,
    gate_fidelity_batch,
    gate_fidelity_pure,
    l2_distance_to_depolarizing,
    phase_min_distance,
    state_fidelity,
    variance_bounds,
)
from .linalg import (
    EigDecomposition,
    antisym_projector,
    hermitian_eig,
    partial_trace,
    partial_transpose,
    schatten_norm,
    swap_matrix,
    sym_projector,
    tensor,
    unvec,
    vec,
)
from .minimum import (
    MinEstimate,
    NetCoverageError,
    StateNet,
    build_net,
    effective_epsilon,
    effective_minimum,
    net_minimum,
    reference_minimum,
)
from .nonuniq import (
    GOperator,
    NonUniqPair,
    PairVerification,
    build_g_operator,
    depolarizing_distance,
    fidelity_equality_conditions,
    max_epsilon,
    perturb_channel,
    verify_pair,
)
from .sampling import (
    DEFAULT_SEED,
    LEVY_C1,
    ConcentrationBound,
    FidelityStats,
    RngSpec,
    convergence_report,
    empirical_deviation_fraction,
    fidelity_samples,
    haar_random_state,
    haar_states,
    levy_bound,
    mc_fidelity_stats,
)

__version__ = "0.1.0"
