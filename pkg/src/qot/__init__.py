"""Transportation cost and Lipschitz contraction diagnostics for quantum channels.

The package computes commutator Lipschitz seminorms on finite-dimensional
matrix algebras, the transportation cost and Lipschitz contraction
coefficient of channels with certificate-style (lower witness + upper bound)
reports, the entropy-contraction and mixing-time consequences of Lipschitz
contraction, and the exact combinatorial/geometric specializations on finite
groups and SU(2).
"""

from .ascent import AscentOptions
from .channel import (
    ConditionalExpectation,
    IndexReport,
    MatrixMap,
    QuantumChannel,
    amplify,
    channel_from_json,
    channel_from_spec,
    choi,
    compose,
    conditional_expectation,
    depolarizing_channel,
    identity_channel,
    index,
    is_cp_order,
    mix_channels,
    pauli_channel,
    replacer_channel,
    tensor_channel,
    unitary_channel,
)
from .contraction import (
    BkmOperator,
    bkm_dual_map,
    bkm_lambda2,
    build_bkm,
    contraction_via_states,
    entropy_contraction_sample,
    entropy_derivative,
    entropy_upper_check,
    f_p,
    fixed_state,
    gamma_sigma,
    gamma_sigma_inverse,
    lazy_channel,
    lip,
    loglip_sample,
    optimizer_residual,
    relative_entropy,
)
from .geometry import cc_distance_su2, random_su2, rep_lipschitz_seminorm, verify_cc_bound
from .groups import (
    FiniteGroupTable,
    WordLengthProfile,
    cyclic_group,
    dihedral_group,
    embed_commutative,
    group_cost_efix,
    group_from_json,
    group_from_spec,
    symmetric_group,
    translation_cost,
    word_lengths,
)
from .linalg import (
    EigenDecomposition,
    eig_hermitian,
    mat_exp,
    mat_log,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    partial_trace,
    pauli_decompose,
    tensor,
    trace_norm,
)
from .mixing import (
    CapExceededError,
    MixingReport,
    cost_mixing_time,
    lip_cost_bridge_check,
    return_time,
    trace_mixing_time,
)
from .report import CostReport
from .seminorm import (
    ResourceSet,
    SeminormSpec,
    commutant,
    dual_seminorm,
    gell_mann_resource,
    group_seminorm,
    joint_resource,
    pauli_resource,
    pauli_xy_resource,
    resource_from_json,
    resource_from_spec,
    su2_resource,
    seminorm,
)
from .transport import (
    cost,
    cost_via_states,
    evaluate_cost_ratio,
    expected_length,
    property_harness_cost,
    tensor_witness,
    wasserstein,
)

__version__ = "0.1.0"
