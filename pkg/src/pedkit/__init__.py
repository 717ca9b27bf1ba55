"""Partial entropy decomposition of small discrete systems.

Decomposes the multivariate entropy of exact finite pmfs into atoms on the
antichain redundancy lattice using the pointwise common-surprisal measure,
and derives information decompositions, the mechanistic/source redundancy
split, and pure mutual information from the atoms.
"""

__version__ = "0.1.0"

from .corpus import ExampleSpec, UnknownExampleError, list_examples, make_example, sweep
from .decomposition import (
    ATOM_NAMES,
    FULL_PED,
    MONO_PED,
    ORDER_SIGNATURES,
    PURE_MI,
    CheckRow,
    OrderSummary,
    PedResult,
    PidResult,
    combination_check,
    compute_ped,
    identity_axiom_check,
    marginalization_check,
    mech_source_split,
    merge_variables,
    mi_identities,
    order_summary,
    permute_variables,
    pid_full,
    pid_mono,
    pure_mi,
    pure_mi_chain_check,
    pure_mi_pid,
    with_copy_target,
)
from .dist import (
    JointDistribution,
    SourceSet,
    SourceTupleDistribution,
    entropy,
    format_distribution_text,
    load_distribution_file,
    local_coinformation,
    marginalize,
    mutual_information,
    parse_distribution_text,
    project_to_sources,
    surprisal,
)
from .errors import (
    DistributionFormatError,
    InvalidDistributionError,
    InvalidSourceError,
    IpfConvergenceError,
    LatticeError,
    PedkitError,
    UndefinedSurprisalError,
)
from .lattice import (
    EntropyLattice,
    LatticeNode,
    enumerate_nodes,
    lattice_structure,
    moebius_invert,
    node_leq,
    parse_node,
)
from .maxent import (
    IPF_MAX_CYCLES,
    IPF_TOL,
    IpfReport,
    PairwiseConstraintSet,
    pairwise_marginal_error,
    pairwise_maxent,
)
from .redundancy import (
    RedundancyEvaluation,
    canonicalize_sources,
    h_cs,
    positive_negative_split,
)
