"""Twisted pre-Lie and NAP structures on finite connected posets and topologies.

Structures are stored as bitmask quasi-orders (:class:`Topology`); linear
combinations of isomorphism classes are exact :class:`FormalSum` objects keyed
by canonical :class:`ClassKey` values.
"""

from .canon import (
    UNIT,
    ClassKey,
    automorphisms,
    canonical_form,
    class_key,
    grafting_orbit_index,
    grafting_orbit_partitions,
    isomorphism,
    j_index,
    pair,
    pairing,
    sigma,
)
from .enumeration import (
    connected_keys,
    connected_topology_keys,
    counts_report,
    enumerate_posets,
    enumerate_topologies,
    primitive_classes,
    primitive_counts,
)
from .linear import FormalSum, Subspace, TensorSum, kernel_basis, tensor
from .operations import (
    branches,
    bracket_lin,
    ck_coproduct,
    compatibility_check,
    duality_check,
    filtration_grade,
    jacobi_check,
    lie_bracket,
    nap_alg_check,
    nap_coassoc_check,
    nap_coproduct,
    nap_coproduct_down,
    nap_lin,
    nap_product,
    nap_product_up,
    prelie,
    prelie_check,
    prelie_lin,
    prelie_up,
    searrow_coproduct,
)
from .structures import (
    EMPTY,
    POINT,
    OrderError,
    Poset,
    Topology,
    antichain,
    bags_and_quotient,
    chain,
    connected_components,
    graft_at,
    hasse,
    induced,
    is_connected,
    max_set,
    min_set,
    order_reverse,
    poset,
    topology,
    upper_ideals,
)
from .topological import (
    quotient_group_orders,
    top_branches,
    top_compat_check,
    top_duality_check,
    top_nap_coassoc_check,
    top_nap_coproduct,
)
from .trees import RootedTree, decorated_tree_counts, freeness_check, rooted_tree_counts, tree_graft, tree_nap_coproduct
from .verification import VerificationReport, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
