"""Baker-Norine ranks, their Mobius weights, and modular extensions on Z^n.

Lattice points are plain tuples of ints.  Axis and vertex indices in the
public API are 1-based (``shift(f, 1)`` shifts along the first coordinate),
matching the usual mathematical convention; everything else is ordinary
Python.
"""

from rrweights.lattice import (
    DimensionError,
    LatticeFunction,
    MissingMetadataError,
    ProbeResult,
    WeightTable,
    Window,
    WindowIncompleteError,
    accumulate_at,
    degree,
    e_indicator,
    is_modular_on,
    leq,
    mobius_at,
    mobius_factored,
    probe_riemann,
    shift,
    weight_table,
)
from rrweights.graphs import (
    GraphError,
    Multigraph,
    bn_rank,
    canonical_divisor,
    check_riemann_roch,
    genus,
    is_equivalent,
    is_winnable,
    laplacian,
    pic_representatives,
    q_reduce,
    rank_function,
)
from rrweights.complete import (
    BCoord,
    double_diff_indicator,
    from_b_coord,
    kn_rank,
    kn_rank_loop,
    kn_weight,
    pic_add,
    pic_sub,
    rank_drop_indicator,
    to_a_rep,
    to_b_coord,
    weight_collapse,
)

__version__ = "0.1.0"

__all__ = [
    "BCoord",
    "DimensionError",
    "GraphError",
    "LatticeFunction",
    "MissingMetadataError",
    "Multigraph",
    "ProbeResult",
    "WeightTable",
    "Window",
    "WindowIncompleteError",
    "accumulate_at",
    "bn_rank",
    "canonical_divisor",
    "check_riemann_roch",
    "degree",
    "double_diff_indicator",
    "e_indicator",
    "from_b_coord",
    "genus",
    "is_equivalent",
    "is_modular_on",
    "is_winnable",
    "kn_rank",
    "kn_rank_loop",
    "kn_weight",
    "laplacian",
    "leq",
    "mobius_at",
    "mobius_factored",
    "pic_add",
    "pic_representatives",
    "pic_sub",
    "probe_riemann",
    "q_reduce",
    "rank_drop_indicator",
    "rank_function",
    "shift",
    "to_a_rep",
    "to_b_coord",
    "weight_collapse",
    "weight_table",
]
