"""Exact partition calculus: fusions, tree spaces, and layer homology."""

__version__ = "0.1.0"

from .errors import (
    CapExceededError,
    NotAFusionError,
    SupportMismatchError,
    ValidationError,
)
from .partitions import (
    Partition,
    SetMap,
    all_partitions,
    canonicalize,
    image_partition,
    join,
    make_partition,
    meet,
    refinement_poset,
)
from .fusion import (
    PartitionMorphism,
    decompose_elementary,
    goodness_via_graph,
    is_good,
    is_strict_fusion,
    strictness_via_h1,
)
from .category import (
    CategoryTable,
    automorphism_group,
    aut_order_formula,
    enumerate_en,
    filtration,
    strict_fusions,
    verify_essentially_cofibrant,
    verify_nice_filtration,
)
from .simplicial import (
    SimplicialMap,
    SimplicialObject,
    model_circle,
    model_from_json,
    model_interval,
    model_points,
    model_to_json,
    model_wedge_of_circles,
    nerve,
    power,
    product,
    quotient,
    smash,
    t_space,
    t_space_suspension_model,
)
from .homology import (
    ChainComplex,
    HomologyGroup,
    HomologyResult,
    betti_numbers,
    chain_complex,
    cover_acyclicity,
    homology,
    smith_normal_form,
)
from .powers import bad_diagonal_cells, fat_diagonal_cells, power_pair
from .layers import (
    CoendAssembly,
    StratumResult,
    coend,
    coend_over_filtration,
    derivative_report,
    stratum,
)
from .verify import run_checks

__all__ = [
    "CapExceededError",
    "CategoryTable",
    "ChainComplex",
    "CoendAssembly",
    "HomologyGroup",
    "HomologyResult",
    "NotAFusionError",
    "Partition",
    "PartitionMorphism",
    "SetMap",
    "SimplicialMap",
    "SimplicialObject",
    "StratumResult",
    "SupportMismatchError",
    "ValidationError",
    "all_partitions",
    "aut_order_formula",
    "automorphism_group",
    "bad_diagonal_cells",
    "betti_numbers",
    "canonicalize",
    "chain_complex",
    "coend",
    "coend_over_filtration",
    "cover_acyclicity",
    "decompose_elementary",
    "derivative_report",
    "enumerate_en",
    "fat_diagonal_cells",
    "filtration",
    "goodness_via_graph",
    "homology",
    "image_partition",
    "is_good",
    "is_strict_fusion",
    "join",
    "make_partition",
    "meet",
    "model_circle",
    "model_from_json",
    "model_interval",
    "model_points",
    "model_to_json",
    "model_wedge_of_circles",
    "nerve",
    "power",
    "power_pair",
    "product",
    "quotient",
    "refinement_poset",
    "run_checks",
    "smash",
    "smith_normal_form",
    "strict_fusions",
    "strictness_via_h1",
    "stratum",
    "t_space",
    "t_space_suspension_model",
    "verify_essentially_cofibrant",
    "verify_nice_filtration",
]
