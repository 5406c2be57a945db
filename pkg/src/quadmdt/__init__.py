"""Mod-2 cycle calculus and MDT partition engine for quadrics in characteristic 2."""

from .chow import (
    Cycle,
    FactorSymbol,
    cycle_from_text,
    cycle_to_text,
    degree,
    external_product,
    mul,
    mul_factor,
    steenrod,
)
from .corr import (
    Correspondence,
    cap,
    compose,
    contains,
    derivative,
    diagonal_class,
    diagonal_mult,
    essential,
    reduce_f,
    reduce_g,
    reduction_correspondence,
    transpose,
)
from .errors import QuadmdtError
from .mdt import (
    RULES,
    LambdaSymbol,
    MdtPartition,
    Rule,
    RuleSet,
    ShellDiagram,
    ShellPattern,
    Violation,
    alpha_cycle,
    check_partition,
    enumerate_mdt,
    forced_connections,
    lambda_set,
    mdt_height_one,
    mdt_isotropic_lift,
    mdt_pfister_neighbour,
    mdt_strongly_excellent,
    render_ascii,
    render_svg,
    shell_diagram,
)
from .profile import (
    AlternatingExpansion,
    ExcellentPair,
    QuadricProfile,
    alternating_2adic,
    excellent_pairs,
    i1_admissible_set,
    i1_max_by_theorem,
    izhboldin_dim,
    mk_profile,
    pattern_enumerate,
    pfister_neighbour_invariants,
    strongly_excellent_profile,
)

__version__ = "0.1.0"

__all__ = [
    "AlternatingExpansion",
    "Correspondence",
    "Cycle",
    "ExcellentPair",
    "FactorSymbol",
    "LambdaSymbol",
    "MdtPartition",
    "QuadmdtError",
    "QuadricProfile",
    "RULES",
    "Rule",
    "RuleSet",
    "ShellDiagram",
    "ShellPattern",
    "Violation",
    "alpha_cycle",
    "alternating_2adic",
    "cap",
    "check_partition",
    "compose",
    "contains",
    "cycle_from_text",
    "cycle_to_text",
    "degree",
    "derivative",
    "diagonal_class",
    "diagonal_mult",
    "enumerate_mdt",
    "essential",
    "excellent_pairs",
    "external_product",
    "forced_connections",
    "i1_admissible_set",
    "i1_max_by_theorem",
    "izhboldin_dim",
    "lambda_set",
    "mdt_height_one",
    "mdt_isotropic_lift",
    "mdt_pfister_neighbour",
    "mdt_strongly_excellent",
    "mk_profile",
    "mul",
    "mul_factor",
    "pattern_enumerate",
    "pfister_neighbour_invariants",
    "reduce_f",
    "reduce_g",
    "reduction_correspondence",
    "render_ascii",
    "render_svg",
    "shell_diagram",
    "steenrod",
    "strongly_excellent_profile",
    "transpose",
]
