"""Finite generating partitions for finite measure-preserving group actions."""

from .action import (
    FiniteAction,
    GroupElement,
    Partition,
    enumerate_group,
    invariant_refinement,
    is_ergodic,
    is_generating,
    is_generating_pairwise,
    join,
    orbits,
    shannon_entropy,
    symmetric,
    translate_partition,
)
from .coding import Code, assign_code, average_length, kraft_sum, krieger_lengths
from .rearrange import PartialBijection, check_clauses, exhaust, q_step
from .synth import (
    build_towers,
    choose_C,
    decode,
    label_points,
    relabel,
    synthesize,
)

__all__ = [
    "FiniteAction", "GroupElement", "Partition", "enumerate_group", "invariant_refinement",
    "is_ergodic", "is_generating", "is_generating_pairwise", "join", "orbits",
    "shannon_entropy", "symmetric", "translate_partition", "Code", "assign_code",
    "average_length", "kraft_sum", "krieger_lengths", "PartialBijection", "check_clauses",
    "exhaust", "q_step", "build_towers", "choose_C", "decode", "label_points", "relabel",
    "synthesize",
]
