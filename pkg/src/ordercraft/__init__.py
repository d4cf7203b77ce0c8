"""Finite-scale workbench for partial orders, barriers and coverability."""

from .barriers import (
    BarrierSeq,
    Classification,
    Constancy,
    FiniteBarrier,
    barrier_cube,
    barrier_square,
    choice_refine,
    classify_sequence,
    connect,
    constant_on_barrier,
    decode_block,
    dichotomy,
    encode_block,
    homogeneous_subbarrier,
    make_uniform_barrier,
    rado_bad_array,
    shift_extends,
    shift_pairs,
    split_square_block,
    successive_sequence,
)
from .constructions import (
    DownSet,
    Seq,
    SequenceOrder,
    disjoint_union,
    dominates,
    domination_class,
    domination_order,
    downset_lattice,
    embeds,
    f_map,
    gamma_index,
    lex_sum,
    pad_phi,
    power,
    product,
    rado_leq,
    rado_truncation,
    seq_downset,
    seq_embed_order,
)
from .coverability import (
    Transition,
    UpwardBasis,
    Vass,
    Verdict,
    backward_cover,
    forward_oracle,
    pre_basis,
    reduce_basis,
)
from .dress_schiffels import (
    DsFamily,
    DsVector,
    antilex_oracle,
    antilex_relation,
    delta,
    ds_fragment,
    ds_leq,
    singleton_sum_iso,
)
from .errors import *  # noqa: F401,F403
from .poset import (
    ElementSequence,
    Poset,
    PosetMap,
    antichain,
    build_poset,
    chain,
    cones,
    find_good_pair,
    is_augmentation,
    is_order_generating,
    is_order_preserving,
    is_surjective,
    maximals,
    minimals,
    restrict,
    reverse,
    width,
)
from .structure import (
    Decomposition,
    antichain_rank,
    check_decomposition,
    cone_sum,
    decompose,
    spine_of,
)

__version__ = "0.1.0"
