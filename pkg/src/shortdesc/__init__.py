"""Explicit bipartite graph constructions, greedy online matching, and
short candidate-description lists, all verifiable at desk scale."""

from .bases import BaseSpec, auto_base, build_base, derive_seed
from .combinators import FoldSpec, clone_double, compose, disjoint_union, fold
from .construct import (
    BaseOptions,
    LayeredGraph,
    build_composed_disperser,
    build_disperser,
    build_expander,
    build_matching_graph,
    load_graph_text,
    parse_layered,
    serialize_layered,
)
from .errors import (
    CapacityError,
    ConfigError,
    ConstructionError,
    DomainError,
    DuplicateArrivalError,
    MatchingFailureError,
    ParameterError,
)
from .graphs import (
    BiGraph,
    LeftDomain,
    bit_strings,
    complete_graph,
    from_table,
    materialize,
    neighbor_set,
    neighbors,
    parse_graph,
    serialize_graph,
    star_graph,
)
from .machines import (
    ToyMachine,
    complexity,
    complexity_cond,
    complexity_table,
    default_machine,
    programs,
    run,
    run_cond,
)
from .matcher import Matcher, new_matcher, replay, run_adversaries_exhaustive, run_adversaries_random
from .shortlist import (
    ConditionalDovetail,
    DovetailMap,
    IdentityEntry,
    LevelEntry,
    build_dovetail,
    conditional_description,
    decode_entry,
    level_graphs,
    list_for,
    list_size,
    locate_description,
    reconstruct,
    serialize_dovetail,
    verify_shortlist,
)
from .verify import (
    CheckReport,
    GameResult,
    check_disperser,
    check_expander,
    online_matchable,
    right_size_lower_bound,
)

__version__ = "0.1.0"
