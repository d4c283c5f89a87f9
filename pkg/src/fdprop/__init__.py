"""fdprop: an event-driven finite-domain constraint propagation engine.

Domains are integer intervals with optional bit-vector holes; constraint
propagators are suspended agents woken by instantiation, bound-update,
and inner-exclusion events; search is trail-based depth-first labeling.
"""

from .alldistinct import AllDistinctPosting, Strategy, post_alldistinct, outof_reducer
from .domain import (
    DomainDelta,
    DomainError,
    DeltaKind,
    FiniteDomain,
    exclude_value,
    intersect_range,
    is_subset_of,
    make_interval,
    make_set,
)
from .linear import (
    BinaryLinear,
    CapacityError,
    ConsistencyLevel,
    Diseq,
    NaryLinear,
    ceil_div,
    floor_div,
    post_binary,
    post_diseq,
    post_nary_forward,
    post_nary_hybrid,
    post_nary_unite,
)
from .model import (
    Distinct,
    Model,
    ModelError,
    SolveResult,
    SolverConfig,
    VarDecl,
    build,
    format_model,
    parse_model,
    solve_model,
)
from .oracle import (
    CapExceeded,
    GroundModel,
    check_arc_consistent,
    check_interval_consistent,
    check_weak_arc_consistent,
    enumerate_solutions,
)
from .runtime import Agent, AgentState, Event, Rule, Runtime
from .search import (
    ALL_SOLUTIONS,
    FIRST_FAIL,
    FIRST_SOLUTION,
    LEFT_TO_RIGHT,
    LabelingSpec,
    SearchStats,
    label,
)
from .store import (
    BOUND,
    DOM,
    GENERATED,
    INS,
    Bind,
    ExcludeValue,
    IntersectRange,
    InvariantError,
    Store,
    Variable,
)

__version__ = "0.1.0"
