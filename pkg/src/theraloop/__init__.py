"""Closed-loop simulator for robot-assisted therapy sessions."""

from .behaviors import (
    Behavior,
    BehaviorCatalog,
    ChannelValue,
    ChannelVector,
    CompatibilityGraph,
    Feature,
    behaviors_compatible,
    build_graph,
    channel_conflict,
    load_catalog,
    select_compatible_set,
)
from .child import (
    ChildProfile,
    ChildResponse,
    InstantiationTable,
    StimulusEvent,
    default_catalog,
    default_table,
    instantiate_features,
    load_table,
    respond,
)
from .engine import (
    GateChoice,
    GateDecision,
    GateMode,
    Session,
    SessionConfig,
    SessionStep,
    SessionTrace,
    TaskSpec,
    create_session,
    load_config,
    run_to_completion,
    write_trace,
)
from .policy import (
    ActionKind,
    AssistanceAction,
    AssistanceLevel,
    NeedSignal,
    NeedState,
    NeedWeights,
    SignalKind,
    autonomy,
    default_ladder,
    select_action,
    update_need,
)
from .roles import Cue, CueActor, CueChannel, DyadState, OccupancyStats, RoleState, transition
from .stats import (
    ContingencyTable2x2,
    chi_square_2x2,
    mann_whitney_u,
    pearson_r,
    trace_report,
)

__version__ = "0.1.0"
