"""Therapist/patient role dyads with cue-driven transitions.

The pair moves through three paired roles: the therapist demonstrates while
the patient observes, the therapist observes while the patient performs, or
the therapist helps while the patient performs with assistance. Roles only
change when a cue arrives:

    DEMONSTRATE --(end_of_task, then patient_begins)--> OBSERVE
    OBSERVE --(does_not_reach | does_not_lift)--> HELP    if need >= theta
                                              --> DEMONSTRATE otherwise
    HELP --(patient_resumes_progress)--> OBSERVE

Everything else self-loops. The two control cues that leave DEMONSTRATE must
occur in order, so the role state carries a pending flag set by end_of_task
and consumed by patient_begins.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum


class DyadState(Enum):
    DEMONSTRATE = "DEMONSTRATE"
    OBSERVE = "OBSERVE"
    HELP = "HELP"


class CueChannel(Enum):
    PHYSICAL = "physical"
    VERBAL = "verbal"
    CONTROL = "control"


class CueActor(Enum):
    THERAPIST_ROBOT = "therapist_robot"
    PATIENT = "patient"


PHYSICAL_CUES = frozenset(
    {"reaches", "lifts", "stabilizes", "does_not_reach", "does_not_lift"}
)
VERBAL_CUES = frozenset({"supports", "requests", "commands", "states"})
CONTROL_CUES = frozenset({"end_of_task", "patient_begins", "patient_resumes_progress"})

_CUES_BY_CHANNEL = {
    CueChannel.PHYSICAL: PHYSICAL_CUES,
    CueChannel.VERBAL: VERBAL_CUES,
    CueChannel.CONTROL: CONTROL_CUES,
}

ERROR_CUES = frozenset({"does_not_reach", "does_not_lift"})

# Relative verbal-cue frequencies observed in coded therapy sessions
# (supports, requests, commands, states); used as emission weights after
# normalization.
DEFAULT_VERBAL_WEIGHTS = {
    "supports": 59.5,
    "requests": 38.5,
    "commands": 30.5,
    "states": 59.5,
}


@dataclass(frozen=True)
class Cue:
    channel: CueChannel
    kind: str
    actor: CueActor

    def __post_init__(self):
        allowed = _CUES_BY_CHANNEL[self.channel]
        if self.kind not in allowed:
            raise ValueError(
                f"cue kind {self.kind!r} not valid on channel {self.channel.value!r}"
                f" (expected one of {sorted(allowed)})"
            )


@dataclass(frozen=True)
class RoleState:
    """Dyad plus the end-of-task flag awaiting the patient's start."""

    dyad: DyadState = DyadState.DEMONSTRATE
    awaiting_patient_start: bool = False


def transition(
    state: RoleState, cue: Cue, need: float, theta_help: float
) -> RoleState:
    """Apply one cue. Total over valid inputs; unmatched cues self-loop."""
    if not 0 <= theta_help <= 9:
        raise ValueError(f"theta_help {theta_help} outside [0, 9]")
    dyad = state.dyad
    if dyad is DyadState.DEMONSTRATE:
        if cue.kind == "end_of_task":
            return replace(state, awaiting_patient_start=True)
        if cue.kind == "patient_begins" and state.awaiting_patient_start:
            return RoleState(DyadState.OBSERVE)
        return state
    if dyad is DyadState.OBSERVE:
        if cue.kind in ERROR_CUES:
            if need >= theta_help:
                return RoleState(DyadState.HELP)
            return RoleState(DyadState.DEMONSTRATE)
        return state
    # HELP
    if cue.kind == "patient_resumes_progress":
        return RoleState(DyadState.OBSERVE)
    return state


_STATE_ORDER = (DyadState.DEMONSTRATE, DyadState.OBSERVE, DyadState.HELP)
_STATE_INDEX = {s: i for i, s in enumerate(_STATE_ORDER)}


@dataclass(frozen=True)
class OccupancyStats:
    """Step counts per dyad state and a 3x3 transition-count matrix.

    Immutable; the recording helpers return updated copies. Fractions are
    computed from integer counts at read time, so they are exact ratios.
    """

    step_counts: tuple[int, int, int] = (0, 0, 0)
    transitions: tuple[tuple[int, ...], ...] = ((0, 0, 0), (0, 0, 0), (0, 0, 0))

    def record_step(self, state: DyadState) -> "OccupancyStats":
        counts = list(self.step_counts)
        counts[_STATE_INDEX[state]] += 1
        return OccupancyStats(tuple(counts), self.transitions)

    def record_transition(self, src: DyadState, dst: DyadState) -> "OccupancyStats":
        matrix = [list(row) for row in self.transitions]
        matrix[_STATE_INDEX[src]][_STATE_INDEX[dst]] += 1
        return OccupancyStats(self.step_counts, tuple(tuple(r) for r in matrix))

    @property
    def total_steps(self) -> int:
        return sum(self.step_counts)

    def count(self, state: DyadState) -> int:
        return self.step_counts[_STATE_INDEX[state]]

    def fraction(self, state: DyadState) -> float:
        total = self.total_steps
        if total == 0:
            return 0.0
        return self.count(state) / total

    def fractions(self) -> dict[str, float]:
        return {s.value: self.fraction(s) for s in _STATE_ORDER}

    def exit_count(self, state: DyadState) -> int:
        return sum(self.transitions[_STATE_INDEX[state]])

    def as_dict(self) -> dict:
        return {
            "steps": {s.value: self.count(s) for s in _STATE_ORDER},
            "fractions": self.fractions(),
            "transitions": [list(row) for row in self.transitions],
        }
