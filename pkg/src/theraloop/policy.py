"""Graded-assistance policy: need estimation, action selection, autonomy.

Assistance is graded on a 0-9 ladder (0 = no assistance, 1 = light verbal
support, 9 = complete assistance) and the estimate of how much help the
person currently needs lives on the same scale. The policy picks the
candidate action whose level sits closest to the current need, breaking ties
toward less assistance, and scores each executed action with

    autonomy = (c - |need - level|) / c

which is 1.0 on a perfect match and falls off linearly with the mismatch in
either direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

NEED_MIN = 0.0
NEED_MAX = 9.0

LEVEL_LABELS = {
    0: "no assistance",
    1: "verbal support",
    2: "verbal hint that something is off",
    3: "verbal direction for the next move",
    4: "pointing or gesturing at the target",
    5: "rearranging task objects",
    6: "demonstrating the step",
    7: "guiding the person's hand",
    8: "physical support through the step",
    9: "complete assistance",
}


class ActionKind(Enum):
    NONE = "none"
    CONTINUE = "continue"
    ENCOURAGE = "encourage"
    CORRECT = "correct"
    DEMONSTRATE = "demonstrate"
    PHYSICAL_ASSIST = "physical_assist"
    HALT = "halt"


@dataclass(frozen=True)
class AssistanceLevel:
    level: int
    label: str = ""

    def __post_init__(self):
        if not 0 <= self.level <= 9:
            raise ValueError(f"assistance level {self.level} outside [0, 9]")
        if not self.label:
            object.__setattr__(self, "label", LEVEL_LABELS[self.level])


@dataclass(frozen=True)
class AssistanceAction:
    id: str
    level: AssistanceLevel
    kind: ActionKind
    utterance: str | None = None

    def __post_init__(self):
        # Level 0 is exactly "do nothing"; halt is session control and may
        # carry any level.
        if (self.kind is ActionKind.NONE) != (self.level.level == 0):
            if self.kind is not ActionKind.HALT:
                raise ValueError(
                    f"action {self.id!r}: kind {self.kind.value!r} at level"
                    f" {self.level.level} (kind 'none' <=> level 0)"
                )


class SignalKind(Enum):
    MISTAKE = "mistake"
    HESITATION = "hesitation"
    GAZE_AT_ROBOT = "gaze_at_robot"
    EXPLICIT_REQUEST = "explicit_request"
    PROGRESS = "progress"
    NO_PROGRESS_TICK = "no_progress_tick"


@dataclass(frozen=True)
class NeedSignal:
    kind: SignalKind
    step_index: int


@dataclass(frozen=True)
class NeedState:
    """Current need estimate plus the progress bookkeeping that drives it."""

    need: float = 0.0
    last_progress_step: int = -1
    consecutive_no_progress: int = 0


@dataclass(frozen=True)
class NeedWeights:
    """Per-signal increments, calibrated to reproduce the first-mistake-then-
    hesitation trace (0 -> 2.0 -> 3.0) with decay 1.0."""

    mistake: float = 2.0
    hesitation: float = 0.5
    gaze_at_robot: float = 0.5
    explicit_request: float = 2.0
    progress: float = -1.0
    no_progress: float = 0.25
    decay: float = 1.0
    task_boundary_decay: float = 0.5

    def weight(self, kind: SignalKind) -> float:
        return {
            SignalKind.MISTAKE: self.mistake,
            SignalKind.HESITATION: self.hesitation,
            SignalKind.GAZE_AT_ROBOT: self.gaze_at_robot,
            SignalKind.EXPLICIT_REQUEST: self.explicit_request,
            SignalKind.PROGRESS: self.progress,
            SignalKind.NO_PROGRESS_TICK: self.no_progress,
        }[kind]


def _clamp(x: float, lo: float, hi: float) -> float:
    return max(lo, min(hi, x))


def update_need(
    state: NeedState, signals: list[NeedSignal], weights: NeedWeights
) -> NeedState:
    """Fold one step's signals into the need estimate.

    need' = clamp(decay * need + sum of signal weights, 0, 9). A progress
    signal resets the no-progress counter; each no-progress tick increments
    it and contributes weight * counter, so stalls escalate.
    """
    total = weights.decay * state.need
    last_progress = state.last_progress_step
    counter = state.consecutive_no_progress
    for sig in signals:
        if sig.kind is SignalKind.PROGRESS:
            counter = 0
            last_progress = sig.step_index
            total += weights.progress
        elif sig.kind is SignalKind.NO_PROGRESS_TICK:
            counter += 1
            total += weights.no_progress * counter
        else:
            total += weights.weight(sig.kind)
    return NeedState(
        need=_clamp(total, NEED_MIN, NEED_MAX),
        last_progress_step=last_progress,
        consecutive_no_progress=counter,
    )


def decay_at_task_boundary(state: NeedState, weights: NeedWeights) -> NeedState:
    """Apply the between-task decay and reset the per-attempt counter."""
    return NeedState(
        need=_clamp(weights.task_boundary_decay * state.need, NEED_MIN, NEED_MAX),
        last_progress_step=state.last_progress_step,
        consecutive_no_progress=0,
    )


def select_action(need: float, candidates: list[AssistanceAction]) -> AssistanceAction:
    """Return the candidate whose level is nearest the need.

    Ties break toward the lower level; among equal levels the earliest
    candidate wins.
    """
    if not candidates:
        raise ValueError("select_action requires a non-empty candidate list")
    return min(
        enumerate(candidates),
        key=lambda ic: (abs(need - ic[1].level.level), ic[1].level.level, ic[0]),
    )[1]


def autonomy(need: float, action: AssistanceAction, c: float = 9.0) -> float:
    """Per-step autonomy preservation score, in [0, 1].

    ``c`` is the maximum admissible distance between need and assistance
    level; a mismatch beyond it is an error rather than a score of 0.
    """
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    distance = abs(need - action.level.level)
    if distance > c:
        raise ValueError(f"|need - level| = {distance} exceeds c = {c}")
    return (c - distance) / c


def default_ladder() -> list[AssistanceAction]:
    """The full 0-9 action ladder used when a task declares none."""
    kinds = {
        0: ActionKind.NONE,
        1: ActionKind.CONTINUE,
        2: ActionKind.CORRECT,
        3: ActionKind.CORRECT,
        4: ActionKind.ENCOURAGE,
        5: ActionKind.DEMONSTRATE,
        6: ActionKind.DEMONSTRATE,
        7: ActionKind.PHYSICAL_ASSIST,
        8: ActionKind.PHYSICAL_ASSIST,
        9: ActionKind.PHYSICAL_ASSIST,
    }
    utterances = {
        1: "Keep going.",
        2: "Something looks off, take another look.",
        3: "Check the slot you just used.",
        4: "You are close, look over here.",
    }
    return [
        AssistanceAction(
            id=f"level_{lvl}",
            level=AssistanceLevel(lvl),
            kind=kinds[lvl],
            utterance=utterances.get(lvl),
        )
        for lvl in range(10)
    ]
