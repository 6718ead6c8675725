"""Closed-loop session engine.

Each step runs one cycle: deliver the current task's stimulus, sample the
child's response, fold the extracted signals into the need estimate, pick the
nearest-level assistance action, pass it through the caregiver gate, drive
the role state machine with the cues observed during the step, and append a
fully replayable record to the trace.

All randomness flows from the single seeded generator created with the
session, so a config (plus the gate decision sequence, in interactive mode)
determines the trace byte for byte.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

from . import child as child_mod
from .behaviors import BehaviorCatalog, load_catalog
from .child import ChildProfile, ChildResponse, InstantiationTable, StimulusEvent, load_table
from .errors import ConfigError, SessionStateError
from .policy import (
    ActionKind,
    AssistanceAction,
    AssistanceLevel,
    NeedSignal,
    NeedState,
    NeedWeights,
    SignalKind,
    autonomy,
    decay_at_task_boundary,
    default_ladder,
    select_action,
    update_need,
)
from .roles import (
    DEFAULT_VERBAL_WEIGHTS,
    Cue,
    CueActor,
    CueChannel,
    DyadState,
    OccupancyStats,
    RoleState,
    transition,
)

PROGRESS_KINDS_DEFAULT = frozenset(
    {ActionKind.NONE, ActionKind.CONTINUE, ActionKind.ENCOURAGE}
)


class GateMode(Enum):
    AUTO_APPROVE = "auto_approve"
    INTERACTIVE = "interactive"


@dataclass(frozen=True)
class TaskSpec:
    activity_id: str
    max_steps: int
    ladder: tuple[AssistanceAction, ...] = ()
    intensity: float | None = None

    def actions(self) -> list[AssistanceAction]:
        return list(self.ladder) if self.ladder else default_ladder()


@dataclass(frozen=True)
class CueConfig:
    """How observable cues are generated from the child's step."""

    verbal_rate: float = 0.5
    verbal_weights: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_VERBAL_WEIGHTS)
    )
    physical_error_prob: float = 0.7
    motor_value_threshold: int = 2


@dataclass(frozen=True)
class SessionConfig:
    profile: ChildProfile
    scenario: tuple[TaskSpec, ...]
    seed: int = 0
    weights: NeedWeights = NeedWeights()
    c: float = 9.0
    theta_help: float = 3.0
    gate: GateMode = GateMode.AUTO_APPROVE
    cues: CueConfig = field(default_factory=CueConfig)
    engagement_noise: float = child_mod.ENGAGEMENT_NOISE_DEFAULT
    progress_threshold: float = 1.0
    progress_kinds: frozenset[ActionKind] = PROGRESS_KINDS_DEFAULT
    catalog_path: str | None = None
    table_path: str | None = None


class GateChoice(Enum):
    APPROVED = "approved"
    OVERRIDDEN = "overridden"
    HALTED = "halted"


@dataclass(frozen=True)
class GateDecision:
    choice: GateChoice
    action: AssistanceAction | None = None

    def __post_init__(self):
        if (self.choice is GateChoice.OVERRIDDEN) != (self.action is not None):
            raise ValueError("override decisions carry an action; others must not")


@dataclass(frozen=True)
class SessionStep:
    step_index: int
    task_index: int
    stimulus: StimulusEvent
    response: ChildResponse
    need_before: float
    need_after: float
    chosen_action: AssistanceAction
    gate_decision: GateDecision
    executed_action: AssistanceAction
    cues: tuple[Cue, ...]
    dyad_before: DyadState
    dyad_after: DyadState
    autonomy: float


@dataclass
class SessionTrace:
    config: dict
    steps: list[SessionStep] = field(default_factory=list)
    occupancy: OccupancyStats = field(default_factory=OccupancyStats)
    summary: dict | None = None


# --------------------------------------------------------------------------
# Serialization helpers (stable key order comes from sort_keys at dump time)
# --------------------------------------------------------------------------


def action_to_dict(action: AssistanceAction) -> dict:
    return {
        "id": action.id,
        "level": action.level.level,
        "kind": action.kind.value,
        "utterance": action.utterance,
    }


def action_from_dict(raw: dict, where: str = "action") -> AssistanceAction:
    try:
        return AssistanceAction(
            id=str(raw["id"]),
            level=AssistanceLevel(int(raw["level"])),
            kind=ActionKind(raw["kind"]),
            utterance=raw.get("utterance"),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def step_to_dict(step: SessionStep) -> dict:
    gate: dict[str, Any] = {"decision": step.gate_decision.choice.value}
    if step.gate_decision.action is not None:
        gate["action"] = action_to_dict(step.gate_decision.action)
    return {
        "step_index": step.step_index,
        "task_index": step.task_index,
        "stimulus": {
            "activity": step.stimulus.activity_id,
            "step_index": step.stimulus.step_index,
            "intensity": step.stimulus.intensity,
        },
        "response": {
            "behaviors": list(step.response.behaviors),
            "engagement": step.response.engagement,
            "signals": sorted(s.value for s in step.response.signals),
        },
        "need_before": step.need_before,
        "need_after": step.need_after,
        "chosen_action": action_to_dict(step.chosen_action),
        "gate": gate,
        "executed_action": action_to_dict(step.executed_action),
        "cues": [
            {"channel": c.channel.value, "kind": c.kind, "actor": c.actor.value}
            for c in step.cues
        ],
        "dyad_before": step.dyad_before.value,
        "dyad_after": step.dyad_after.value,
        "autonomy": step.autonomy,
    }


def config_to_dict(config: SessionConfig) -> dict:
    return {
        "seed": config.seed,
        "profile": {
            "age_band": config.profile.age_band,
            "language_ability": config.profile.language_ability,
            "severity": config.profile.severity,
        },
        "scenario": [
            {
                "activity": t.activity_id,
                "max_steps": t.max_steps,
                "ladder": [action_to_dict(a) for a in t.ladder] if t.ladder else None,
                "intensity": t.intensity,
            }
            for t in config.scenario
        ],
        "policy": {
            "mistake": config.weights.mistake,
            "hesitation": config.weights.hesitation,
            "gaze_at_robot": config.weights.gaze_at_robot,
            "explicit_request": config.weights.explicit_request,
            "progress": config.weights.progress,
            "no_progress": config.weights.no_progress,
            "decay": config.weights.decay,
            "task_boundary_decay": config.weights.task_boundary_decay,
            "c": config.c,
            "theta_help": config.theta_help,
        },
        "gate": config.gate.value,
        "cues": {
            "verbal_rate": config.cues.verbal_rate,
            "verbal_weights": dict(config.cues.verbal_weights),
            "physical_error_prob": config.cues.physical_error_prob,
            "motor_value_threshold": config.cues.motor_value_threshold,
        },
        "engagement_noise": config.engagement_noise,
        "progress_threshold": config.progress_threshold,
        "progress_kinds": sorted(k.value for k in config.progress_kinds),
        "catalog": config.catalog_path,
        "table": config.table_path,
    }


_CONFIG_KEYS = {
    "seed", "profile", "scenario", "policy", "gate", "cues",
    "engagement_noise", "progress_threshold", "progress_kinds",
    "catalog", "table",
}


def config_from_dict(raw: dict) -> SessionConfig:
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("profile", "scenario"):
        if key not in raw:
            raise ConfigError(f"config missing required key {key!r}")

    prof = raw["profile"]
    try:
        profile = ChildProfile(
            age_band=prof["age_band"],
            language_ability=prof["language_ability"],
            severity=prof["severity"],
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"profile: missing field {exc}") from None

    if not raw["scenario"]:
        raise ConfigError("scenario: must contain at least one task")
    scenario = []
    for i, trec in enumerate(raw["scenario"]):
        where = f"scenario[{i}]"
        if "activity" not in trec:
            raise ConfigError(f"{where}.activity: required")
        max_steps = int(trec.get("max_steps", 10))
        if max_steps < 1:
            raise ConfigError(f"{where}.max_steps: must be >= 1, got {max_steps}")
        ladder_raw = trec.get("ladder")
        ladder = (
            tuple(action_from_dict(a, f"{where}.ladder[{j}]") for j, a in enumerate(ladder_raw))
            if ladder_raw
            else ()
        )
        intensity = trec.get("intensity")
        scenario.append(
            TaskSpec(
                activity_id=trec["activity"],
                max_steps=max_steps,
                ladder=ladder,
                intensity=None if intensity is None else float(intensity),
            )
        )

    pol = raw.get("policy", {})
    weights = NeedWeights(
        mistake=float(pol.get("mistake", 2.0)),
        hesitation=float(pol.get("hesitation", 0.5)),
        gaze_at_robot=float(pol.get("gaze_at_robot", 0.5)),
        explicit_request=float(pol.get("explicit_request", 2.0)),
        progress=float(pol.get("progress", -1.0)),
        no_progress=float(pol.get("no_progress", 0.25)),
        decay=float(pol.get("decay", 1.0)),
        task_boundary_decay=float(pol.get("task_boundary_decay", 0.5)),
    )
    c = float(pol.get("c", 9.0))
    if c <= 0:
        raise ConfigError(f"policy.c: must be positive, got {c}")
    theta = float(pol.get("theta_help", 3.0))
    if not 0 <= theta <= 9:
        raise ConfigError(f"policy.theta_help: must be in [0, 9], got {theta}")

    try:
        gate = GateMode(raw.get("gate", "auto_approve"))
    except ValueError:
        raise ConfigError(f"gate: unknown mode {raw.get('gate')!r}") from None

    cues_raw = raw.get("cues", {})
    cues = CueConfig(
        verbal_rate=float(cues_raw.get("verbal_rate", 0.5)),
        verbal_weights=dict(cues_raw.get("verbal_weights", DEFAULT_VERBAL_WEIGHTS)),
        physical_error_prob=float(cues_raw.get("physical_error_prob", 0.7)),
        motor_value_threshold=int(cues_raw.get("motor_value_threshold", 2)),
    )

    kinds_raw = raw.get("progress_kinds")
    progress_kinds = (
        frozenset(ActionKind(k) for k in kinds_raw)
        if kinds_raw is not None
        else PROGRESS_KINDS_DEFAULT
    )

    return SessionConfig(
        profile=profile,
        scenario=tuple(scenario),
        seed=int(raw.get("seed", 0)),
        weights=weights,
        c=c,
        theta_help=theta,
        gate=gate,
        cues=cues,
        engagement_noise=float(raw.get("engagement_noise", child_mod.ENGAGEMENT_NOISE_DEFAULT)),
        progress_threshold=float(raw.get("progress_threshold", 1.0)),
        progress_kinds=progress_kinds,
        catalog_path=raw.get("catalog"),
        table_path=raw.get("table"),
    )


def load_config(path: str | Path) -> SessionConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


# --------------------------------------------------------------------------
# The session
# --------------------------------------------------------------------------


@dataclass
class _Pending:
    """Everything computed by the propose phase, awaiting a gate decision."""

    stimulus: StimulusEvent
    response: ChildResponse
    need_before: float
    need_after: NeedState
    chosen: AssistanceAction
    error_cue_kind: str | None
    progress: bool
    dyad_before: DyadState


class Session:
    """One running simulated session. Not safe for concurrent use; distinct
    sessions are fully independent."""

    def __init__(
        self,
        config: SessionConfig,
        catalog: BehaviorCatalog,
        table: InstantiationTable,
    ):
        self.config = config
        self.catalog = catalog
        self.table = table
        self._validate()
        self.rng = random.Random(config.seed)
        self.need = NeedState()
        self.role = RoleState()
        self.task_index = 0
        self.steps_in_task = 0
        self.step_index = 0
        self.finished = len(config.scenario) == 0
        self.trace = SessionTrace(config=config_to_dict(config))
        self._pending: _Pending | None = None
        self._prev_kind: ActionKind | None = None
        self._task_records: list[dict] = []
        if self.finished:
            self._finalize()
        self._verbal_kinds = sorted(config.cues.verbal_weights)
        self._verbal_cum = self._cumulative(
            [config.cues.verbal_weights[k] for k in self._verbal_kinds]
        )

    @staticmethod
    def _cumulative(weights: list[float]) -> list[float]:
        total = sum(weights)
        if total <= 0:
            raise ConfigError("cues.verbal_weights: weights must sum to > 0")
        acc = 0.0
        out = []
        for w in weights:
            acc += w / total
            out.append(acc)
        return out

    def _validate(self) -> None:
        self.table.validate_profile(self.config.profile)
        for i, task in enumerate(self.config.scenario):
            if task.activity_id not in self.catalog.activities:
                raise ConfigError(
                    f"scenario[{i}].activity: unknown activity {task.activity_id!r}"
                )
            if not task.actions():
                raise ConfigError(f"scenario[{i}].ladder: must not be empty")

    # -- stepping ----------------------------------------------------------

    @property
    def current_task(self) -> TaskSpec:
        return self.config.scenario[self.task_index]

    def step(self, external_action: AssistanceAction | None = None) -> SessionStep:
        """Run one full cycle (auto-approve gate only).

        An ``external_action`` executes in place of the policy's choice and
        is recorded as an override.
        """
        if self.config.gate is not GateMode.AUTO_APPROVE:
            raise SessionStateError(
                "session gate is interactive; drive it with propose()/decide()"
            )
        self.propose()
        if external_action is not None:
            return self.decide(GateDecision(GateChoice.OVERRIDDEN, external_action))
        return self.decide(GateDecision(GateChoice.APPROVED))

    def propose(self) -> dict:
        """Compute one step up to the gate and hold it pending.

        Returns a plain-dict preview (stimulus, response, need, proposed
        action) for the deciding human or the auto gate.
        """
        if self.finished:
            raise SessionStateError("session is finished; no further steps")
        if self._pending is not None:
            raise SessionStateError("a proposed step is already pending a decision")

        task = self.current_task
        stimulus = StimulusEvent(
            activity_id=task.activity_id,
            step_index=self.step_index,
            intensity=task.intensity,
        )
        response = child_mod.respond(
            self.config.profile,
            stimulus,
            self.catalog,
            self.table,
            self.rng,
            engagement_noise=self.config.engagement_noise,
        )

        error_cue_kind = self._sample_error_cue(response)
        progress = self._progress_fired(response)

        signals = [
            NeedSignal(kind, self.step_index)
            for kind in sorted(response.signals, key=lambda s: s.value)
        ]
        if error_cue_kind is not None:
            signals.append(NeedSignal(SignalKind.MISTAKE, self.step_index))
        signals.append(
            NeedSignal(
                SignalKind.PROGRESS if progress else SignalKind.NO_PROGRESS_TICK,
                self.step_index,
            )
        )

        need_before = self.need.need
        need_after = update_need(self.need, signals, self.config.weights)
        chosen = select_action(need_after.need, task.actions())

        self._pending = _Pending(
            stimulus=stimulus,
            response=response,
            need_before=need_before,
            need_after=need_after,
            chosen=chosen,
            error_cue_kind=error_cue_kind,
            progress=progress,
            dyad_before=self.role.dyad,
        )
        return self.pending_view()

    def pending_view(self) -> dict:
        if self._pending is None:
            raise SessionStateError("no proposed step is pending")
        p = self._pending
        return {
            "step_index": self.step_index,
            "task_index": self.task_index,
            "stimulus": {
                "activity": p.stimulus.activity_id,
                "step_index": p.stimulus.step_index,
                "intensity": p.stimulus.intensity,
            },
            "response": {
                "behaviors": list(p.response.behaviors),
                "engagement": p.response.engagement,
                "signals": sorted(s.value for s in p.response.signals),
            },
            "need_before": p.need_before,
            "need_after": p.need_after.need,
            "proposed_action": action_to_dict(p.chosen),
            "ladder": [action_to_dict(a) for a in self.current_task.actions()],
            "dyad": p.dyad_before.value,
        }

    def decide(self, decision: GateDecision) -> SessionStep:
        """Commit the pending step with the gate's decision."""
        if self._pending is None:
            raise SessionStateError("no proposed step is pending a decision")
        p = self._pending
        self._pending = None

        halted = decision.choice is GateChoice.HALTED
        if decision.choice is GateChoice.OVERRIDDEN:
            executed = decision.action
        else:
            # On halt no graded assistance executes; the proposal remains the
            # assistance measurement of record for the autonomy series.
            executed = p.chosen

        cues: tuple[Cue, ...] = () if halted else self._generate_cues(p)
        role_after = self.role
        for cue in cues:
            role_after = transition(
                role_after, cue, p.need_after.need, self.config.theta_help
            )

        occupancy = self.trace.occupancy.record_step(p.dyad_before)
        occupancy = occupancy.record_transition(p.dyad_before, role_after.dyad)
        self.trace.occupancy = occupancy

        step = SessionStep(
            step_index=self.step_index,
            task_index=self.task_index,
            stimulus=p.stimulus,
            response=p.response,
            need_before=p.need_before,
            need_after=p.need_after.need,
            chosen_action=p.chosen,
            gate_decision=decision,
            executed_action=executed,
            cues=cues,
            dyad_before=p.dyad_before,
            dyad_after=role_after.dyad,
            autonomy=autonomy(p.need_after.need, executed, self.config.c),
        )
        self.trace.steps.append(step)

        self.role = role_after
        self.need = p.need_after
        self._prev_kind = executed.kind
        self.step_index += 1
        self.steps_in_task += 1

        # A halt decision and an executed halt-kind action both end the task.
        ends_task = halted or executed.kind is ActionKind.HALT
        if ends_task or self.steps_in_task >= self.current_task.max_steps:
            self._finish_task(ends_task)
        return step

    def _finish_task(self, halted: bool) -> None:
        self._task_records.append(
            {
                "index": self.task_index,
                "activity": self.current_task.activity_id,
                "steps": self.steps_in_task,
                "halted": halted,
            }
        )
        self.task_index += 1
        self.steps_in_task = 0
        self._prev_kind = None
        self.need = decay_at_task_boundary(self.need, self.config.weights)
        # A new task opens with a fresh demonstration; this is session
        # structure, not a cue-driven role transition.
        self.role = RoleState(DyadState.DEMONSTRATE)
        if self.task_index >= len(self.config.scenario):
            self.finished = True
            self._finalize()

    def _finalize(self) -> None:
        autonomies = [s.autonomy for s in self.trace.steps]
        self.trace.summary = {
            "steps": len(self.trace.steps),
            "mean_autonomy": sum(autonomies) / len(autonomies) if autonomies else 0.0,
            "min_autonomy": min(autonomies) if autonomies else 0.0,
            "occupancy": self.trace.occupancy.as_dict(),
            "tasks": self._task_records,
        }

    # -- cue generation ----------------------------------------------------

    def _sample_error_cue(self, response: ChildResponse) -> str | None:
        """A failed reach/lift, observable when a motor-relevant behavior is
        scored at or above the threshold. Consumes rng only when a motor
        difficulty is present."""
        motor_difficulty = any(
            self.catalog.features[b.feature_id].motor
            and b.feature_value >= self.config.cues.motor_value_threshold
            for b in (self.catalog.behaviors[bid] for bid in response.behaviors)
        )
        if not motor_difficulty:
            return None
        if self.rng.random() >= self.config.cues.physical_error_prob:
            return None
        return "does_not_reach" if self.rng.random() < 0.5 else "does_not_lift"

    def _progress_fired(self, response: ChildResponse) -> bool:
        if self._prev_kind is not None and self._prev_kind not in self.config.progress_kinds:
            return False
        if not response.behaviors:
            return True
        mean_value = sum(
            self.catalog.behaviors[bid].feature_value for bid in response.behaviors
        ) / len(response.behaviors)
        return mean_value < self.config.progress_threshold

    def _generate_cues(self, p: _Pending) -> tuple[Cue, ...]:
        cues: list[Cue] = []
        if self.rng.random() < self.config.cues.verbal_rate:
            kind = self._sample_verbal_kind()
            actor = CueActor.PATIENT if kind == "requests" else CueActor.THERAPIST_ROBOT
            cues.append(Cue(CueChannel.VERBAL, kind, actor))
        if p.dyad_before is DyadState.DEMONSTRATE:
            cues.append(Cue(CueChannel.CONTROL, "end_of_task", CueActor.THERAPIST_ROBOT))
            cues.append(Cue(CueChannel.CONTROL, "patient_begins", CueActor.PATIENT))
        elif p.dyad_before is DyadState.OBSERVE:
            if p.error_cue_kind is not None:
                cues.append(Cue(CueChannel.PHYSICAL, p.error_cue_kind, CueActor.PATIENT))
        else:  # HELP
            if p.progress:
                cues.append(
                    Cue(CueChannel.CONTROL, "patient_resumes_progress", CueActor.PATIENT)
                )
        return tuple(cues)

    def _sample_verbal_kind(self) -> str:
        u = self.rng.random()
        for kind, cum in zip(self._verbal_kinds, self._verbal_cum):
            if u < cum:
                return kind
        return self._verbal_kinds[-1]

    # -- bulk & export -----------------------------------------------------

    def run_to_completion(self) -> SessionTrace:
        if self.config.gate is not GateMode.AUTO_APPROVE:
            raise SessionStateError("run_to_completion requires the auto-approve gate")
        while not self.finished:
            self.step()
        return self.trace

    def snapshot(self) -> dict:
        autonomies = [s.autonomy for s in self.trace.steps]
        return {
            "dyad": self.role.dyad.value,
            "need": self.need.need,
            "step_index": self.step_index,
            "task_index": min(self.task_index, len(self.config.scenario) - 1),
            "finished": self.finished,
            "pending": self.pending_view() if self._pending is not None else None,
            "last_step": step_to_dict(self.trace.steps[-1]) if self.trace.steps else None,
            "summary_so_far": {
                "steps": len(self.trace.steps),
                "mean_autonomy": sum(autonomies) / len(autonomies) if autonomies else None,
            },
        }


def run_to_completion(session: Session) -> SessionTrace:
    """Step an auto-approve session until its scenario is exhausted."""
    return session.run_to_completion()


def create_session(
    config: SessionConfig,
    catalog: BehaviorCatalog | None = None,
    table: InstantiationTable | None = None,
) -> Session:
    """Build a session, loading catalog/table from the config's paths or the
    packaged defaults."""
    if catalog is None:
        catalog = (
            load_catalog(config.catalog_path)
            if config.catalog_path
            else child_mod.default_catalog()
        )
    if table is None:
        table = (
            load_table(config.table_path)
            if config.table_path
            else child_mod.default_table()
        )
    return Session(config, catalog, table)


# --------------------------------------------------------------------------
# Trace files
# --------------------------------------------------------------------------


def trace_lines(trace: SessionTrace) -> Iterable[str]:
    """JSON-lines form: config echo, one line per step, then the summary.

    Key order is sorted so identical sessions serialize byte-identically.
    """
    yield json.dumps({"type": "config", "config": trace.config}, sort_keys=True)
    for step in trace.steps:
        yield json.dumps({"type": "step", **step_to_dict(step)}, sort_keys=True)
    if trace.summary is not None:
        yield json.dumps({"type": "summary", **trace.summary}, sort_keys=True)


def write_trace(trace: SessionTrace, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in trace_lines(trace):
            fh.write(line + "\n")


CSV_COLUMNS = [
    "step_index", "task_index", "activity", "need_before", "need_after",
    "chosen_level", "executed_level", "executed_kind", "gate_decision",
    "dyad_before", "dyad_after", "autonomy", "engagement", "behaviors",
    "signals", "cues",
]


def write_trace_csv(trace: SessionTrace, path: str | Path) -> None:
    """One row per step, columns as in CSV_COLUMNS."""
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for s in trace.steps:
            writer.writerow(
                [
                    s.step_index,
                    s.task_index,
                    s.stimulus.activity_id,
                    s.need_before,
                    s.need_after,
                    s.chosen_action.level.level,
                    s.executed_action.level.level,
                    s.executed_action.kind.value,
                    s.gate_decision.choice.value,
                    s.dyad_before.value,
                    s.dyad_after.value,
                    s.autonomy,
                    s.response.engagement,
                    ";".join(s.response.behaviors),
                    ";".join(sorted(sig.value for sig in s.response.signals)),
                    ";".join(f"{c.channel.value}:{c.kind}" for c in s.cues),
                ]
            )
