import pytest

from theraloop.roles import (
    CONTROL_CUES,
    PHYSICAL_CUES,
    VERBAL_CUES,
    Cue,
    CueActor,
    CueChannel,
    DyadState,
    OccupancyStats,
    RoleState,
    transition,
)

THETA = 3.0

ALL_CUES = [
    Cue(CueChannel.PHYSICAL, kind, CueActor.PATIENT) for kind in sorted(PHYSICAL_CUES)
] + [
    Cue(CueChannel.VERBAL, kind, CueActor.THERAPIST_ROBOT) for kind in sorted(VERBAL_CUES)
] + [
    Cue(CueChannel.CONTROL, kind, CueActor.PATIENT) for kind in sorted(CONTROL_CUES)
]


def expected_next(state: RoleState, cue: Cue, need: float) -> RoleState:
    """The specified transition map, written out independently."""
    if state.dyad is DyadState.DEMONSTRATE:
        if cue.kind == "end_of_task":
            return RoleState(DyadState.DEMONSTRATE, awaiting_patient_start=True)
        if cue.kind == "patient_begins" and state.awaiting_patient_start:
            return RoleState(DyadState.OBSERVE)
        return state
    if state.dyad is DyadState.OBSERVE:
        if cue.kind in ("does_not_reach", "does_not_lift"):
            return RoleState(DyadState.HELP if need >= THETA else DyadState.DEMONSTRATE)
        return state
    if cue.kind == "patient_resumes_progress":
        return RoleState(DyadState.OBSERVE)
    return state


def all_role_states():
    yield RoleState(DyadState.DEMONSTRATE, awaiting_patient_start=False)
    yield RoleState(DyadState.DEMONSTRATE, awaiting_patient_start=True)
    yield RoleState(DyadState.OBSERVE)
    yield RoleState(DyadState.HELP)


class TestTransition:
    def test_exhaustive_table(self):
        # every (state, cue, need side of theta) combination
        for state in all_role_states():
            for cue in ALL_CUES:
                for need in (THETA - 1.0, THETA, THETA + 2.0):
                    got = transition(state, cue, need, THETA)
                    assert got == expected_next(state, cue, need), (
                        state, cue.kind, need, got,
                    )

    def test_demonstrate_needs_both_control_cues_in_order(self):
        state = RoleState()
        begins = Cue(CueChannel.CONTROL, "patient_begins", CueActor.PATIENT)
        ends = Cue(CueChannel.CONTROL, "end_of_task", CueActor.THERAPIST_ROBOT)
        # patient_begins before end_of_task does nothing
        assert transition(state, begins, 0.0, THETA) == state
        state = transition(state, ends, 0.0, THETA)
        assert state.awaiting_patient_start
        state = transition(state, begins, 0.0, THETA)
        assert state.dyad is DyadState.OBSERVE

    def test_error_cue_branches_on_need(self):
        observe = RoleState(DyadState.OBSERVE)
        lift = Cue(CueChannel.PHYSICAL, "does_not_lift", CueActor.PATIENT)
        assert transition(observe, lift, 5.0, 3.0).dyad is DyadState.HELP
        assert transition(observe, lift, 1.0, 3.0).dyad is DyadState.DEMONSTRATE
        # boundary: need exactly at theta helps
        assert transition(observe, lift, 3.0, 3.0).dyad is DyadState.HELP

    def test_verbal_support_does_not_exit_help(self):
        help_state = RoleState(DyadState.HELP)
        supports = Cue(CueChannel.VERBAL, "supports", CueActor.THERAPIST_ROBOT)
        for need in (0.0, 5.0, 9.0):
            assert transition(help_state, supports, need, THETA) == help_state

    def test_help_exits_on_resumed_progress(self):
        state = RoleState(DyadState.HELP)
        resume = Cue(CueChannel.CONTROL, "patient_resumes_progress", CueActor.PATIENT)
        assert transition(state, resume, 7.0, THETA).dyad is DyadState.OBSERVE

    def test_all_states_reachable_from_demonstrate(self):
        state = RoleState()
        seen = {state.dyad}
        script = [
            (Cue(CueChannel.CONTROL, "end_of_task", CueActor.THERAPIST_ROBOT), 5.0),
            (Cue(CueChannel.CONTROL, "patient_begins", CueActor.PATIENT), 5.0),
            (Cue(CueChannel.PHYSICAL, "does_not_reach", CueActor.PATIENT), 5.0),
        ]
        for cue, need in script:
            state = transition(state, cue, need, THETA)
            seen.add(state.dyad)
        assert seen == set(DyadState)

    def test_malformed_cue_rejected(self):
        with pytest.raises(ValueError, match="not valid"):
            Cue(CueChannel.VERBAL, "does_not_lift", CueActor.PATIENT)
        with pytest.raises(ValueError, match="not valid"):
            Cue(CueChannel.PHYSICAL, "end_of_task", CueActor.PATIENT)

    def test_theta_out_of_range(self):
        cue = Cue(CueChannel.VERBAL, "states", CueActor.THERAPIST_ROBOT)
        with pytest.raises(ValueError):
            transition(RoleState(), cue, 0.0, 12.0)


class TestOccupancyStats:
    def test_all_help(self):
        stats = OccupancyStats()
        for _ in range(10):
            stats = stats.record_step(DyadState.HELP)
        assert stats.fraction(DyadState.HELP) == 1.0
        assert stats.count(DyadState.HELP) == 10

    def test_equal_thirds(self):
        stats = OccupancyStats()
        for state in DyadState:
            for _ in range(7):
                stats = stats.record_step(state)
        for state in DyadState:
            assert stats.fraction(state) == pytest.approx(1 / 3)

    def test_fractions_sum_to_one(self, rng):
        stats = OccupancyStats()
        states = list(DyadState)
        for _ in range(137):
            stats = stats.record_step(rng.choice(states))
        assert sum(stats.fractions().values()) == pytest.approx(1.0, abs=1e-9)

    def test_transition_matrix_row_sums_are_exit_counts(self, rng):
        stats = OccupancyStats()
        states = list(DyadState)
        expected_exits = {s: 0 for s in states}
        for _ in range(80):
            src, dst = rng.choice(states), rng.choice(states)
            stats = stats.record_transition(src, dst)
            expected_exits[src] += 1
        for state in states:
            assert stats.exit_count(state) == expected_exits[state]

    def test_recording_is_immutable(self):
        fresh = OccupancyStats()
        updated = fresh.record_step(DyadState.OBSERVE)
        assert fresh.total_steps == 0
        assert updated.total_steps == 1

    def test_empty_stats(self):
        stats = OccupancyStats()
        assert stats.fraction(DyadState.HELP) == 0.0
        assert stats.total_steps == 0
