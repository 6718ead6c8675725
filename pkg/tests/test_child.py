import random
from collections import Counter

import pytest

from theraloop.behaviors import catalog_from_dict
from theraloop.child import (
    ChildProfile,
    StimulusEvent,
    default_catalog,
    default_table,
    engagement_score,
    instantiate_features,
    respond,
    sample_value,
    severity_dominance_violations,
    signals_for,
    table_from_dict,
)
from theraloop.errors import TableError
from theraloop.policy import SignalKind

CATEGORIES = {
    "age_band": ["young", "old"],
    "language_ability": ["low", "high"],
    "severity": ["none", "severe"],
}


def make_table(cells):
    return table_from_dict({"categories": CATEGORIES, "cells": cells})


def full_cells(feature_ids, probs_by_severity):
    cells = {}
    for fid in feature_ids:
        by_key = {}
        for sev, probs in probs_by_severity.items():
            for lang in CATEGORIES["language_ability"]:
                for age in CATEGORIES["age_band"]:
                    by_key[f"{sev}|{lang}|{age}"] = probs
        cells[fid] = by_key
    return cells


ONE_FEATURE_CATALOG = catalog_from_dict(
    {
        "features": {"F": {"name": "f"}},
        "behaviors": {
            f"f_v{v}": {"feature": "F", "value": v, "channels": "xxxx"}
            for v in range(4)
        },
        "activities": {"act": {"features": ["F"]}},
    }
)


class TestInstantiateFeatures:
    def test_degenerate_table(self):
        table = make_table(
            full_cells(["F"], {"none": [0, 0, 1.0, 0], "severe": [0, 0, 1.0, 0]})
        )
        profile = ChildProfile("young", "low", "severe")
        values = instantiate_features(
            profile, "act", ONE_FEATURE_CATALOG, table, random.Random(1)
        )
        assert values == {"F": 2}

    def test_default_table_severity_none_all_zero(self):
        catalog = default_catalog()
        table = default_table()
        profile = ChildProfile("school_age", "fluent", "none")
        for activity in catalog.activities:
            values = instantiate_features(
                profile, activity, catalog, table, random.Random(9)
            )
            assert set(values.values()) == {0}

    def test_monte_carlo_matches_cell_probabilities(self):
        probs = [0.2, 0.3, 0.3, 0.2]
        table = make_table(full_cells(["F"], {"none": probs, "severe": probs}))
        profile = ChildProfile("old", "high", "severe")
        rng = random.Random(12345)
        n = 100_000
        counts = Counter(
            instantiate_features(profile, "act", ONE_FEATURE_CATALOG, table, rng)["F"]
            for _ in range(n)
        )
        for value, p in enumerate(probs):
            assert counts[value] / n == pytest.approx(p, abs=0.01)

    def test_missing_cell_names_feature_and_categories(self):
        table = make_table({"F": {"none|low|young": [1.0, 0, 0, 0]}})
        profile = ChildProfile("old", "high", "severe")
        with pytest.raises(TableError, match=r"'F'.*severe\|high\|old"):
            instantiate_features(profile, "act", ONE_FEATURE_CATALOG, table, random.Random(0))

    def test_profile_outside_categories(self):
        table = make_table(full_cells(["F"], {"none": [1.0, 0, 0, 0]}))
        with pytest.raises(TableError, match="moderate"):
            instantiate_features(
                ChildProfile("old", "high", "moderate"),
                "act",
                ONE_FEATURE_CATALOG,
                table,
                random.Random(0),
            )

    def test_deterministic_given_seed(self):
        catalog = default_catalog()
        table = default_table()
        profile = ChildProfile("preschool", "phrases", "moderate")
        a = instantiate_features(profile, "free_play", catalog, table, random.Random(5))
        b = instantiate_features(profile, "free_play", catalog, table, random.Random(5))
        assert a == b


class TestRespond:
    def test_no_severity_gives_calm_engaged_response(self):
        catalog = default_catalog()
        table = default_table()
        profile = ChildProfile("school_age", "fluent", "none")
        for seed in range(10):
            response = respond(
                profile,
                StimulusEvent("block_sorting", 0),
                catalog,
                table,
                random.Random(seed),
            )
            assert all(
                catalog.behaviors[bid].feature_value == 0 for bid in response.behaviors
            )
            assert response.engagement >= 0.8

    def test_behaviors_restricted_to_activity_features(self):
        catalog = default_catalog()
        table = default_table()
        profile = ChildProfile("adolescent", "phrases", "moderate")
        expected = {"A2", "B4", "B1", "A5"}
        for seed in range(25):
            response = respond(
                profile,
                StimulusEvent("response_to_name", 0),
                catalog,
                table,
                random.Random(seed),
            )
            features = {catalog.behaviors[bid].feature_id for bid in response.behaviors}
            assert features <= expected

    def test_response_is_pairwise_compatible(self):
        from theraloop.behaviors import behaviors_compatible

        catalog = default_catalog()
        table = default_table()
        profile = ChildProfile("preschool", "none", "severe")
        for seed in range(40):
            response = respond(
                profile,
                StimulusEvent("free_play", 0),
                catalog,
                table,
                random.Random(seed),
            )
            chosen = [catalog.behaviors[bid] for bid in response.behaviors]
            for i, b1 in enumerate(chosen):
                for b2 in chosen[i + 1:]:
                    assert behaviors_compatible(b1, b2)

    def test_identical_for_fixed_seed(self):
        catalog = default_catalog()
        table = default_table()
        profile = ChildProfile("school_age", "phrases", "severe")
        stim = StimulusEvent("free_play", 3, intensity=0.9)
        r1 = respond(profile, stim, catalog, table, random.Random(77))
        r2 = respond(profile, stim, catalog, table, random.Random(77))
        assert r1 == r2

    def test_engagement_always_in_unit_interval(self):
        catalog = default_catalog()
        table = default_table()
        rng = random.Random(31)
        for severity in ("none", "mild", "moderate", "severe"):
            profile = ChildProfile("preschool", "none", severity)
            for _ in range(25):
                response = respond(
                    profile, StimulusEvent("free_play", 0), catalog, table, rng
                )
                assert 0.0 <= response.engagement <= 1.0

    def test_intensity_validated(self):
        with pytest.raises(ValueError):
            StimulusEvent("free_play", 0, intensity=1.5)


class TestSignals:
    def test_negative_gaze_reads_as_gaze_at_robot(self):
        catalog = default_catalog()
        assert signals_for(catalog.behaviors["b1_v2"]) == {SignalKind.GAZE_AT_ROBOT}

    def test_negative_speech_reads_as_hesitation(self):
        catalog = default_catalog()
        assert signals_for(catalog.behaviors["a2_v2"]) == {SignalKind.HESITATION}

    def test_catalog_annotation_wins(self):
        catalog = default_catalog()
        assert signals_for(catalog.behaviors["a2_v1"]) == {SignalKind.EXPLICIT_REQUEST}

    def test_clean_behavior_carries_no_signal(self):
        catalog = default_catalog()
        assert signals_for(catalog.behaviors["m1_v0"]) == set()


class TestEngagement:
    def test_zero_scores_give_full_engagement_up_to_noise(self):
        catalog = default_catalog()
        selected = [catalog.behaviors["a2_v0"], catalog.behaviors["b1_v0"]]
        value = engagement_score(selected, catalog, None, random.Random(2), noise=0.05)
        assert value >= 0.95

    def test_max_scores_give_low_engagement(self):
        catalog = default_catalog()
        selected = [catalog.behaviors["a2_v3"], catalog.behaviors["b1_v3"]]
        value = engagement_score(selected, catalog, None, random.Random(2), noise=0.05)
        assert value <= 0.05

    def test_intensity_scales_engagement(self):
        catalog = default_catalog()
        selected = [catalog.behaviors["a2_v0"]]
        half = engagement_score(selected, catalog, 0.5, random.Random(4), noise=0.0)
        assert half == pytest.approx(0.5)

    def test_pure_function_of_inputs(self):
        catalog = default_catalog()
        selected = [catalog.behaviors["b7_v1"]]
        a = engagement_score(selected, catalog, 0.8, random.Random(11), noise=0.05)
        b = engagement_score(selected, catalog, 0.8, random.Random(11), noise=0.05)
        assert a == b


class TestShippedTable:
    def test_severity_dominance_holds(self):
        assert severity_dominance_violations(default_table()) == []

    def test_covers_every_feature_and_combination(self):
        catalog = default_catalog()
        table = default_table()
        combos = [
            f"{s}|{l}|{a}"
            for s in table.categories["severity"]
            for l in table.categories["language_ability"]
            for a in table.categories["age_band"]
        ]
        for fid in catalog.features:
            assert set(table.cells[fid]) == set(combos)

    def test_cell_probabilities_normalized(self):
        table = default_table()
        for by_key in table.cells.values():
            for probs in by_key.values():
                assert abs(sum(probs) - 1.0) <= 1e-9
                assert all(p >= 0 for p in probs)


class TestTableLoader:
    def test_rejects_bad_sum(self):
        with pytest.raises(TableError, match="sum"):
            make_table({"F": {"none|low|young": [0.5, 0.2, 0.1, 0.1]}})

    def test_rejects_negative(self):
        with pytest.raises(TableError, match="negative"):
            make_table({"F": {"none|low|young": [1.2, -0.2, 0, 0]}})

    def test_rejects_unknown_keys(self):
        with pytest.raises(TableError, match="unknown"):
            table_from_dict({"categories": CATEGORIES, "cells": {}, "bogus": 1})

    def test_requires_all_category_fields(self):
        with pytest.raises(TableError):
            table_from_dict({"categories": {"severity": ["none"]}, "cells": {}})


def test_sample_value_respects_distribution_edges():
    rng = random.Random(0)
    assert sample_value([1.0, 0.0], rng) == 0
    assert sample_value([0.0, 1.0], rng) == 1
