"""Stochastic child model: descriptors in, compatible behaviors out.

High-level descriptors (age band, language ability, severity) select a
probability distribution over each feature's score from a data-driven
instantiation table. A response to a stimulus is produced by sampling scores,
building the activity's compatibility graph, and picking a pairwise
compatible behavior set, plus an engagement scalar and the policy-visible
signals carried by the chosen behaviors.

The shipped default table is synthetic and illustrative, not clinical; see
docs/data-formats.md for the file schema and the construction rule.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .behaviors import BehaviorCatalog, Behavior, ChannelValue, build_graph, select_compatible_set
from .errors import TableError
from .policy import SignalKind
from . import data_files

ENGAGEMENT_NOISE_DEFAULT = 0.05


@dataclass(frozen=True)
class ChildProfile:
    age_band: str
    language_ability: str
    severity: str


@dataclass(frozen=True)
class StimulusEvent:
    activity_id: str
    step_index: int
    intensity: float | None = None

    def __post_init__(self):
        if self.intensity is not None and not 0.0 <= self.intensity <= 1.0:
            raise ValueError(f"stimulus intensity {self.intensity} outside [0, 1]")


@dataclass(frozen=True)
class ChildResponse:
    behaviors: tuple[str, ...]
    engagement: float
    signals: frozenset[SignalKind]


def _cell_key(profile: ChildProfile) -> str:
    return f"{profile.severity}|{profile.language_ability}|{profile.age_band}"


@dataclass(frozen=True)
class InstantiationTable:
    """Per-(feature, severity, language, age) distributions over scores.

    ``cells`` maps feature id -> "severity|language|age" -> probability list
    indexed by feature value.
    """

    categories: dict[str, list[str]]
    cells: dict[str, dict[str, list[float]]]

    def validate_profile(self, profile: ChildProfile) -> None:
        for field_name, value in (
            ("age_band", profile.age_band),
            ("language_ability", profile.language_ability),
            ("severity", profile.severity),
        ):
            if value not in self.categories[field_name]:
                raise TableError(
                    f"profile {field_name} {value!r} not among declared categories"
                    f" {self.categories[field_name]}"
                )

    def distribution(self, feature_id: str, profile: ChildProfile) -> list[float]:
        key = _cell_key(profile)
        try:
            return self.cells[feature_id][key]
        except KeyError:
            raise TableError(
                f"no instantiation cell for feature {feature_id!r}"
                f" at categories {key!r}"
            ) from None


_TABLE_KEYS = {"categories", "cells"}
_CATEGORY_FIELDS = {"age_band", "language_ability", "severity"}


def table_from_dict(raw: dict) -> InstantiationTable:
    unknown = set(raw) - _TABLE_KEYS
    if unknown:
        raise TableError(f"unknown top-level table keys: {sorted(unknown)}")
    categories = raw.get("categories")
    if not categories or set(categories) != _CATEGORY_FIELDS:
        raise TableError(
            f"table must declare categories for exactly {sorted(_CATEGORY_FIELDS)}"
        )
    cells = raw.get("cells", {})
    for fid, by_key in cells.items():
        for key, probs in by_key.items():
            if any(p < 0 for p in probs):
                raise TableError(f"negative probability in cell ({fid!r}, {key!r})")
            if abs(sum(probs) - 1.0) > 1e-9:
                raise TableError(
                    f"cell ({fid!r}, {key!r}) probabilities sum to {sum(probs)!r}, not 1"
                )
    return InstantiationTable(categories=categories, cells=cells)


def load_table(path: str | Path) -> InstantiationTable:
    with open(path, encoding="utf-8") as fh:
        return table_from_dict(json.load(fh))


def default_table() -> InstantiationTable:
    return table_from_dict(json.loads(data_files.read_text("instantiation.json")))


def default_catalog() -> BehaviorCatalog:
    from .behaviors import catalog_from_dict

    return catalog_from_dict(json.loads(data_files.read_text("catalog.json")))


def sample_value(probs: list[float], rng: random.Random) -> int:
    """Draw an index from a probability vector with one uniform variate."""
    u = rng.random()
    acc = 0.0
    for idx, p in enumerate(probs):
        acc += p
        if u < acc:
            return idx
    return len(probs) - 1


def instantiate_features(
    profile: ChildProfile,
    activity_id: str,
    catalog: BehaviorCatalog,
    table: InstantiationTable,
    rng: random.Random,
) -> dict[str, int]:
    """Sample a score for every feature relevant to the activity."""
    table.validate_profile(profile)
    values: dict[str, int] = {}
    for fid in sorted(catalog.relevant_features(activity_id)):
        values[fid] = sample_value(table.distribution(fid, profile), rng)
    return values


def signals_for(behavior: Behavior) -> set[SignalKind]:
    """Policy-visible signals carried by one behavior.

    Explicit catalog annotations win; otherwise negative content on the gaze
    channel reads as a look toward the robot and negative content on the
    speech channel reads as hesitation.
    """
    if behavior.signals:
        return {SignalKind(s) for s in behavior.signals}
    derived: set[SignalKind] = set()
    if behavior.channels.gaze is ChannelValue.N:
        derived.add(SignalKind.GAZE_AT_ROBOT)
    if behavior.channels.speech is ChannelValue.N:
        derived.add(SignalKind.HESITATION)
    return derived


def engagement_score(
    selected: list[Behavior],
    catalog: BehaviorCatalog,
    intensity: float | None,
    rng: random.Random,
    noise: float = ENGAGEMENT_NOISE_DEFAULT,
) -> float:
    """1 - mean(score / feature max), scaled by intensity, plus bounded noise.

    The noise term is uniform on [-noise, +noise]; the result is clamped to
    [0, 1]. Always draws from ``rng`` so the stream stays aligned.
    """
    if selected:
        ratio = sum(
            b.feature_value / catalog.features[b.feature_id].max_value for b in selected
        ) / len(selected)
    else:
        ratio = 0.0
    scale = 1.0 if intensity is None else intensity
    raw = scale * (1.0 - ratio) + rng.uniform(-noise, noise)
    return max(0.0, min(1.0, raw))


def respond(
    profile: ChildProfile,
    stimulus: StimulusEvent,
    catalog: BehaviorCatalog,
    table: InstantiationTable,
    rng: random.Random,
    engagement_noise: float = ENGAGEMENT_NOISE_DEFAULT,
) -> ChildResponse:
    """One stimulus-response cycle of the simulated child."""
    values = instantiate_features(profile, stimulus.activity_id, catalog, table, rng)
    graph = build_graph(catalog, stimulus.activity_id, values)
    chosen_ids = select_compatible_set(graph, rng)
    chosen = [catalog.behaviors[bid] for bid in sorted(chosen_ids)]
    signals: set[SignalKind] = set()
    for behavior in chosen:
        signals |= signals_for(behavior)
    engagement = engagement_score(
        chosen, catalog, stimulus.intensity, rng, noise=engagement_noise
    )
    return ChildResponse(
        behaviors=tuple(b.id for b in chosen),
        engagement=engagement,
        signals=frozenset(signals),
    )


def severity_dominance_violations(table: InstantiationTable) -> list[str]:
    """Check first-order stochastic dominance of scores across severities.

    For every feature and fixed (language, age), a higher severity's score
    distribution must dominate a lower one's. Returns human-readable
    violation descriptions; empty means the table is severity-monotone.
    """
    violations = []
    severities = table.categories["severity"]
    for fid, by_key in sorted(table.cells.items()):
        for lang in table.categories["language_ability"]:
            for age in table.categories["age_band"]:
                dists = []
                for sev in severities:
                    key = f"{sev}|{lang}|{age}"
                    if key in by_key:
                        dists.append((sev, by_key[key]))
                for (s_lo, d_lo), (s_hi, d_hi) in zip(dists, dists[1:]):
                    cdf_lo = cdf_hi = 0.0
                    for k in range(max(len(d_lo), len(d_hi)) - 1):
                        cdf_lo += d_lo[k] if k < len(d_lo) else 0.0
                        cdf_hi += d_hi[k] if k < len(d_hi) else 0.0
                        if cdf_hi > cdf_lo + 1e-9:
                            violations.append(
                                f"{fid} ({lang}, {age}): severity {s_hi} does not"
                                f" dominate {s_lo} at value {k}"
                            )
                            break
    return violations
