"""Behavior catalog, channel calculus, compatibility graphs, behavior selection.

A behavior is an observable response annotated on four social channels (body
motion, gaze, speech, emotion/face). Each channel carries one of four marks:

    x - no mention of behavioral content on that channel
    a - specified absence of content
    p - presence of positive content
    n - presence of negative content

Two behaviors conflict when any aligned channel carries differing marks from
{a, p, n}; ``x`` never conflicts, and identical marks never conflict. A
compatibility graph for an activity connects non-conflicting behaviors of
distinct features, and a response is a pairwise-compatible choice of at most
one behavior per feature.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import CatalogError


class ChannelValue(Enum):
    X = "x"
    A = "a"
    P = "p"
    N = "n"

    @classmethod
    def parse(cls, symbol: str) -> "ChannelValue":
        try:
            return cls(symbol.lower())
        except ValueError:
            raise CatalogError(
                f"unknown channel symbol {symbol!r}; expected one of x, a, p, n"
            ) from None


_CHANNEL_NAMES = ("body_motion", "gaze", "speech", "emotion_face")


@dataclass(frozen=True)
class ChannelVector:
    """Four channel marks in canonical order (body, gaze, speech, emotion)."""

    body_motion: ChannelValue
    gaze: ChannelValue
    speech: ChannelValue
    emotion_face: ChannelValue

    @classmethod
    def parse(cls, text: str) -> "ChannelVector":
        if len(text) != 4:
            raise CatalogError(
                f"channel vector {text!r} must have exactly 4 symbols"
            )
        return cls(*(ChannelValue.parse(ch) for ch in text))

    def values(self) -> tuple[ChannelValue, ChannelValue, ChannelValue, ChannelValue]:
        return (self.body_motion, self.gaze, self.speech, self.emotion_face)

    def serialize(self) -> str:
        return "".join(v.value for v in self.values())


@dataclass(frozen=True)
class Feature:
    """A scored observation dimension (e.g. vocalization frequency)."""

    id: str
    name: str
    relevant_activities: frozenset[str]
    max_value: int = 3
    motor: bool = False


@dataclass(frozen=True)
class Behavior:
    id: str
    feature_id: str
    feature_value: int
    description: str
    channels: ChannelVector
    signals: tuple[str, ...] = ()


@dataclass(frozen=True)
class Activity:
    id: str
    name: str
    feature_ids: tuple[str, ...]


@dataclass(frozen=True)
class BehaviorCatalog:
    features: dict[str, Feature]
    behaviors: dict[str, Behavior]
    activities: dict[str, Activity]

    def behaviors_for(self, feature_id: str, feature_value: int) -> list[Behavior]:
        return [
            b
            for b in self.behaviors.values()
            if b.feature_id == feature_id and b.feature_value == feature_value
        ]

    def relevant_features(self, activity_id: str) -> tuple[str, ...]:
        if activity_id not in self.activities:
            raise CatalogError(f"unknown activity {activity_id!r}")
        return self.activities[activity_id].feature_ids


def channel_conflict(v1: ChannelValue, v2: ChannelValue) -> bool:
    """True iff the two marks cannot co-occur on one channel.

    Only differing marks from {a, p, n} conflict; ``x`` conflicts with
    nothing and identical marks never conflict.
    """
    if v1 is ChannelValue.X or v2 is ChannelValue.X:
        return False
    return v1 is not v2


def behaviors_compatible(b1: Behavior, b2: Behavior) -> bool:
    """True iff the behaviors may co-occur in one response.

    Same-feature pairs are never compatible; otherwise the pair is compatible
    exactly when no aligned channel conflicts.
    """
    if b1.feature_id == b2.feature_id:
        return False
    return not any(
        channel_conflict(c1, c2)
        for c1, c2 in zip(b1.channels.values(), b2.channels.values())
    )


@dataclass(frozen=True)
class CompatibilityGraph:
    """Nodes are behavior ids (one instantiated value per feature); an edge
    means the two behaviors are compatible and belong to distinct features."""

    nodes: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    feature_of: dict[str, str] = field(hash=False, compare=False, default_factory=dict)

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def features(self) -> list[str]:
        return sorted(set(self.feature_of.values()))


def build_graph(
    catalog: BehaviorCatalog,
    activity_id: str,
    instantiation: dict[str, int],
) -> CompatibilityGraph:
    """Build the compatibility graph for an activity's instantiated features.

    The instantiation must assign a value to every feature relevant to the
    activity, and each (feature, value) pair must match at least one catalog
    behavior.
    """
    relevant = catalog.relevant_features(activity_id)
    nodes: list[Behavior] = []
    for fid in relevant:
        if fid not in instantiation:
            raise CatalogError(
                f"instantiation missing relevant feature {fid!r} for activity {activity_id!r}"
            )
        matches = catalog.behaviors_for(fid, instantiation[fid])
        if not matches:
            raise CatalogError(
                f"no behavior matches feature {fid!r} at value {instantiation[fid]}"
            )
        nodes.extend(matches)

    nodes.sort(key=lambda b: b.id)
    edges = set()
    for b1, b2 in itertools.combinations(nodes, 2):
        if behaviors_compatible(b1, b2):
            edges.add(frozenset((b1.id, b2.id)))
    return CompatibilityGraph(
        nodes=tuple(b.id for b in nodes),
        edges=frozenset(edges),
        feature_of={b.id: b.feature_id for b in nodes},
    )


def select_compatible_set(graph: CompatibilityGraph, rng: random.Random) -> list[str]:
    """Pick one behavior per feature so all picks are pairwise adjacent.

    When a full one-per-feature clique exists the search returns one;
    otherwise it returns a maximum-cardinality pairwise-compatible subset,
    covering as many features as possible. Features are visited
    fewest-candidates-first and candidate order is shuffled with ``rng``, so
    ties resolve randomly but reproducibly for a fixed seed.

    Backtracking with branch-and-bound: a branch is cut when even choosing a
    behavior for every remaining feature cannot beat the best subset found.
    """
    if not graph.nodes:
        return []

    by_feature: dict[str, list[str]] = {}
    for node in graph.nodes:
        by_feature.setdefault(graph.feature_of[node], []).append(node)
    # Deterministic base order before shuffling.
    ordered = sorted(by_feature.items(), key=lambda kv: (len(kv[1]), kv[0]))
    candidates = []
    for _, nodes in ordered:
        nodes = sorted(nodes)
        rng.shuffle(nodes)
        candidates.append(nodes)

    n_features = len(candidates)
    best: list[str] = []

    def extend(idx: int, chosen: list[str]) -> None:
        nonlocal best
        if len(best) == n_features:
            return
        if len(chosen) + (n_features - idx) <= len(best):
            return
        if idx == n_features:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        for node in candidates[idx]:
            if all(graph.adjacent(node, c) for c in chosen):
                chosen.append(node)
                extend(idx + 1, chosen)
                chosen.pop()
        extend(idx + 1, chosen)

    extend(0, [])
    return best


_TOP_LEVEL_KEYS = {"features", "behaviors", "activities"}
_FEATURE_KEYS = {"name", "max_value", "motor"}
_BEHAVIOR_KEYS = {"feature", "value", "description", "channels", "signals"}
_ACTIVITY_KEYS = {"name", "features"}


def catalog_from_dict(raw: dict) -> BehaviorCatalog:
    """Construct and validate a catalog from parsed JSON.

    Rejects unknown keys so schema drift surfaces immediately. A feature's
    relevant activities are derived from the activity records rather than
    stored twice.
    """
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise CatalogError(f"unknown top-level catalog keys: {sorted(unknown)}")
    for key in _TOP_LEVEL_KEYS:
        if key not in raw:
            raise CatalogError(f"catalog missing required key {key!r}")

    activities: dict[str, Activity] = {}
    for aid, arec in raw["activities"].items():
        unknown = set(arec) - _ACTIVITY_KEYS
        if unknown:
            raise CatalogError(f"activity {aid!r} has unknown keys: {sorted(unknown)}")
        feature_ids = tuple(arec["features"])
        if not feature_ids:
            raise CatalogError(f"activity {aid!r} declares no relevant features")
        activities[aid] = Activity(id=aid, name=arec.get("name", aid), feature_ids=feature_ids)

    relevance: dict[str, set[str]] = {}
    for act in activities.values():
        for fid in act.feature_ids:
            relevance.setdefault(fid, set()).add(act.id)

    features: dict[str, Feature] = {}
    for fid, frec in raw["features"].items():
        unknown = set(frec) - _FEATURE_KEYS
        if unknown:
            raise CatalogError(f"feature {fid!r} has unknown keys: {sorted(unknown)}")
        if fid not in relevance:
            raise CatalogError(f"feature {fid!r} is not relevant to any activity")
        features[fid] = Feature(
            id=fid,
            name=frec.get("name", fid),
            relevant_activities=frozenset(relevance[fid]),
            max_value=int(frec.get("max_value", 3)),
            motor=bool(frec.get("motor", False)),
        )

    for act in activities.values():
        for fid in act.feature_ids:
            if fid not in features:
                raise CatalogError(
                    f"activity {act.id!r} references unknown feature {fid!r}"
                )

    behaviors: dict[str, Behavior] = {}
    referenced: set[str] = set()
    for bid, brec in raw["behaviors"].items():
        unknown = set(brec) - _BEHAVIOR_KEYS
        if unknown:
            raise CatalogError(f"behavior {bid!r} has unknown keys: {sorted(unknown)}")
        fid = brec["feature"]
        if fid not in features:
            raise CatalogError(f"behavior {bid!r} references unknown feature {fid!r}")
        value = int(brec["value"])
        if not 0 <= value <= features[fid].max_value:
            raise CatalogError(
                f"behavior {bid!r} value {value} outside [0, {features[fid].max_value}]"
                f" for feature {fid!r}"
            )
        behaviors[bid] = Behavior(
            id=bid,
            feature_id=fid,
            feature_value=value,
            description=brec.get("description", ""),
            channels=ChannelVector.parse(brec["channels"]),
            signals=tuple(brec.get("signals", ())),
        )
        referenced.add(fid)

    orphans = set(features) - referenced
    if orphans:
        raise CatalogError(f"features with no behaviors: {sorted(orphans)}")

    return BehaviorCatalog(features=features, behaviors=behaviors, activities=activities)


def load_catalog(path: str | Path) -> BehaviorCatalog:
    with open(path, encoding="utf-8") as fh:
        return catalog_from_dict(json.load(fh))
