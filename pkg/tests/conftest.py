import random

import pytest

from theraloop.behaviors import (
    BehaviorCatalog,
    CompatibilityGraph,
    build_graph,
    catalog_from_dict,
)

CHANNEL_SYMBOLS = "xapn"


def random_catalog_dict(rng: random.Random, max_features: int = 6, max_behaviors: int = 5) -> dict:
    """A random single-activity catalog dict with random channel vectors."""
    n_features = rng.randint(1, max_features)
    features = {}
    behaviors = {}
    for fi in range(n_features):
        fid = f"F{fi}"
        features[fid] = {"name": fid}
        for bi in range(rng.randint(1, max_behaviors)):
            channels = "".join(rng.choice(CHANNEL_SYMBOLS) for _ in range(4))
            behaviors[f"{fid.lower()}_b{bi}"] = {
                "feature": fid,
                "value": 0,
                "description": "",
                "channels": channels,
            }
    return {
        "features": features,
        "behaviors": behaviors,
        "activities": {"act": {"name": "act", "features": sorted(features)}},
    }


def random_graph(rng: random.Random, **kwargs) -> tuple[BehaviorCatalog, CompatibilityGraph]:
    catalog = catalog_from_dict(random_catalog_dict(rng, **kwargs))
    instantiation = {fid: 0 for fid in catalog.features}
    return catalog, build_graph(catalog, "act", instantiation)


def brute_force_max_compatible(graph: CompatibilityGraph) -> int:
    """Exhaustive maximum over all at-most-one-per-feature selections.

    Plain recursion with no ordering heuristics or bounding, kept independent
    of the production search on purpose.
    """
    by_feature: dict[str, list[str]] = {}
    for node in graph.nodes:
        by_feature.setdefault(graph.feature_of[node], []).append(node)
    feature_ids = sorted(by_feature)

    best = 0

    def recurse(i: int, chosen: list[str]) -> None:
        nonlocal best
        if i == len(feature_ids):
            best = max(best, len(chosen))
            return
        recurse(i + 1, chosen)
        for node in by_feature[feature_ids[i]]:
            if all(graph.adjacent(node, c) for c in chosen):
                chosen.append(node)
                recurse(i + 1, chosen)
                chosen.pop()

    recurse(0, [])
    return best


def assert_selection_sound(graph: CompatibilityGraph, selection: list[str]) -> None:
    seen_features = set()
    for node in selection:
        fid = graph.feature_of[node]
        assert fid not in seen_features, f"two picks for feature {fid}"
        seen_features.add(fid)
    for i, a in enumerate(selection):
        for b in selection[i + 1:]:
            assert graph.adjacent(a, b), f"incompatible pair ({a}, {b}) selected"


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
