"""Shared test helpers: independent brute-force oracles and builders.

The brute-force implementations here deliberately avoid the package's
indexed query path so they can serve as independent references.
"""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from groupsight import PlantedFamily


def brute_truth(planted, nodes) -> bool:
    """Reference containment check: any planted set inside `nodes`."""
    present = set(nodes)
    return any(set(p) <= present for p in planted)


def brute_least_defective_prefix(planted, d, s) -> int | None:
    """Least 1-based m with d + s[:m] containing a planted set."""
    for m in range(1, len(s) + 1):
        if brute_truth(planted, list(d) + list(s[:m])):
            return m
    return None


def brute_is_antichain(planted) -> bool:
    """Pairwise subset test over all ordered pairs of distinct sets."""
    sets = [set(p) for p in planted]
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a <= b:
                return False
    return True


def make_family(universe_size, planted, seed=None) -> PlantedFamily:
    """Family from explicit sets (canonicalized, antichain-checked)."""
    canon = tuple(tuple(sorted(p)) for p in planted)
    assert brute_is_antichain(canon), "test construction must be an antichain"
    return PlantedFamily(universe_size=universe_size, planted=canon, seed=seed)


def random_antichain_family(rng: random.Random, universe_size, max_sets=20,
                            sizes=(2, 3, 4)) -> PlantedFamily:
    """Small random antichain family built by rejection, for property tests."""
    chosen: list[tuple[int, ...]] = []
    for _ in range(rng.randrange(max_sets + 1)):
        k = rng.choice(sizes)
        if k > universe_size:
            continue
        cand = tuple(sorted(rng.sample(range(universe_size), k)))
        sets = [set(p) for p in chosen]
        c = set(cand)
        if any(p <= c or c <= p for p in sets):
            continue
        chosen.append(cand)
    return make_family(universe_size, chosen)


@pytest.fixture
def pyrandom():
    return random.Random(0xC0FFEE)


def all_subsets(nodes, k_min, k_max):
    for k in range(k_min, k_max + 1):
        yield from combinations(sorted(nodes), k)
