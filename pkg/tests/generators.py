"""Seeded random graph and pattern generators shared across the test suite."""

from __future__ import annotations

import random

import numpy as np

from strucsense import PatternMatrix, build_structured_wdn


def random_tree_pattern(seed: int, n_min: int = 2, n_max: int = 50) -> PatternMatrix:
    """Random tree with a random {zero, star, unknown} diagonal."""
    rng = random.Random(seed)
    n = rng.randint(n_min, n_max)
    star, unknown = set(), set()
    for i in range(1, n):
        p = rng.randrange(i)
        star.add((i, p))
        star.add((p, i))
    for i in range(n):
        kind = rng.choice("0*?")
        if kind == "*":
            star.add((i, i))
        elif kind == "?":
            unknown.add((i, i))
    return PatternMatrix(n, n, frozenset(star), frozenset(unknown), symmetric=True)


def random_connected_pattern(seed: int, n_min: int = 2, n_max: int = 50) -> PatternMatrix:
    """Random connected graph (tree plus chords) with at least one extreme node.

    Diagonals are a star/unknown mix, the self-loop structure of linearized
    flow networks. A pendant node is attached when no degree-1 node came out
    of the draw.
    """
    rng = random.Random(seed)
    n = rng.randint(n_min, n_max)
    pairs = set()
    for i in range(1, n):
        p = rng.randrange(i)
        pairs.add((min(i, p), max(i, p)))
    for _ in range(rng.randint(0, max(1, n // 3))):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            pairs.add((min(i, j), max(i, j)))
    deg = [0] * n
    for (i, j) in pairs:
        deg[i] += 1
        deg[j] += 1
    if 1 not in deg:
        pairs.add((0, n))
        n += 1
    star, unknown = set(), set()
    for (i, j) in pairs:
        star.add((i, j))
        star.add((j, i))
    for i in range(n):
        if rng.random() < 0.5:
            star.add((i, i))
        else:
            unknown.add((i, i))
    return PatternMatrix(n, n, frozenset(star), frozenset(unknown), symmetric=True)


def random_wdn_pattern(seed: int, h_min: int = 2, h_max: int = 18) -> PatternMatrix:
    """Structured pattern of a random connected water network."""
    rng = random.Random(seed)
    n_h = rng.randint(h_min, h_max)
    links = [(rng.randrange(i), i) for i in range(1, n_h)]
    for _ in range(rng.randint(0, max(1, n_h // 2))):
        i, j = rng.randrange(n_h), rng.randrange(n_h)
        if i != j:
            links.append((i, j))
    deg = [0] * n_h
    for (i, j) in links:
        deg[i] += 1
        deg[j] += 1
    if 1 not in deg:
        links.append((0, n_h))
        n_h += 1
    inc = np.zeros((n_h, len(links)))
    for col, (i, j) in enumerate(links):
        inc[i, col] = 1.0
        inc[j, col] = -1.0
    return build_structured_wdn(inc)


def random_symmetric_pattern(seed: int, n_min: int = 2, n_max: int = 60) -> PatternMatrix:
    """Arbitrary symmetric pattern: random edges of both kinds, any diagonal."""
    rng = random.Random(seed)
    n = rng.randint(n_min, n_max)
    star, unknown = set(), set()
    target_edges = rng.randint(n - 1, 3 * n)
    for _ in range(target_edges):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        bucket = star if rng.random() < 0.8 else unknown
        if (i, j) not in star and (i, j) not in unknown:
            bucket.add((i, j))
            bucket.add((j, i))
    for i in range(n):
        kind = rng.choice("0*?")
        if kind == "*":
            star.add((i, i))
        elif kind == "?":
            unknown.add((i, i))
    return PatternMatrix(n, n, frozenset(star), frozenset(unknown), symmetric=True)


def random_sensor_rows(rng: random.Random, n: int, max_sensors: int | None = None) -> PatternMatrix:
    """Output pattern measuring a random subset of states, one star per row."""
    cap = max_sensors if max_sensors is not None else max(1, n // 3)
    k = rng.randint(0, cap)
    measured = sorted(rng.sample(range(n), k)) if k else []
    star = frozenset((row, s) for row, s in enumerate(measured))
    return PatternMatrix(len(measured), n, star, frozenset())
