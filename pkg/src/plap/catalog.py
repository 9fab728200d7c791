"""Named graphs used throughout the examples and tests."""

from __future__ import annotations

import re

import numpy as np

from .graph import Graph, GraphInputError

G6_EDGES = ((3, 4), (4, 1), (1, 2), (2, 4), (1, 3), (2, 3), (5, 6), (1, 6), (1, 5), (2, 5))
SEVEN_EDGE_EDGES = ((1, 2), (1, 3), (1, 4), (3, 4), (2, 6), (2, 5), (5, 6))
FIVE_VERTEX_EDGES = ((1, 3), (1, 2), (2, 3), (3, 4), (4, 5))


def g6() -> Graph:
    """Six-vertex graph with a homological eigenvalue outside the min-max list."""
    return Graph(6, G6_EDGES)


def seven_edge() -> Graph:
    """Six-vertex graph where an eigenvector combination is not a critical point."""
    return Graph(6, SEVEN_EDGE_EDGES)


def five_vertex() -> Graph:
    """Triangle with a pendant path; carries a non-homological eigenvalue 1/2."""
    return Graph(5, FIVE_VERTEX_EDGES)


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphInputError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star(n: int) -> Graph:
    return Graph(n, [(1, j) for j in range(2, n + 1)])


def many_eigenvalues(n: int) -> Graph:
    """Even ``n >= 8``: edges ``i + j <= n + 1`` plus ``{n, n - i}`` for ``1 <= i <= n/2 - 2``."""
    if n < 8 or n % 2:
        raise GraphInputError("this family is defined for even n >= 8")
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if i + j <= n + 1]
    edges += [(n, n - i) for i in range(1, n // 2 - 1)]
    return Graph(n, edges)


_FIXED = {"g6": g6, "seven_edge": seven_edge, "five": five_vertex, "p6": lambda: path(6)}
_FAMILIES = {"path": path, "p": path, "cycle": cycle, "c": cycle, "complete": complete, "k": complete,
             "star": star, "more": many_eigenvalues}


def by_name(name: str) -> Graph:
    """Resolve names like ``g6``, ``p6``, ``seven_edge``, ``five``, ``c8``, ``k5``, ``path7``, ``more8``."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    m = re.fullmatch(r"([a-z]+)(\d+)", key)
    if m and m.group(1) in _FAMILIES:
        return _FAMILIES[m.group(1)](int(m.group(2)))
    raise GraphInputError(f"unknown catalog graph {name!r}; try one of: {', '.join(catalog_names())}")


def catalog_names() -> list[str]:
    return ["g6", "p6", "seven_edge", "five", "cN", "kN", "pathN", "starN", "moreN"]


def standard_catalog() -> dict[str, Graph]:
    """The small connected graphs every exact check runs on."""
    out = {"g6": g6(), "p6": path(6), "seven_edge": seven_edge(), "five": five_vertex()}
    for n in (3, 4, 5, 6):
        out[f"c{n}"] = cycle(n)
        out[f"k{n}"] = complete(n)
    out["star5"] = star(5)
    out["path4"] = path(4)
    return out


def random_connected(n: int, rng: np.random.Generator, density: float | None = None) -> Graph:
    """Random spanning tree plus independent extra edges."""
    if density is None:
        density = float(rng.uniform(0.1, 0.7))
    perm = rng.permutation(n) + 1
    edges = set()
    for k in range(1, n):
        j = int(rng.integers(0, k))
        a, b = int(perm[k]), int(perm[j])
        edges.add((min(a, b), max(a, b)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < density:
                edges.add((i, j))
    return Graph(n, edges)


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    return random_connected(n, rng, density=0.0)
