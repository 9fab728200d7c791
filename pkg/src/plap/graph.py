"""Simple graphs on vertices 1..n, set pairs, and Rayleigh quotients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphInputError(ValueError):
    """Malformed graph description (bad vertex index, loop, parse failure)."""


class ZeroVectorError(ValueError):
    pass


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of a set of 1-based vertices (bit ``i-1`` for vertex ``i``)."""
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def members(mask: int) -> list[int]:
    """Sorted 1-based vertices of a bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, order=True)
class SetPair:
    """Disjoint pair ``(A, B)`` of vertex bitmasks, not both empty; realizes ``1_A - 1_B``."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a & self.b:
            raise ValueError("set pair halves must be disjoint")
        if not (self.a | self.b):
            raise ValueError("set pair must be nonempty")

    @classmethod
    def of(cls, a: Iterable[int], b: Iterable[int] = ()) -> SetPair:
        return cls(mask_of(a), mask_of(b))

    @property
    def support(self) -> int:
        return self.a | self.b

    def antipode(self) -> SetPair:
        return SetPair(self.b, self.a)

    def precedes(self, other: SetPair) -> bool:
        """Componentwise inclusion ``A ⊆ A'`` and ``B ⊆ B'`` (non-strict)."""
        return (self.a & ~other.a) == 0 and (self.b & ~other.b) == 0

    def vector(self, n: int) -> np.ndarray:
        x = np.zeros(n)
        for i in members(self.a):
            x[i - 1] = 1.0
        for i in members(self.b):
            x[i - 1] = -1.0
        return x

    def __str__(self) -> str:
        return f"({members(self.a)}, {members(self.b)})"


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph with vertices ``1..n``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]]) -> None:
        if n < 1:
            raise GraphInputError("a graph needs at least one vertex")
        seen = set()
        for e in edges:
            i, j = (int(e[0]), int(e[1]))
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphInputError(f"edge ({i}, {j}) outside 1..{n}")
            if i == j:
                raise GraphInputError(f"loop at vertex {i}")
            seen.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for i, j in self.edges:
            d[i - 1] += 1
            d[j - 1] += 1
        return tuple(d)

    def degree(self, i: int) -> int:
        return self.degrees[i - 1]

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        nb = [0] * self.n
        for i, j in self.edges:
            nb[i - 1] |= 1 << (j - 1)
            nb[j - 1] |= 1 << (i - 1)
        return tuple(nb)

    def neighbors(self, i: int) -> list[int]:
        return members(self.neighbor_masks[i - 1])

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def edge_index(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based endpoint arrays ``(I, J)`` with ``I < J``."""
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        arr = np.asarray(self.edges, dtype=np.int64) - 1
        return arr[:, 0].copy(), arr[:, 1].copy()

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i - 1, j - 1] = A[j - 1, i - 1] = 1.0
        return A

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.neighbor_masks[i - 1] >> (j - 1) & 1)

    def components(self, mask: int | None = None) -> list[int]:
        """Connected components (as bitmasks) of the subgraph induced by ``mask``."""
        if mask is None:
            mask = self.full_mask
        out = []
        rest = mask
        while rest:
            comp = rest & -rest
            frontier = comp
            while frontier:
                grow = 0
                f = frontier
                while f:
                    low = f & -f
                    grow |= self.neighbor_masks[low.bit_length() - 1]
                    f ^= low
                grow &= mask & ~comp
                comp |= grow
                frontier = grow
            out.append(comp)
            rest &= ~comp
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == self.n - 1

    def to_edge_list_text(self) -> str:
        lines = [str(self.n)] + [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse ``n`` followed by ``i j`` lines; ``#`` starts a comment."""
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.append((lineno, line.split()))
    if not tokens:
        raise GraphInputError("empty edge list")
    lineno, head = tokens[0]
    if len(head) != 1:
        raise GraphInputError(f"line {lineno}: expected the vertex count alone")
    try:
        n = int(head[0])
        edges = []
        for lineno, parts in tokens[1:]:
            if len(parts) != 2:
                raise GraphInputError(f"line {lineno}: expected 'i j'")
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        if isinstance(exc, GraphInputError):
            raise
        raise GraphInputError(f"line {lineno}: {exc}") from None
    return Graph(n, edges)


def read_edge_list(path: str | Path) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphInputError(f"cannot read {path}: {exc}") from None
    return parse_edge_list(text)


def volume(g: Graph, a: int) -> int:
    """Sum of degrees over the vertices of bitmask ``a``."""
    return sum(g.degrees[i - 1] for i in members(a))


def edge_boundary(g: Graph, a: int) -> int:
    """Number of edges with exactly one endpoint in ``a``."""
    return sum(((a >> (i - 1)) ^ (a >> (j - 1))) & 1 for i, j in g.edges)


def f1_pair(g: Graph, s: SetPair) -> Fraction:
    """Exact ``(|∂A| + |∂B|) / vol(A ∪ B)``, i.e. F_1 at ``1_A - 1_B``."""
    vol = volume(g, s.support)
    if vol == 0:
        raise GraphInputError("F_1 is undefined on a support of isolated vertices")
    return Fraction(edge_boundary(g, s.a) + edge_boundary(g, s.b), vol)


def _nonzero(x: np.ndarray) -> None:
    if not np.any(x):
        raise ZeroVectorError("x must be nonzero")


def rayleigh_fp(g: Graph, x: Sequence[float], p: float) -> float:
    """``sum_E |x_i - x_j|^p / sum_V deg(i) |x_i|^p``."""
    x = np.asarray(x, dtype=float)
    _nonzero(x)
    I, J = g.edge_index
    num = float(np.sum(np.abs(x[I] - x[J]) ** p))
    den = float(np.sum(np.asarray(g.degrees) * np.abs(x) ** p))
    if den == 0.0:
        return 0.0
    return num / den


def strong_nodal_count(g: Graph, x: Sequence[float]) -> int:
    """Components of the positive support plus components of the negative support."""
    x = np.asarray(x, dtype=float)
    _nonzero(x)
    pos = mask_of(i + 1 for i in range(g.n) if x[i] > 0)
    neg = mask_of(i + 1 for i in range(g.n) if x[i] < 0)
    return len(g.components(pos)) + len(g.components(neg))
