"""Exact kernels: rationals, GF(2) linear algebra, bounded circulations, LP feasibility.

Every p = 1 quantity in the package flows through :class:`fractions.Fraction`;
nothing in this module ever rounds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class CompositionNonzeroError(ValueError):
    """Raised when two boundary maps do not compose to zero."""


def frac_str(q: Fraction | int) -> str:
    """Serialize a rational as ``"num/den"`` (always with a denominator)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text.strip())


# --------------------------------------------------------------------------
# GF(2)


def _reduce_into(basis: dict[int, int], v: int) -> int:
    """Reduce ``v`` against a basis keyed by leading bit; returns the remainder."""
    while v:
        top = v.bit_length() - 1
        b = basis.get(top)
        if b is None:
            return v
        v ^= b
    return 0


class GF2Basis:
    """Incremental echelon basis of GF(2) vectors stored as Python ints."""

    __slots__ = ("_rows",)

    def __init__(self, vectors: Iterable[int] = ()) -> None:
        self._rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def add(self, v: int) -> bool:
        """Insert ``v``; True if it enlarged the span."""
        r = _reduce_into(self._rows, v)
        if r:
            self._rows[r.bit_length() - 1] = r
            return True
        return False

    def contains(self, v: int) -> bool:
        return _reduce_into(self._rows, v) == 0

    def __len__(self) -> int:
        return len(self._rows)


@dataclass(frozen=True)
class GF2Matrix:
    """Dense GF(2) matrix; each row is an int whose bit ``j`` is entry ``(i, j)``."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != self.rows:
            raise ValueError("row count mismatch")
        limit = 1 << self.cols
        if any(r < 0 or r >= limit for r in self.bits):
            raise ValueError("row has bits outside the column range")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> GF2Matrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> GF2Matrix:
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        bits = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            v = 0
            for j, e in enumerate(row):
                if e % 2:
                    v |= 1 << j
            bits.append(v)
        return cls(rows, cols, tuple(bits))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Iterable[int]]) -> GF2Matrix:
        """Build from per-column lists of nonzero row indices (repeats cancel)."""
        bits = [0] * rows
        for j, col in enumerate(columns):
            for i in col:
                bits[i] ^= 1 << j
        return cls(rows, len(columns), tuple(bits))

    def get(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.bits]

    def transpose(self) -> GF2Matrix:
        out = [0] * self.cols
        for i, r in enumerate(self.bits):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return GF2Matrix(self.cols, self.rows, tuple(out))

    def matmul(self, other: GF2Matrix) -> GF2Matrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.bits:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.bits[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return GF2Matrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.bits)


def gf2_rank(m: GF2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination on packed rows."""
    return len(GF2Basis(m.bits))


def gf2_quotient_dim(boundary_in: GF2Matrix, boundary_out: GF2Matrix) -> int:
    """``dim ker(boundary_out) - rank(boundary_in)``, the GF(2) Betti number.

    ``boundary_in`` maps C_{q+1} -> C_q and ``boundary_out`` maps C_q -> C_{q-1},
    so ``boundary_in.rows == boundary_out.cols == dim C_q``.
    """
    if boundary_in.rows != boundary_out.cols:
        raise ValueError("boundary maps do not share the middle chain group")
    if not boundary_out.matmul(boundary_in).is_zero():
        raise CompositionNonzeroError("boundary_out . boundary_in != 0")
    return boundary_out.cols - gf2_rank(boundary_out) - gf2_rank(boundary_in)


# --------------------------------------------------------------------------
# Bounded circulations


@dataclass(frozen=True)
class CirculationProblem:
    """Flows on arcs with bounds; node net outflow must lie in an interval.

    ``balances[v] = (lo, hi)`` constrains ``sum(out-flow) - sum(in-flow)`` at ``v``.
    Lower bounds may be negative (a negative flow on ``t -> h`` runs ``h -> t``).
    """

    n_nodes: int
    arcs: tuple[tuple[int, int, Fraction, Fraction], ...]
    balances: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if len(self.balances) != self.n_nodes:
            raise ValueError("one balance interval per node is required")
        for t, h, lo, hi in self.arcs:
            if not (0 <= t < self.n_nodes and 0 <= h < self.n_nodes):
                raise ValueError(f"arc ({t}, {h}) out of range")
            if lo > hi:
                raise ValueError("arc lower bound exceeds upper bound")
        for lo, hi in self.balances:
            if lo > hi:
                raise ValueError("balance interval is empty")

    def check(self, flow: Sequence[Fraction]) -> bool:
        """Exact membership test for a candidate arc assignment."""
        if len(flow) != len(self.arcs):
            return False
        net = [Fraction(0)] * self.n_nodes
        for (t, h, lo, hi), f in zip(self.arcs, flow):
            if not lo <= f <= hi:
                return False
            net[t] += f
            net[h] -= f
        return all(lo <= b <= hi for b, (lo, hi) in zip(net, self.balances))


@dataclass(frozen=True)
class CirculationResult:
    feasible: bool
    flow: tuple[Fraction, ...] | None = None


class _FlowNet:
    """Residual network for exact max-flow (Edmonds-Karp)."""

    def __init__(self, n: int) -> None:
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[Fraction] = []

    def add(self, u: int, v: int, c: Fraction) -> int:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(Fraction(0))
        return len(self.to) - 2

    def maxflow(self, s: int, t: int) -> Fraction:
        total = Fraction(0)
        while True:
            prev = [-1] * len(self.adj)
            prev[s] = -2
            queue = deque([s])
            while queue and prev[t] == -1:
                u = queue.popleft()
                for e in self.adj[u]:
                    v = self.to[e]
                    if prev[v] == -1 and self.cap[e] > 0:
                        prev[v] = e
                        queue.append(v)
            if prev[t] == -1:
                return total
            push = None
            v = t
            while v != s:
                e = prev[v]
                push = self.cap[e] if push is None else min(push, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = prev[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            total += push


def circulation_feasible(problem: CirculationProblem) -> CirculationResult:
    """Decide feasibility exactly and return a witness flow when one exists.

    Node intervals become arcs from an extra hub node, then lower bounds are
    shifted out and the standard super-source/super-sink max-flow test runs on
    rational capacities.
    """
    n = problem.n_nodes
    hub = n
    arcs = list(problem.arcs)
    # hub -> v carrying b_v gives out(v) - in(v) = b_v at v, and the hub balances.
    arcs += [(hub, v, lo, hi) for v, (lo, hi) in enumerate(problem.balances)]
    size = n + 1
    src, snk = size, size + 1
    net = _FlowNet(size + 2)
    excess = [Fraction(0)] * size
    handles = []
    for t, h, lo, hi in arcs:
        handles.append(net.add(t, h, Fraction(hi) - Fraction(lo)))
        excess[h] += lo
        excess[t] -= lo
    need = Fraction(0)
    for v, e in enumerate(excess):
        if e > 0:
            net.add(src, v, e)
            need += e
        elif e < 0:
            net.add(v, snk, -e)
    if net.maxflow(src, snk) != need:
        return CirculationResult(False)
    flow = []
    for (t, h, lo, hi), e in zip(arcs[: len(problem.arcs)], handles):
        flow.append(Fraction(lo) + net.cap[e ^ 1])
    witness = tuple(flow)
    if not problem.check(witness):  # pragma: no cover - would be a solver bug
        raise AssertionError("circulation witness failed its own check")
    return CirculationResult(True, witness)


# --------------------------------------------------------------------------
# Exact LP feasibility


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of ``A x = b, x >= 0``.

    When feasible, ``point`` solves the system. Otherwise ``farkas`` is a
    vector ``y`` with ``A^T y <= 0`` and ``b . y > 0``.
    """

    feasible: bool
    point: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None


@dataclass
class _Tableau:
    rows: list[list[Fraction]]
    basis: list[int]
    obj: list[Fraction] = field(default_factory=list)

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        inv = 1 / row[c]
        row[:] = [v * inv for v in row]
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                f = other[c]
                other[:] = [a - f * b for a, b in zip(other, row)]
        if self.obj[c]:
            f = self.obj[c]
            self.obj[:] = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[r] = c


def lp_feasible(a_eq: Sequence[Sequence[Fraction | int]], b_eq: Sequence[Fraction | int]) -> FeasibilityResult:
    """Phase-one simplex with Bland's rule over the rationals."""
    m = len(a_eq)
    n = len(a_eq[0]) if m else 0
    sign = [(-1 if Fraction(b) < 0 else 1) for b in b_eq]
    rows = []
    for i in range(m):
        s = sign[i]
        row = [Fraction(v) * s for v in a_eq[i]]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(Fraction(b_eq[i]) * s)
        rows.append(row)
    width = n + m + 1
    # reduced costs of min sum(artificials), expressed with artificials basic
    obj = [Fraction(0)] * width
    for row in rows:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    tab = _Tableau(rows, list(range(n, n + m)), obj)
    while True:
        enter = next((j for j in range(n + m) if tab.obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, row in enumerate(tab.rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                key = (ratio, tab.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - phase one is bounded below by 0
            raise AssertionError("unbounded phase-one problem")
        tab.pivot(best[1], enter)
    if tab.obj[-1] != 0:
        # duals y_i = c_B B^{-1}: artificial columns hold B^{-1}
        y = []
        for i in range(m):
            col = n + i
            yi = sum((tab.rows[r][col] for r in range(m) if tab.basis[r] >= n), Fraction(0))
            y.append(yi * sign[i])
        return FeasibilityResult(False, farkas=tuple(y))
    x = [Fraction(0)] * n
    for r, bvar in enumerate(tab.basis):
        if bvar < n:
            x[bvar] = tab.rows[r][-1]
    return FeasibilityResult(True, point=tuple(x))


# --------------------------------------------------------------------------
# symmetric inertia


def symmetric_inertia(matrix: Sequence[Sequence[Fraction | int]]) -> tuple[int, int, int]:
    """``(negative, zero, positive)`` eigenvalue counts of a rational symmetric matrix.

    Congruence by exact symmetric elimination (Sylvester's law of inertia),
    using a 2x2 pivot ``[[0, a], [a, 0]]`` when the remaining diagonal vanishes.
    """
    s = [[Fraction(v) for v in row] for row in matrix]
    m = len(s)
    if any(len(row) != m for row in s):
        raise ValueError("matrix must be square")
    for i in range(m):
        for j in range(i):
            if s[i][j] != s[j][i]:
                raise ValueError("matrix must be symmetric")
    neg = pos = 0
    idx = list(range(m))
    while idx:
        piv = next((i for i in idx if s[i][i] != 0), None)
        if piv is not None:
            d = s[piv][piv]
            if d > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in idx if i != piv]
            for i in rest:
                if s[i][piv]:
                    f = s[i][piv] / d
                    for j in rest:
                        s[i][j] -= f * s[piv][j]
            idx = rest
            continue
        pair = next(((i, j) for i in idx for j in idx if i < j and s[i][j] != 0), None)
        if pair is None:
            break
        i0, j0 = pair
        a = s[i0][j0]
        pos += 1
        neg += 1
        rest = [i for i in idx if i not in pair]
        # Schur complement with B^{-1} = [[0, 1/a], [1/a, 0]]
        ci = {i: s[i][i0] for i in rest}
        cj = {i: s[i][j0] for i in rest}
        for i in rest:
            for j in rest:
                s[i][j] -= (ci[i] * cj[j] + cj[i] * ci[j]) / a
        idx = rest
    zero = m - neg - pos
    return neg, zero, pos
