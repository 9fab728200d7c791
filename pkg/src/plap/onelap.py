"""The graph 1-Laplacian: operator image, exact eigenpair certificates, spectra, criticality."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .complex import ComplexSizeError
from .exact import CirculationProblem, circulation_feasible, lp_feasible
from .graph import Graph, SetPair, ZeroVectorError, f1_pair, mask_of

CRITICALITY_SEED = 0x1F2E3D4C
PATTERN_CAP = 10**6
SEARCH_CAP = 10  # 3^n candidates stay cheap well past the K_n homology cap


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _rational_vector(x: Sequence) -> tuple[Fraction, ...]:
    out = []
    for v in x:
        if isinstance(v, float):
            v = Fraction(v)
        out.append(Fraction(v))
    if not any(out):
        raise ZeroVectorError("x must be nonzero")
    return tuple(out)


# --------------------------------------------------------------------------
# operator image


@dataclass(frozen=True)
class Zonotope:
    """``offset + sum_k [-g_k, g_k]`` with segment generators ``g_k = e_i - e_j``.

    ``offset`` is the fixed part and also the center; ``generators`` lists the
    tied edges ``(i, j)`` (1-based) each contributing the segment between
    ``e_i - e_j`` and ``e_j - e_i``.
    """

    offset: tuple[int, ...]
    generators: tuple[tuple[int, int], ...]

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=float)

    def generator_vectors(self) -> np.ndarray:
        n = len(self.offset)
        G = np.zeros((len(self.generators), n))
        for k, (i, j) in enumerate(self.generators):
            G[k, i - 1] = 1.0
            G[k, j - 1] = -1.0
        return G


def delta1_image(g: Graph, x: Sequence) -> Zonotope:
    """Image of ``x`` under the set-valued 1-Laplacian (without the degree side)."""
    offset = [0] * g.n
    gens = []
    for i, j in g.edges:
        s = _sign(x[i - 1] - x[j - 1])
        if s == 0:
            gens.append((i, j))
        else:
            offset[i - 1] += s
            offset[j - 1] -= s
    return Zonotope(tuple(offset), tuple(gens))


# --------------------------------------------------------------------------
# eigenpair certificates


@dataclass(frozen=True)
class EigenCertificate:
    """Exact witness for ``0 ∈ Δ_1 x - λ D Sgn(x)``.

    ``witness[(i, j)]`` is ``z_ij`` for each edge with ``i < j``; ``z_ji = -z_ij``.
    ``slack[i]`` is ``(sum_j z_ij - lo_i, hi_i - sum_j z_ij)`` for the node interval.
    """

    lam: Fraction
    x: tuple[Fraction, ...]
    witness: dict[tuple[int, int], Fraction]
    slack: tuple[tuple[Fraction, Fraction], ...]

    def recheck(self, g: Graph) -> bool:
        """Substitute the witness back into the defining inclusions."""
        total = [Fraction(0)] * g.n
        for (i, j), z in self.witness.items():
            s = _sign(self.x[i - 1] - self.x[j - 1])
            if s and z != s:
                return False
            if not -1 <= z <= 1:
                return False
            total[i - 1] += z
            total[j - 1] -= z
        for i in range(g.n):
            d = g.degrees[i]
            s = _sign(self.x[i])
            if s:
                if total[i] != self.lam * d * s:
                    return False
            elif abs(total[i]) > self.lam * d:
                return False
        return True


def eigen_circulation(g: Graph, lam: Fraction, x: Sequence[Fraction]) -> CirculationProblem:
    """Encode ``z_ij ∈ Sgn(x_i - x_j)``, ``sum_j z_ij ∈ λ deg(i) Sgn(x_i)`` as a circulation."""
    arcs = []
    for i, j in g.edges:
        s = _sign(x[i - 1] - x[j - 1])
        lo, hi = (Fraction(s), Fraction(s)) if s else (Fraction(-1), Fraction(1))
        arcs.append((i - 1, j - 1, lo, hi))
    balances = []
    for i in range(g.n):
        r = lam * g.degrees[i]
        s = _sign(x[i])
        balances.append((r * s, r * s) if s else (-r, r))
    return CirculationProblem(g.n, tuple(arcs), tuple(balances))


def verify_eigenpair(g: Graph, lam: Fraction | int | str, x: Sequence) -> EigenCertificate | None:
    """Exact certificate that ``(λ, x)`` is a 1-Laplacian eigenpair, or None."""
    lam = Fraction(lam)
    xr = _rational_vector(x)
    if lam < 0:
        return None
    problem = eigen_circulation(g, lam, xr)
    result = circulation_feasible(problem)
    if not result.feasible:
        return None
    witness = {(i, j): z for (i, j), z in zip(g.edges, result.flow)}
    net = [Fraction(0)] * g.n
    for (i, j), z in witness.items():
        net[i - 1] += z
        net[j - 1] -= z
    slack = tuple((net[i] - lo, hi - net[i]) for i, (lo, hi) in enumerate(problem.balances))
    return EigenCertificate(lam, xr, witness, slack)


# --------------------------------------------------------------------------
# special eigenvectors and the vertex-search spectrum


def simple_nodal_sets(g: Graph) -> list[tuple[int, int]]:
    """Edges ``{i, j}`` whose removal leaves no isolated vertex among the rest."""
    out = []
    for i, j in g.edges:
        rest = g.full_mask & ~mask_of((i, j))
        ok = True
        for v in range(1, g.n + 1):
            if rest >> (v - 1) & 1 and not (g.neighbor_masks[v - 1] & rest):
                ok = False
                break
        if ok:
            out.append((i, j))
    return out


def simple_nodal_eigenvalue(g: Graph, edge: tuple[int, int]) -> Fraction:
    i, j = edge
    return 1 - Fraction(2, g.degree(i) + g.degree(j))


def distinct_count_lower_bound(g: Graph) -> int:
    """``2 + #{deg i + deg j : {i, j} a simple nodal set}``."""
    return 2 + len({g.degree(i) + g.degree(j) for i, j in simple_nodal_sets(g)})


@dataclass(frozen=True)
class VertexSpectrum:
    """Certified eigenvalues found among vectors ``1_A - 1_B``.

    The list is complete for the vertex family only; other eigenvalues of the
    operator (if any) would need non-vertex eigenvectors.
    """

    values: tuple[Fraction, ...]
    witnesses: dict[Fraction, SetPair]
    label: str = "certified eigenvalues (vertex search)"


def all_set_pairs(n: int):
    """Every ``(A, B)`` with ``A ∩ B = ∅`` and ``A ∪ B ≠ ∅`` on ``n`` points."""
    for code in range(1, 3**n):
        a = b = 0
        c = code
        for v in range(n):
            d = c % 3
            c //= 3
            if d == 1:
                a |= 1 << v
            elif d == 2:
                b |= 1 << v
        yield SetPair(a, b)


def enumerate_delta1_spectrum(g: Graph, cap: int = SEARCH_CAP, allow_large: bool = False) -> VertexSpectrum:
    """Certify ``F_1(1_A - 1_B)`` as an eigenvalue for every candidate pair."""
    if g.n > cap and not allow_large:
        raise ComplexSizeError(f"vertex search over 3^{g.n} candidates exceeds the cap n <= {cap}")
    groups: dict[Fraction, list[SetPair]] = {}
    for s in all_set_pairs(g.n):
        if s.a < s.b:  # F_1 is even; one pair per antipodal orbit suffices
            continue
        groups.setdefault(f1_pair(g, s), []).append(s)
    witnesses = {}
    for lam in sorted(groups):
        for s in groups[lam]:
            x = [Fraction(int(v)) for v in s.vector(g.n)]
            if verify_eigenpair(g, lam, x) is not None:
                witnesses[lam] = s
                break
    return VertexSpectrum(tuple(sorted(witnesses)), witnesses)


# --------------------------------------------------------------------------
# criticality of F_1


class PatternOverflowError(RuntimeError):
    """Too many ξ-order patterns to enumerate exactly."""


@dataclass(frozen=True)
class _Game:
    """Linear structure of ``y -> max_ξ Φ - λΨ`` at a fixed ``x``.

    The value is ``fixed . y + sum_C max_{v in choices[C]} v . y``.
    """

    lam: Fraction
    fixed: tuple[Fraction, ...]
    choices: tuple[tuple[tuple[Fraction, ...], ...], ...]
    groups: tuple[tuple[int, ...], ...]

    def value(self, y: Sequence[Fraction]) -> Fraction:
        total = sum((f * v for f, v in zip(self.fixed, y)), Fraction(0))
        for opts in self.choices:
            total += max(sum((c * v for c, v in zip(o, y)), Fraction(0)) for o in opts)
        return total


def _game(g: Graph, x: tuple[Fraction, ...]) -> _Game:
    n = g.n
    lam = Fraction(0)
    num = sum(abs(x[i - 1] - x[j - 1]) for i, j in g.edges)
    den = sum(g.degrees[i] * abs(x[i]) for i in range(n))
    lam = Fraction(num) / Fraction(den)
    fixed = [Fraction(0)] * n
    tied = []
    for i, j in g.edges:
        s = _sign(x[i - 1] - x[j - 1])
        if s:
            fixed[i - 1] += s
            fixed[j - 1] -= s
        else:
            tied.append((i, j))
    for i in range(n):
        s = _sign(x[i])
        if s:
            fixed[i] -= lam * g.degrees[i] * s
    # groups: components of the tied-edge graph, each zero coordinate joined to the origin anchor
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in tied:
        parent[find(i - 1)] = find(j - 1)
    comp: dict[int, list[int]] = {}
    for i in range(n):
        comp.setdefault(find(i), []).append(i)
    groups = []
    choices = []
    for members_ in comp.values():
        zero = x[members_[0]] == 0
        edges = [(i - 1, j - 1) for i, j in tied if find(i - 1) == find(members_[0])]
        if not edges and not zero:
            continue
        size = len(members_) + (1 if zero else 0)
        count = 1
        for k in range(2, size + 1):
            count *= k
        if count > PATTERN_CAP:
            raise PatternOverflowError(f"{count} ξ-orders on a tied group of size {size} exceed {PATTERN_CAP}")
        opts = set()
        anchor = -1
        items = members_ + ([anchor] if zero else [])
        for perm in itertools.permutations(items):
            rank = {v: r for r, v in enumerate(perm)}
            vec = [Fraction(0)] * n
            for i, j in edges:
                s = 1 if rank[i] > rank[j] else -1
                vec[i] += s
                vec[j] -= s
            if zero:
                for i in members_:
                    s = 1 if rank[i] > rank[anchor] else -1
                    vec[i] -= lam * g.degrees[i] * s
            opts.add(tuple(vec))
        groups.append(tuple(members_))
        choices.append(tuple(sorted(opts)))
    return _Game(lam, tuple(fixed), tuple(choices), tuple(groups))


def criticality_directions(n: int, seed: int = CRITICALITY_SEED, random_count: int = 64) -> list[tuple[Fraction, ...]]:
    """Search family: ``±1_A ± 1_B`` with ``|A ∪ B| <= 2``, then seeded integer directions."""
    out = []
    for i in range(n):
        for s in (1, -1):
            y = [Fraction(0)] * n
            y[i] = Fraction(s)
            out.append(tuple(y))
    for i in range(n):
        for j in range(i + 1, n):
            for si, sj in ((1, -1), (-1, 1), (1, 1), (-1, -1)):
                y = [Fraction(0)] * n
                y[i], y[j] = Fraction(si), Fraction(sj)
                out.append(tuple(y))
    rng = np.random.default_rng(seed)
    for _ in range(random_count):
        v = rng.integers(-9, 10, size=n)
        if not v.any():
            v[0] = 1
        out.append(tuple(Fraction(int(t)) for t in v))
    return out


@dataclass(frozen=True)
class CriticalityVerdict:
    """Outcome of the criticality test at ``x`` with ``λ = F_1(x)``.

    ``method`` is ``"direction search"`` when a listed direction refuted
    criticality, and ``"subgradient LP"`` when the exact LP decided it. A
    critical verdict carries ``weights``: per tied group, a convex combination
    of ξ-orders (as gradient vectors) that cancels the fixed part.
    """

    critical: bool
    lam: Fraction
    method: str
    witness: tuple[Fraction, ...] | None = None
    witness_value: Fraction | None = None
    weights: tuple[dict[tuple[Fraction, ...], Fraction], ...] | None = None

    @property
    def label(self) -> str:
        if self.critical:
            return "critical (certified)"
        return "not critical"


def is_critical_f1(g: Graph, x: Sequence, directions: Sequence[Sequence[Fraction]] | None = None) -> CriticalityVerdict:
    """Decide whether ``x`` is a critical point of F_1 in the Clarke sense.

    For every direction ``y`` the best ξ-response is linear on each tied group,
    so ``y -> max_ξ (Φ - λΨ)`` is sublinear; ``x`` is critical exactly when
    zero lies in its subdifferential at the origin. Small-support directions
    are tried first so that refutations come with a readable ``y``.
    """
    xr = _rational_vector(x)
    game = _game(g, xr)
    if directions is None:
        directions = criticality_directions(g.n)
    best = None
    for y in directions:
        val = game.value(y)
        if val < 0:
            norm = sum(abs(v) for v in y)
            key = val / norm
            if best is None or key < best[0]:
                best = (key, tuple(Fraction(v) for v in y), val)
    if best is not None:
        return CriticalityVerdict(False, game.lam, "direction search", best[1], best[2])
    # 0 ∈ fixed + sum_C conv(choices[C]) as an LP in the convex weights
    cols = [(c, o) for c, opts in enumerate(game.choices) for o in opts]
    n = g.n
    rows = []
    for v in range(n):
        rows.append([o[v] for _, o in cols])
    for c in range(len(game.choices)):
        rows.append([Fraction(int(cc == c)) for cc, _ in cols])
    rhs = [-f for f in game.fixed] + [Fraction(1)] * len(game.choices)
    if not cols:
        critical = not any(game.fixed)
        if critical:
            return CriticalityVerdict(True, game.lam, "subgradient LP", weights=())
        y = tuple(-f for f in game.fixed)
        return CriticalityVerdict(False, game.lam, "subgradient LP", y, game.value(y))
    res = lp_feasible(rows, rhs)
    if res.feasible:
        weights = [dict() for _ in game.choices]
        for (c, o), w in zip(cols, res.point):
            if w:
                weights[c][o] = w
        return CriticalityVerdict(True, game.lam, "subgradient LP", weights=tuple(weights))
    y = tuple(res.farkas[:n])
    val = game.value(y)
    if val >= 0:  # pragma: no cover - Farkas guarantees a negative value
        raise AssertionError("Farkas direction failed to refute criticality")
    return CriticalityVerdict(False, game.lam, "subgradient LP", y, val)
