"""The order complex K_n of signed subsets, its subcomplexes, GF(2) homology and Yang index.

A vertex of K_n is a :class:`~plap.graph.SetPair` ``(A, B)``; simplices are
chains under componentwise inclusion. Simplices of dimension ``q`` are stored
as an ``(m, q + 1)`` integer array of vertex indices. Vertex indices are sorted
by support size first, so every row lists its chain from bottom to top and
rows are in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from ._reduce import reduce_boundary
from .exact import GF2Matrix
from .graph import SetPair

DEFAULT_CAP = 6
INF = np.iinfo(np.int64).max


class ComplexSizeError(ValueError):
    """Requested K_n exceeds the configured size cap."""


class UnknownVertexError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class OrderComplex:
    """A simplicial complex whose simplices are chains of set pairs on ``n`` points.

    ``va``/``vb`` hold the ``A``/``B`` bitmasks of each vertex; ``simplices[q]``
    is the array of ``q``-simplices (possibly with zero rows).
    """

    n: int
    va: np.ndarray
    vb: np.ndarray
    simplices: tuple[np.ndarray, ...]

    # -- basic queries ------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return int(self.va.shape[0])

    @property
    def dim(self) -> int:
        """Top dimension with at least one simplex (-1 for the empty complex)."""
        d = -1
        for q, s in enumerate(self.simplices):
            if s.shape[0]:
                d = q
        return d

    def counts(self) -> list[int]:
        return [int(s.shape[0]) for s in self.simplices[: self.dim + 1]]

    def is_empty(self) -> bool:
        return self.num_vertices == 0

    @cached_property
    def vertices(self) -> tuple[SetPair, ...]:
        return tuple(SetPair(int(a), int(b)) for a, b in zip(self.va, self.vb))

    @cached_property
    def _vertex_lookup(self) -> dict[SetPair, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def vertex_index(self, v: SetPair) -> int:
        try:
            return self._vertex_lookup[v]
        except KeyError:
            raise UnknownVertexError(f"{v} is not a vertex of this complex") from None

    def simplex(self, q: int, i: int) -> tuple[SetPair, ...]:
        return tuple(self.vertices[j] for j in self.simplices[q][i])

    # -- face structure -----------------------------------------------------

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        """Injective int64 key of a chain: each point's entry level and sign."""
        m, k = rows.shape
        key = np.zeros(m, dtype=np.int64)
        if m == 0:
            return key
        sup = (self.va | self.vb)[rows]
        last_a = self.va[rows[:, -1]]
        base = 2 * self.n + 1
        scale = 1
        for v in range(self.n):
            bit = 1 << v
            cnt = np.count_nonzero(sup & bit, axis=1)
            level = k - cnt + 1
            code = np.where(cnt > 0, 2 * level - ((last_a & bit) != 0), 0)
            key += code * scale
            scale *= base
        return key

    @cached_property
    def _sorted_keys(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        out = []
        for s in self.simplices:
            keys = self._keys(s)
            order = np.argsort(keys, kind="stable")
            out.append((keys[order], order))
        return tuple(out)

    def lookup(self, q: int, rows: np.ndarray) -> np.ndarray:
        """Indices of the given ``q``-chains in this complex (-1 where absent)."""
        if q >= len(self.simplices) or rows.shape[0] == 0:
            return np.full(rows.shape[0], -1, dtype=np.int64)
        skeys, order = self._sorted_keys[q]
        keys = self._keys(rows)
        pos = np.searchsorted(skeys, keys)
        pos = np.minimum(pos, max(len(skeys) - 1, 0))
        found = (skeys.shape[0] > 0) & (skeys[pos] == keys) if skeys.shape[0] else np.zeros(len(keys), bool)
        return np.where(found, order[pos] if skeys.shape[0] else -1, -1)

    def faces(self, q: int) -> np.ndarray:
        """``(m_q, q + 1)`` indices of the codimension-one faces of each ``q``-simplex."""
        return self._faces[q]

    @cached_property
    def _faces(self) -> tuple[np.ndarray, ...]:
        out = [np.zeros((self.simplices[0].shape[0], 0), dtype=np.int64)]
        for q in range(1, len(self.simplices)):
            s = self.simplices[q]
            cols = []
            for j in range(q + 1):
                face = np.delete(s, j, axis=1)
                idx = self.lookup(q - 1, face)
                if np.any(idx < 0):
                    raise ValueError("complex is not closed under faces")
                cols.append(idx)
            out.append(np.stack(cols, axis=1) if cols else np.zeros((0, q + 1), dtype=np.int64))
        return tuple(out)

    def boundary_matrix(self, q: int) -> GF2Matrix:
        """``∂_q : C_q -> C_{q-1}`` as a dense GF(2) matrix (small complexes only)."""
        rows = self.simplices[q - 1].shape[0] if q >= 1 else 0
        if q < 1 or q >= len(self.simplices):
            cols = self.simplices[q].shape[0] if 0 <= q < len(self.simplices) else 0
            return GF2Matrix.zeros(rows, cols)
        return GF2Matrix.from_columns(rows, [list(f) for f in self.faces(q)])

    # -- antipodal structure ------------------------------------------------

    @cached_property
    def antipode_vertex(self) -> np.ndarray:
        lut = self._vertex_lookup
        return np.array(
            [lut.get(SetPair(int(b), int(a)), -1) for a, b in zip(self.va, self.vb)], dtype=np.int64
        )

    def antipode(self, q: int) -> np.ndarray:
        """Index of ``-σ`` for each ``q``-simplex ``σ`` (-1 where it is missing)."""
        s = self.simplices[q]
        if s.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        av = self.antipode_vertex[s]
        missing = np.any(av < 0, axis=1)
        idx = self.lookup(q, np.where(av < 0, 0, av))
        idx[missing] = -1
        return idx

    def is_symmetric(self) -> bool:
        return all(np.all(self.antipode(q) >= 0) for q in range(len(self.simplices)))

    def representatives(self, q: int) -> np.ndarray:
        """Mask of orbit representatives: the chain whose SetPair tuple sorts first.

        Chains and their antipodes first differ at the bottom vertex, where
        ``(A, B)`` precedes ``(B, A)`` exactly when ``A < B`` as bitmasks.
        """
        s = self.simplices[q]
        if s.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        first = s[:, 0]
        return self.va[first] < self.vb[first]


@dataclass(frozen=True)
class SymmetricStructure:
    """Antipodal involution of a complex with the chosen orbit representatives."""

    antipode: tuple[np.ndarray, ...]
    representative: tuple[np.ndarray, ...]

    @classmethod
    def of(cls, k: OrderComplex, flip: dict[int, set[int]] | None = None) -> SymmetricStructure:
        """Default structure; ``flip[q]`` lists ``q``-simplices whose orbit choice is swapped."""
        anti = tuple(k.antipode(q) for q in range(len(k.simplices)))
        reps = []
        for q in range(len(k.simplices)):
            r = k.representatives(q).copy()
            for i in (flip or {}).get(q, ()):
                j = anti[q][i]
                r[i], r[j] = r[j], r[i]
            reps.append(r)
        return cls(anti, tuple(reps))

    def is_free(self) -> bool:
        return all(np.all(a >= 0) and np.all(a != np.arange(len(a))) for a in self.antipode)


# --------------------------------------------------------------------------
# construction


def _vertex_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = []
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
        pairs.append((bin(a | b).count("1"), a, b))
    pairs.sort()
    va = np.array([p[1] for p in pairs], dtype=np.int64)
    vb = np.array([p[2] for p in pairs], dtype=np.int64)
    return va, vb


def _chains(va: np.ndarray, vb: np.ndarray, max_len: int) -> list[np.ndarray]:
    nv = va.shape[0]
    # strict successors under componentwise inclusion, ascending by index
    below = ((va[:, None] & ~va[None, :]) == 0) & ((vb[:, None] & ~vb[None, :]) == 0)
    np.fill_diagonal(below, False)
    succ_cnt = below.sum(axis=1)
    succ_ptr = np.concatenate([[0], np.cumsum(succ_cnt)])
    succ_idx = np.nonzero(below)[1].astype(np.int64)
    out = [np.arange(nv, dtype=np.int64)[:, None]]
    while len(out) < max_len:
        rows = out[-1]
        last = rows[:, -1]
        cnt = succ_cnt[last]
        total = int(cnt.sum())
        if total == 0:
            break
        rep = np.repeat(rows, cnt, axis=0)
        starts = np.repeat(succ_ptr[last], cnt)
        offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        out.append(np.concatenate([rep, succ_idx[starts + offs][:, None]], axis=1))
    return out


@lru_cache(maxsize=4)
def _build_kn_cached(n: int) -> OrderComplex:
    va, vb = _vertex_table(n)
    return OrderComplex(n, va, vb, tuple(_chains(va, vb, n)))


def build_kn(n: int, cap: int = DEFAULT_CAP, allow_large: bool = False) -> OrderComplex:
    """K_n: ``3^n - 1`` vertices and ``n! 2^n`` maximal ``(n-1)``-simplices.

    Results are cached, so repeated calls share one immutable complex.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > cap and not allow_large:
        raise ComplexSizeError(f"K_{n} exceeds the cap n <= {cap}; pass allow_large=True to override")
    return _build_kn_cached(n)


def induced_subcomplex(k: OrderComplex, keep: Callable[[SetPair], bool] | np.ndarray | Sequence[bool]) -> OrderComplex:
    """All simplices of ``k`` whose vertices satisfy ``keep`` (a predicate or a vertex mask)."""
    if callable(keep):
        mask = np.array([bool(keep(v)) for v in k.vertices], dtype=bool)
    else:
        mask = np.asarray(keep, dtype=bool)
        if mask.shape != (k.num_vertices,):
            raise ValueError("vertex mask has the wrong length")
    new_index = np.cumsum(mask) - 1
    simplices = []
    for s in k.simplices:
        rows = s[np.all(mask[s], axis=1)] if s.shape[0] else s
        simplices.append(new_index[rows] if rows.size else rows.reshape(0, s.shape[1]))
    return OrderComplex(k.n, k.va[mask], k.vb[mask], tuple(simplices))


def star_link(k: OrderComplex, v: SetPair) -> tuple[OrderComplex, OrderComplex]:
    """Closed star and link of vertex ``v``."""
    iv = k.vertex_index(v)
    link_rows: list[list[np.ndarray]] = [[] for _ in range(len(k.simplices))]
    for q in range(1, len(k.simplices)):
        s = k.simplices[q]
        hit = np.any(s == iv, axis=1)
        if np.any(hit):
            rows = s[hit]
            # drop v from each row, preserving chain order
            rest = rows[rows != iv].reshape(rows.shape[0], q)
            link_rows[q - 1].append(rest)
    link_simp = []
    for q, s in enumerate(k.simplices):
        parts = link_rows[q]
        link_simp.append(np.concatenate(parts) if parts else np.zeros((0, q + 1), dtype=np.int64))
    link_vertices = np.zeros(k.num_vertices, dtype=bool)
    if link_simp[0].size:
        link_vertices[link_simp[0][:, 0]] = True
    star_vertices = link_vertices.copy()
    star_vertices[iv] = True
    # both are full subcomplexes because order complexes are flag complexes
    return induced_subcomplex(k, star_vertices), induced_subcomplex(k, link_vertices)


# --------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class Persistence:
    """Birth/death ranks of a vertex-valued sublevel filtration, per dimension.

    ``births[q][i]`` and ``deaths[q][i]`` describe one homology class in
    dimension ``q``; an infinite death is stored as ``INF``.
    """

    births: tuple[np.ndarray, ...]
    deaths: tuple[np.ndarray, ...]

    def betti(self, t: int) -> tuple[int, ...]:
        """Betti numbers of the sublevel complex ``{rank <= t}``."""
        return tuple(int(np.count_nonzero((b <= t) & (d > t))) for b, d in zip(self.births, self.deaths))

    def changes_at(self, t: int) -> bool:
        """Whether ``{rank < t} -> {rank <= t}`` fails to be an isomorphism in some degree."""
        for b, d in zip(self.births, self.deaths):
            if np.any((b == t) & (d > t)) or np.any((d == t) & (b < t)):
                return True
        return False


def _simplex_ranks(k: OrderComplex, vertex_rank: np.ndarray) -> list[np.ndarray]:
    return [vertex_rank[s].max(axis=1) if s.shape[0] else np.zeros(0, dtype=np.int64) for s in k.simplices]


def sublevel_persistence(k: OrderComplex, vertex_rank: Sequence[int] | np.ndarray) -> Persistence:
    """Persistence pairs of the lower-star filtration by integer vertex ranks."""
    vertex_rank = np.asarray(vertex_rank, dtype=np.int64)
    top = k.dim
    if top < 0:
        return Persistence((), ())
    ranks = _simplex_ranks(k, vertex_rank)
    orders = [np.argsort(r, kind="stable") for r in ranks]
    position = []
    for o in orders:
        p = np.empty_like(o)
        p[o] = np.arange(len(o))
        position.append(p)
    lows: list[np.ndarray | None] = [None] * (top + 2)
    for q in range(top, 0, -1):
        m = ranks[q].shape[0]
        cleared = np.zeros(m, dtype=bool)
        if lows[q + 1] is not None:
            hit = lows[q + 1][lows[q + 1] >= 0]
            cleared[hit] = True
        faces = position[q - 1][k.faces(q)[orders[q]]]
        lw, _ = reduce_boundary(faces, ranks[q - 1].shape[0], cleared, np.zeros(m, dtype=np.uint8))
        lows[q] = lw
    births, deaths = [], []
    for q in range(top + 1):
        sorted_rank = ranks[q][orders[q]]
        m = sorted_rank.shape[0]
        positive = np.ones(m, dtype=bool) if q == 0 else lows[q] < 0
        death = np.full(m, INF, dtype=np.int64)
        if q < top and lows[q + 1] is not None:
            col = np.nonzero(lows[q + 1] >= 0)[0]
            death[lows[q + 1][col]] = ranks[q + 1][orders[q + 1]][col]
        births.append(sorted_rank[positive])
        deaths.append(death[positive])
    return Persistence(tuple(births), tuple(deaths))


def betti_gf2(k: OrderComplex) -> tuple[int, ...]:
    """GF(2) Betti numbers ``b_0 .. b_dim`` (empty tuple for the empty complex)."""
    if k.dim < 0:
        return ()
    return sublevel_persistence(k, np.zeros(k.num_vertices, dtype=np.int64)).betti(0)


def betti_gf2_dense(k: OrderComplex) -> tuple[int, ...]:
    """Betti numbers from explicit boundary-matrix ranks; slow, for cross-checks."""
    from .exact import gf2_quotient_dim

    out = []
    for q in range(k.dim + 1):
        d_in = k.boundary_matrix(q + 1) if q + 1 <= k.dim else GF2Matrix.zeros(k.counts()[q], 0)
        d_out = k.boundary_matrix(q) if q >= 1 else GF2Matrix.zeros(0, k.counts()[0])
        out.append(gf2_quotient_dim(d_in, d_out))
    return tuple(out)


def connected_components(k: OrderComplex) -> int:
    return betti_gf2(k)[0] if k.dim >= 0 else 0


# --------------------------------------------------------------------------
# Yang index


@dataclass(frozen=True)
class YangReport:
    """``index`` is min{k >= 1 : ν_* H_k(S,-) = 0}; 0 for empty or non-symmetric input."""

    index: int
    symmetric_homology: tuple[int, ...]
    nu_nonzero: tuple[bool, ...]


@dataclass(frozen=True)
class _OrbitComplex:
    values: list[np.ndarray]  # per dim, orbit rank
    faces: list[np.ndarray]  # per dim >= 1, orbit ids of the faces of each representative
    weight: list[np.ndarray]  # per dim, the functional w_q on orbits


def _orbit_complex(k: OrderComplex, s: SymmetricStructure, simplex_rank: list[np.ndarray]) -> _OrbitComplex:
    values, faces, weight = [], [], []
    orbit_of_prev = None
    rep_prev = None
    w_prev = None
    for q in range(k.dim + 1):
        rep = s.representative[q]
        anti = s.antipode[q]
        reps = np.nonzero(rep)[0]
        orbit = np.empty(k.simplices[q].shape[0], dtype=np.int64)
        orbit[reps] = np.arange(len(reps))
        orbit[anti[reps]] = np.arange(len(reps))
        values.append(simplex_rank[q][reps])
        if q == 0:
            faces.append(np.zeros((len(reps), 0), dtype=np.int64))
            w = np.ones(len(reps), dtype=np.uint8)
        else:
            fidx = k.faces(q)[reps]
            faces.append(orbit_of_prev[fidx])
            # w_q(σ) = sum of w_{q-1} over the faces of σ that are themselves representatives
            contrib = np.where(rep_prev[fidx], w_prev[orbit_of_prev[fidx]], 0)
            w = (contrib.sum(axis=1) % 2).astype(np.uint8)
        weight.append(w)
        orbit_of_prev, rep_prev, w_prev = orbit, rep, w
    return _OrbitComplex(values, faces, weight)


def _orbit_reduction(oc: _OrbitComplex) -> tuple[list[int | None], list[int], list[int]]:
    """Per dimension: first rank where a ν = 1 cycle appears, plus zero/pivot counts."""
    top = len(oc.values) - 1
    orders = [np.argsort(v, kind="stable") for v in oc.values]
    position = []
    for o in orders:
        p = np.empty_like(o)
        p[o] = np.arange(len(o))
        position.append(p)
    first: list[int | None] = [None] * (top + 1)
    zeros = [0] * (top + 1)
    pivots = [0] * (top + 2)
    lows_above = None
    for q in range(top, -1, -1):
        m = len(oc.values[q])
        sorted_vals = oc.values[q][orders[q]]
        w = oc.weight[q][orders[q]]
        cleared = np.zeros(m, dtype=bool)
        if lows_above is not None:
            cleared[lows_above[lows_above >= 0]] = True
        if q == 0:
            lows = np.full(m, -1, dtype=np.int64)
            parity = w
        else:
            faces = position[q - 1][oc.faces[q][orders[q]]]
            lows, parity = reduce_boundary(faces, len(oc.values[q - 1]), cleared, w)
        # cleared columns are born as boundaries, on which ν vanishes
        born = (lows < 0) & ~cleared & (parity == 1)
        if np.any(born):
            first[q] = int(sorted_vals[np.argmax(born)])
        zeros[q] = int(np.count_nonzero(lows < 0))
        pivots[q] = int(np.count_nonzero(lows >= 0))
        lows_above = lows
    return first, zeros, pivots


def yang_index(k: OrderComplex, s: SymmetricStructure | None = None) -> YangReport:
    """Yang index of a centrally symmetric subcomplex of K_n over GF(2)."""
    if k.dim < 0 or not k.is_symmetric():
        return YangReport(0, (), ())
    if s is None:
        s = SymmetricStructure.of(k)
    ranks = [np.zeros(x.shape[0], dtype=np.int64) for x in k.simplices]
    oc = _orbit_complex(k, s, ranks)
    first, zeros, pivots = _orbit_reduction(oc)
    top = k.dim
    hom = tuple(zeros[q] - pivots[q + 1] for q in range(top + 1))
    nu = tuple(f is not None for f in first)
    index = next((q for q in range(1, top + 2) if q > top or not nu[q]), top + 1)
    return YangReport(index, hom, nu)


def yang_thresholds(k: OrderComplex, vertex_rank: Sequence[int] | np.ndarray) -> list[int | None]:
    """For each dimension ``q``, the least rank ``t`` with ν_* H_q(K_{<=t}, -) ≠ 0.

    Requires an antipodally even ranking. The Yang index of ``K_{<=t}`` is then
    the least ``q >= 1`` whose threshold exceeds ``t`` (or is missing).
    """
    vertex_rank = np.asarray(vertex_rank, dtype=np.int64)
    if not k.is_symmetric():
        raise ValueError("complex is not antipodally symmetric")
    if np.any(vertex_rank != vertex_rank[k.antipode_vertex]):
        raise ValueError("vertex ranks are not antipodally even")
    ranks = _simplex_ranks(k, vertex_rank)
    oc = _orbit_complex(k, SymmetricStructure.of(k), ranks)
    first, _, _ = _orbit_reduction(oc)
    return first


def yang_index_dense(k: OrderComplex, s: SymmetricStructure | None = None) -> int:
    """Yang index by explicit row-space membership tests; slow, for cross-checks.

    ν_* H_q vanishes exactly when the functional w_q lies in the row space of
    the symmetric boundary ∂_q.
    """
    from .exact import GF2Basis

    if k.dim < 0 or not k.is_symmetric():
        return 0
    if s is None:
        s = SymmetricStructure.of(k)
    ranks = [np.zeros(x.shape[0], dtype=np.int64) for x in k.simplices]
    oc = _orbit_complex(k, s, ranks)
    for q in range(1, k.dim + 2):
        if q > k.dim:
            return q
        rows = [0] * len(oc.values[q - 1])
        for j, fs in enumerate(oc.faces[q]):
            for f in fs:
                rows[f] ^= 1 << j
        basis = GF2Basis(rows)
        w = 0
        for j, bit in enumerate(oc.weight[q]):
            if bit:
                w |= 1 << j
        if basis.contains(w):
            return q
    return k.dim + 1
