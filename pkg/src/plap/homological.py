"""Homological eigenvalues of the 1-Laplacian from sublevel subcomplexes of K_n."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .complex import (
    DEFAULT_CAP,
    ComplexSizeError,
    OrderComplex,
    Persistence,
    betti_gf2,
    build_kn,
    induced_subcomplex,
    star_link,
    sublevel_persistence,
)
from .exact import frac_str
from .graph import Graph, SetPair


def vertex_values(g: Graph, k: OrderComplex) -> list[Fraction]:
    """Exact F_1 value at every vertex ``1_A - 1_B`` of ``k``."""
    I, J = g.edge_index
    deg = np.asarray(g.degrees, dtype=np.int64)
    va, vb = k.va, k.vb

    def boundary(masks: np.ndarray) -> np.ndarray:
        if I.size == 0:
            return np.zeros(masks.shape, dtype=np.int64)
        return (((masks[:, None] >> I[None, :]) ^ (masks[:, None] >> J[None, :])) & 1).sum(axis=1)

    bits = ((va | vb)[:, None] >> np.arange(g.n)[None, :]) & 1
    vol = bits @ deg
    if np.any(vol == 0):
        raise ValueError("F_1 is undefined on supports made of isolated vertices")
    num = boundary(va) + boundary(vb)
    return [Fraction(int(a), int(b)) for a, b in zip(num, vol)]


@dataclass(frozen=True, eq=False)
class Filtration:
    """Lower-star filtration of K_n by exact F_1 vertex values."""

    graph: Graph
    complex: OrderComplex
    values: tuple[Fraction, ...]  # sorted distinct thresholds
    vertex_rank: np.ndarray  # index into ``values`` for each vertex

    @classmethod
    def of(cls, g: Graph, cap: int = DEFAULT_CAP, allow_large: bool = False) -> Filtration:
        return _filtration(g, cap, allow_large)

    @cached_property
    def persistence(self) -> Persistence:
        return sublevel_persistence(self.complex, self.vertex_rank)

    def threshold_rank(self, lam: Fraction) -> int:
        return self.values.index(Fraction(lam))

    def closed_betti(self, r: int) -> tuple[int, ...]:
        return self.persistence.betti(r)

    def strict_betti(self, r: int) -> tuple[int, ...]:
        return self.persistence.betti(r - 1)

    def sublevel(self, lam: Fraction, strict: bool = False) -> OrderComplex:
        lam = Fraction(lam)
        vals = [self.values[r] for r in self.vertex_rank]
        keep = np.array([(v < lam) if strict else (v <= lam) for v in vals], dtype=bool)
        return induced_subcomplex(self.complex, keep)


@lru_cache(maxsize=32)
def _filtration(g: Graph, cap: int, allow_large: bool) -> Filtration:
    if g.n > cap and not allow_large:
        raise ComplexSizeError(f"n = {g.n} exceeds the cap n <= {cap}")
    k = build_kn(g.n, cap=cap, allow_large=allow_large)
    vals = vertex_values(g, k)
    distinct = tuple(sorted(set(vals)))
    index = {v: i for i, v in enumerate(distinct)}
    rank = np.array([index[v] for v in vals], dtype=np.int64)
    return Filtration(g, k, distinct, rank)


@dataclass(frozen=True)
class ThresholdReport:
    value: Fraction
    strict_betti: tuple[int, ...]
    closed_betti: tuple[int, ...]
    betti_changed: bool
    homological: bool

    def to_json(self) -> dict:
        return {
            "strict_betti": list(self.strict_betti),
            "closed_betti": list(self.closed_betti),
            "homological": self.homological,
            "betti_changed": self.betti_changed,
        }


@dataclass(frozen=True)
class HomologicalSpectrum:
    thresholds: tuple[ThresholdReport, ...]

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(t.value for t in self.thresholds if t.homological)

    def to_json(self) -> dict:
        return {frac_str(t.value): t.to_json() for t in self.thresholds}


def homological_spectrum(g: Graph, cap: int = DEFAULT_CAP, allow_large: bool = False) -> HomologicalSpectrum:
    """Vertex values where ``K|_{F_1<λ} -> K|_{F_1<=λ}`` changes homology.

    ``homological`` records whether the inclusion fails to induce an
    isomorphism in some degree; ``betti_changed`` records the coarser test of
    comparing Betti vectors. The first implies the second is possible but not
    forced, so both are reported.
    """
    filt = Filtration.of(g, cap, allow_large)
    pers = filt.persistence
    out = []
    for r, lam in enumerate(filt.values):
        strict = filt.strict_betti(r)
        closed = filt.closed_betti(r)
        out.append(ThresholdReport(lam, strict, closed, strict != closed, pers.changes_at(r)))
    return HomologicalSpectrum(tuple(out))


@dataclass(frozen=True)
class LinkVerdict:
    """Local test at ``1_A``: ``status`` is applicable-true, false, or inapplicable."""

    status: str
    lam: Fraction
    ties: tuple[SetPair, ...]
    reduced_betti: tuple[int, ...]
    components: int

    @property
    def holds(self) -> bool:
        return self.status == "applicable-true"


def reduced_betti(k: OrderComplex) -> tuple[int, ...]:
    """Reduced GF(2) Betti numbers; the empty complex has ``b̃_{-1} = 1``, reported as ``(-1,)``."""
    if k.dim < 0:
        return (-1,)
    b = list(betti_gf2(k))
    b[0] -= 1
    return tuple(b)


def local_link_criterion(g: Graph, a: int, cap: int = DEFAULT_CAP) -> LinkVerdict:
    """Check the link conditions at ``1_A`` for ``a`` a nonempty vertex bitmask."""
    if not a:
        raise ValueError("A must be nonempty")
    filt = Filtration.of(g, cap)
    k = filt.complex
    v = SetPair(a, 0)
    lam = filt.values[filt.vertex_rank[k.vertex_index(v)]]
    _, link = star_link(k, v)
    link_vals = [filt.values[filt.vertex_rank[k.vertex_index(u)]] for u in link.vertices]
    ties = tuple(u for u, val in zip(link.vertices, link_vals) if val == lam)
    below = induced_subcomplex(link, np.array([val < lam for val in link_vals], dtype=bool))
    rb = reduced_betti(below)
    comps = betti_gf2(below)[0] if below.dim >= 0 else 0
    if ties:
        status = "inapplicable"
    elif below.dim >= 0 and any(rb):
        status = "applicable-true"
    else:
        # the empty complex is not homologically nontrivial in the sense used here
        status = "false"
    return LinkVerdict(status, lam, ties, rb, comps)
