"""Cheeger-type constants, min-max 1-Laplacian eigenvalues, closed-form spectra, inequality checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .complex import DEFAULT_CAP, ComplexSizeError, yang_thresholds
from .exact import frac_str, symmetric_inertia
from .graph import Graph, edge_boundary, mask_of, members, strong_nodal_count, volume
from .homological import Filtration

CHEEGER_CAP = 8
INDEPENDENCE_CAP = 10


class InvalidSubpartitionError(ValueError):
    pass


# --------------------------------------------------------------------------
# multi-way Cheeger constants


def _subset_ratios(g: Graph) -> dict[int, Fraction]:
    """``|∂A| / vol(A)`` for every nonempty ``A`` of positive volume."""
    out = {}
    for a in range(1, 1 << g.n):
        vol = volume(g, a)
        if vol:
            out[a] = Fraction(edge_boundary(g, a), vol)
    return out


def _max_packing(full: int, good: set[int]) -> int:
    """Most pairwise-disjoint members of ``good`` inside ``full`` (subset DP)."""
    pack = {0: 0}
    for mask in range(1, full + 1):
        if mask & ~full:
            continue
        low = mask & -mask
        best = pack[mask & ~low]
        sub = mask
        while sub:
            if sub & low and sub in good:
                best = max(best, 1 + pack[mask & ~sub])
            sub = (sub - 1) & mask
        pack[mask] = best
    return pack[full]


@lru_cache(maxsize=64)
def cheeger_constants(g: Graph) -> tuple[Fraction, ...]:
    """``(h_1, ..., h_m)`` where ``m`` is the most disjoint sets of positive volume."""
    if g.n > CHEEGER_CAP:
        raise ComplexSizeError(f"exact h_k enumeration is capped at n <= {CHEEGER_CAP}")
    ratios = _subset_ratios(g)
    values = sorted(set(ratios.values()))
    full = g.full_mask
    out = []
    k = 1
    lo = 0
    while True:
        # smallest threshold admitting k disjoint sets, searched upward from the previous one
        hi = len(values) - 1
        if _max_packing(full, {a for a, r in ratios.items() if r <= values[hi]}) < k:
            break
        while lo < hi:
            mid = (lo + hi) // 2
            if _max_packing(full, {a for a, r in ratios.items() if r <= values[mid]}) >= k:
                hi = mid
            else:
                lo = mid + 1
        out.append(values[lo])
        k += 1
    return tuple(out)


def multiway_cheeger(g: Graph, k: int) -> Fraction:
    """``h_k``: min over ``k`` disjoint nonempty sets of the largest ``|∂A_i| / vol(A_i)``."""
    if k < 1 or k > g.n:
        raise ValueError(f"k must lie in 1..{g.n}")
    hs = cheeger_constants(g)
    if k > len(hs):
        raise ValueError(f"fewer than {k} disjoint sets of positive volume exist")
    return hs[k - 1]


def multiway_cheeger_by_labels(g: Graph, k: int) -> Fraction:
    """Literal label-assignment search over ``{0..k}^n``; slow, for cross-checks."""
    best = None
    ratio_cache: dict[int, Fraction | None] = {}

    def ratio(a: int) -> Fraction | None:
        if a not in ratio_cache:
            vol = volume(g, a)
            ratio_cache[a] = Fraction(edge_boundary(g, a), vol) if vol else None
        return ratio_cache[a]

    for labels in itertools.product(range(k + 1), repeat=g.n):
        sets = [0] * k
        for v, lab in enumerate(labels):
            if lab:
                sets[lab - 1] |= 1 << v
        if not all(sets):
            continue
        rs = [ratio(a) for a in sets]
        if any(r is None for r in rs):
            continue
        worst = max(rs)
        if best is None or worst < best:
            best = worst
    if best is None:
        raise ValueError(f"fewer than {k} disjoint sets of positive volume exist")
    return best


# --------------------------------------------------------------------------
# min-max eigenvalues of the 1-Laplacian


@lru_cache(maxsize=64)
def minmax_spectrum_delta1(g: Graph, cap: int = DEFAULT_CAP) -> tuple[Fraction, ...]:
    """``(λ_1, ..., λ_n)`` of Δ_1: least value whose closed sublevel complex has Yang index ``>= k``."""
    filt = Filtration.of(g, cap)
    first = yang_thresholds(filt.complex, filt.vertex_rank)
    out = []
    reach = -1
    for q in range(g.n):
        if first[q] is None:
            raise ValueError(f"sublevel complexes never reach Yang index {q + 1}")
        reach = max(reach, first[q])
        out.append(filt.values[reach])
    return tuple(out)


def minmax_lambda_delta1(g: Graph, k: int) -> Fraction:
    if k < 1 or k > g.n:
        raise ValueError(f"k must lie in 1..{g.n}")
    return minmax_spectrum_delta1(g)[k - 1]


# --------------------------------------------------------------------------
# subpartitions into cliques


def block_c(size: int) -> int:
    return 1 if size <= 2 else 2


def _is_clique(g: Graph, block: int) -> bool:
    vs = members(block)
    return all(g.has_edge(i, j) for i, j in itertools.combinations(vs, 2))


def _validate_blocks(g: Graph, blocks: Iterable[Iterable[int]]) -> list[int]:
    masks = []
    seen = 0
    for b in blocks:
        vs = list(b)
        if not vs:
            raise InvalidSubpartitionError("blocks must be nonempty")
        if any(not 1 <= v <= g.n for v in vs):
            raise InvalidSubpartitionError("block vertex out of range")
        m = mask_of(vs)
        if m & seen:
            raise InvalidSubpartitionError("blocks must be pairwise disjoint")
        if not _is_clique(g, m):
            raise InvalidSubpartitionError(f"block {sorted(vs)} does not induce a complete subgraph")
        seen |= m
        masks.append(m)
    if not masks:
        raise InvalidSubpartitionError("a subpartition needs at least one block")
    return masks


def hstar(g: Graph, blocks: Iterable[Iterable[int]]) -> tuple[Fraction, int]:
    """``(min |∂A| / vol(A) over A meeting each block at most once, c(P))``."""
    masks = _validate_blocks(g, blocks)
    c = sum(block_c(len(members(m))) for m in masks)
    best = None
    choices = [[0] + [1 << (v - 1) for v in members(m)] for m in masks]
    for pick in itertools.product(*choices):
        a = 0
        for bit in pick:
            a |= bit
        if not a:
            continue
        vol = volume(g, a)
        if not vol:
            continue
        r = Fraction(edge_boundary(g, a), vol)
        if best is None or r < best:
            best = r
    if best is None:
        raise InvalidSubpartitionError("every admissible set has zero volume")
    return best, c


def pseudo_independence(g: Graph) -> int:
    """``α_*``: largest total c-value of pairwise non-adjacent cliques."""
    if g.n > INDEPENDENCE_CAP:
        raise ComplexSizeError(f"pseudo-independence search is capped at n <= {INDEPENDENCE_CAP}")
    cliques = [m for m in range(1, 1 << g.n) if _is_clique(g, m)]
    closed_nb = {}
    for m in cliques:
        nb = m
        for v in members(m):
            nb |= g.neighbor_masks[v - 1]
        closed_nb[m] = nb

    @lru_cache(maxsize=None)
    def best(avail: int) -> int:
        if not avail:
            return 0
        low = avail & -avail
        out = best(avail & ~low)
        for m in cliques:
            if m & low and not m & ~avail:
                out = max(out, block_c(bin(m).count("1")) + best(avail & ~closed_nb[m]))
        return out

    return best(g.full_mask)


# --------------------------------------------------------------------------
# closed-form spectra


def complete_graph_eigenpairs(n: int, p: float) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of Δ_p on K_n: ``j^{1/(p-1)}`` on ``i`` vertices, ``-i^{1/(p-1)}`` on ``j`` more, 0 elsewhere."""
    if n < 2:
        raise ValueError("need n >= 2")
    if p <= 1:
        raise ValueError("the complete-graph formula needs p > 1")
    e = 1.0 / (p - 1)
    out = [(0.0, np.ones(n))]
    for i in range(1, n):
        for j in range(i, n - i + 1):
            lam = (n - i - j + (i ** e + j ** e) ** (p - 1)) / (n - 1)
            x = np.zeros(n)
            x[:i] = j ** e
            x[i:i + j] = -(i ** e)
            out.append((lam, x))
    return out


def closed_form_spectra(family: str, n: int, p: float = 1) -> list:
    """Known spectra: ``complete`` (p > 1), ``cycle`` and ``path6`` (p = 1)."""
    family = family.lower()
    if family == "complete":
        if p <= 1:
            raise ValueError("complete family needs p > 1")
        if p == 2:
            return [Fraction(0), Fraction(n, n - 1)]
        vals = sorted(lam for lam, _ in complete_graph_eigenpairs(n, p))
        distinct = [vals[0]]
        for v in vals[1:]:
            if v - distinct[-1] > 1e-12 * max(1.0, abs(v)):
                distinct.append(v)
        return distinct
    if family == "cycle":
        if p != 1 or n < 3:
            raise ValueError("cycle family is the p = 1 spectrum for n >= 3")
        return [Fraction(0)] + sorted(Fraction(1, i) for i in range(1, n // 2 + 1))
    if family == "path6":
        if p != 1 or n != 6:
            raise ValueError("path6 family is the p = 1 spectrum of P_6")
        return [Fraction(0), Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(1)]
    raise ValueError(f"unknown family {family!r}")


def complete_distinct_count(n: int) -> int:
    """Number of distinct Δ_p eigenvalues on K_n for p not in {1, 2}."""
    return (n // 2) * (n - n // 2) + 1


# --------------------------------------------------------------------------
# p = 2 spectral gap near 1


def _p2_count_at_most(g: Graph, c: Fraction, strict: bool) -> int:
    """Exact count of normalized p = 2 eigenvalues ``< c`` (strict) or ``<= c``."""
    deg = g.degrees
    adj = g.adjacency()
    m = [[Fraction(deg[i] if i == j else 0) - Fraction(int(adj[i][j])) - (c * deg[i] if i == j else 0)
          for j in range(g.n)] for i in range(g.n)]
    neg, zero, _ = symmetric_inertia(m)
    return neg if strict else neg + zero


def p2_eigenvalues_in(g: Graph, lo: Fraction, hi: Fraction) -> int:
    """Exact number of normalized p = 2 eigenvalues in ``[lo, hi]`` (with multiplicity)."""
    if any(d == 0 for d in g.degrees):
        raise ValueError("the normalized problem needs every vertex to have an edge")
    return _p2_count_at_most(g, Fraction(hi), strict=False) - _p2_count_at_most(g, Fraction(lo), strict=True)


def gap_near_one_holds(g: Graph) -> bool:
    """``min_k |λ_k(Δ_2) - 1| <= 1/2``, decided exactly by inertia."""
    return p2_eigenvalues_in(g, Fraction(1, 2), Fraction(3, 2)) > 0


def minmax_eigenvalue_interval(p: float) -> tuple[float, float, bool]:
    """Interval holding a min-max Δ_p eigenvalue on connected graphs; the flag marks it closed."""
    if p < 1:
        raise ValueError("need p >= 1")
    if p == 2:
        return 0.5, 1.5, True
    if p < 2:
        return 2.0 ** (p - 3), 2.0 ** (p - 1) * (math.sqrt(3) / p) ** p, False
    return 2.0 ** (p - 1) / p ** p, 3 * 2.0 ** (p - 3), False


# --------------------------------------------------------------------------
# the inequality diagram


@dataclass(frozen=True)
class Arrow:
    """One ``lhs <= rhs`` relation; ``status`` is exact, approximate, or not checkable."""

    name: str
    lhs: float | Fraction | None
    rhs: float | Fraction | None
    status: str
    holds: bool | None

    def to_json(self) -> dict:
        def enc(v):
            if v is None:
                return None
            if isinstance(v, Fraction):
                return frac_str(v)
            return float(f"{float(v):.17g}")

        return {"name": self.name, "lhs": enc(self.lhs), "rhs": enc(self.rhs), "status": self.status, "holds": self.holds}


def _le(name: str, lhs, rhs, status: str, slack: float = 1e-9) -> Arrow:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return Arrow(name, lhs, rhs, status, lhs <= rhs)
    return Arrow(name, lhs, rhs, status, float(lhs) <= float(rhs) + slack)


NOT_CHECKABLE = (
    "h_k^2 / (C k^4) <= hhat_k (universal constant C unknown)",
    "h_k^p / (C_p k^{2p}) <= lambda_k(Delta_p) (constant C_p unknown)",
)


def _lambda_p(g: Graph, k: int, p: float) -> tuple[float, str]:
    from .psolver import branch_over_grid, spectrum_p2

    if p == 2:
        return float(spectrum_p2(g)[k - 1]), "exact"
    pts = branch_over_grid(g, k, [p])
    return pts[-1][1], "approximate"


def inequality_diagram_check(g: Graph, k: int, p: float) -> list[Arrow]:
    """Every checkable arrow of the Cheeger diagram at ``(k, p)``."""
    from .onelap import enumerate_delta1_spectrum
    from .psolver import eigenpairs_p2

    hs = cheeger_constants(g)
    hhat = minmax_lambda_delta1(g, k)
    arrows = []
    if k <= len(hs):
        arrows.append(_le("hhat_k <= h_k", hhat, hs[k - 1], "exact"))
    if p == 1:
        lam = hhat
        spec = enumerate_delta1_spectrum(g)
        arrows.append(Arrow("lambda_k(Delta_1) is a certified eigenvalue", lam, None, "exact", lam in spec.values))
        for mu in spec.values:
            if mu <= lam:
                x = spec.witnesses[mu].vector(g.n)
                m = strong_nodal_count(g, x)
                if m <= len(hs):
                    arrows.append(_le(f"h_m <= lambda_k(Delta_1) (nodal, eigenvalue {mu})", hs[m - 1], lam, "exact"))
        if k <= len(hs):
            arrows.append(_le("lambda_k(Delta_1) <= h_k", lam, hs[k - 1], "exact"))
    else:
        lam, status = _lambda_p(g, k, p)
        h = float(hhat)
        arrows.append(_le("2^{p-1}/p^p hhat_k^p <= lambda_k(Delta_p)", 2 ** (p - 1) / p ** p * h ** p, lam, status))
        arrows.append(_le("lambda_k(Delta_p) <= 2^{p-1} hhat_k", lam, 2 ** (p - 1) * h, status))
        if p == 2:
            vals, vecs = eigenpairs_p2(g)
            for idx in range(g.n):
                if vals[idx] <= lam + 1e-12:
                    x = np.where(np.abs(vecs[:, idx]) < 1e-9, 0.0, vecs[:, idx])
                    if not np.any(x):
                        continue
                    m = strong_nodal_count(g, x)
                    if m <= len(hs):
                        hm = float(hs[m - 1])
                        arrows.append(_le(f"h_m^2/2 <= lambda_k(Delta_2) (nodal, eigenvector {idx + 1})",
                                          hm ** 2 / 2, lam, "exact"))
    for name in NOT_CHECKABLE:
        arrows.append(Arrow(name, None, None, "not checkable", None))
    return arrows


def cheeger_report(g: Graph, p: float = 1) -> dict:
    """JSON-ready ``{k: {h_k, hhat_k, lambda_k_delta1, h_over_hhat, arrows}}``."""
    hs = cheeger_constants(g)
    mm = minmax_spectrum_delta1(g)
    out = {}
    for k in range(1, g.n + 1):
        entry = {
            "h_k": frac_str(hs[k - 1]) if k <= len(hs) else None,
            "hhat_k": frac_str(mm[k - 1]),
            "lambda_k_delta1": frac_str(mm[k - 1]),
            "h_over_hhat": frac_str(hs[k - 1] / mm[k - 1]) if k <= len(hs) and mm[k - 1] else None,
            "arrows": [a.to_json() for a in inequality_diagram_check(g, k, p)],
        }
        out[str(k)] = entry
    return out


def sandwich_holds(g: Graph, p: float, k: int) -> bool:
    """The two-sided bound between ``hhat_k`` and ``λ_k(Δ_p)``.

    At p = 1 both bounds collapse to ``λ_k(Δ_1) = hhat_k``; since λ_k(Δ_1) is
    computed through hhat_k, the check there is that hhat_k is a certified
    eigenvalue from the independent vertex search.
    """
    from .onelap import enumerate_delta1_spectrum

    hhat = minmax_lambda_delta1(g, k)
    if p == 1:
        return hhat in enumerate_delta1_spectrum(g).values
    lam, _ = _lambda_p(g, k, p)
    h = float(hhat)
    return 2 ** (p - 1) / p ** p * h ** p <= lam + 1e-9 and lam <= 2 ** (p - 1) * h + 1e-9


def independence_top_values(g: Graph) -> tuple[Fraction, ...]:
    """``λ_{n-α_*+1}(Δ_1), ..., λ_n(Δ_1)``; all should equal 1."""
    a = pseudo_independence(g)
    return minmax_spectrum_delta1(g)[g.n - a:]


def subpartition_lower_bound(g: Graph, blocks: Sequence[Sequence[int]]) -> tuple[Fraction, Fraction]:
    """``(λ_{n-c(P)+1}(Δ_1), h_*(P))``; the first should be at least the second."""
    h, c = hstar(g, blocks)
    return minmax_lambda_delta1(g, g.n - c + 1), h
