"""Numerics for p > 1: operator, residuals, the p = 2 spectrum, eigenbranch continuation in p."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import Graph, GraphInputError, ZeroVectorError


class ContinuationError(RuntimeError):
    def __init__(self, message: str, p: float) -> None:
        super().__init__(f"{message} at p = {p:.17g}")
        self.p = p


class BranchLossError(ContinuationError):
    """Newton failed to reconverge even after repeated step halving."""


class SingularJacobianError(ContinuationError):
    """The linearized eigen-system lost rank and Newton could not proceed."""


def phi_p(t: np.ndarray | float, p: float) -> np.ndarray:
    """``|t|^{p-2} t`` with the value 0 at t = 0."""
    t = np.asarray(t, dtype=float)
    return np.sign(t) * np.abs(t) ** (p - 1)


def apply_delta_p(g: Graph, x: Sequence[float], p: float) -> np.ndarray:
    """``(Δ_p x)_i = sum_{j ~ i} |x_i - x_j|^{p-2} (x_i - x_j)``."""
    if p <= 1:
        raise ValueError("apply_delta_p needs p > 1")
    x = np.asarray(x, dtype=float)
    out = np.zeros(g.n)
    I, J = g.edge_index
    if I.size:
        flux = phi_p(x[I] - x[J], p)
        np.add.at(out, I, flux)
        np.add.at(out, J, -flux)
    return out


def eigen_residual(g: Graph, lam: float, x: Sequence[float], p: float) -> float:
    """Max-norm of ``Δ_p x - λ D |x|^{p-2} x`` after scaling ``x`` to unit max-norm."""
    x = np.asarray(x, dtype=float)
    m = np.max(np.abs(x)) if x.size else 0.0
    if m == 0:
        raise ZeroVectorError("x must be nonzero")
    x = x / m
    deg = np.asarray(g.degrees, dtype=float)
    r = apply_delta_p(g, x, p) - lam * deg * phi_p(x, p)
    return float(np.max(np.abs(r)))


def rayleigh_p(g: Graph, x: Sequence[float], p: float) -> float:
    x = np.asarray(x, dtype=float)
    I, J = g.edge_index
    den = float(np.sum(np.asarray(g.degrees) * np.abs(x) ** p))
    if den == 0:
        raise ZeroVectorError("x must be nonzero on a vertex of positive degree")
    return float(np.sum(np.abs(x[I] - x[J]) ** p)) / den


def _require_no_isolated(g: Graph) -> np.ndarray:
    deg = np.asarray(g.degrees, dtype=float)
    if np.any(deg == 0):
        raise GraphInputError("the normalized problem needs every vertex to have an edge")
    return deg


def eigenpairs_p2(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors ``x = D^{-1/2} v`` of the p = 2 problem."""
    deg = _require_no_isolated(g)
    s = 1.0 / np.sqrt(deg)
    lap = np.diag(deg) - g.adjacency().astype(float)
    vals, vecs = np.linalg.eigh(s[:, None] * lap * s[None, :])
    return vals, s[:, None] * vecs


def spectrum_p2(g: Graph) -> np.ndarray:
    """Eigenvalues of ``D^{-1/2}(D - A)D^{-1/2}``, sorted ascending."""
    return eigenpairs_p2(g)[0]


# --------------------------------------------------------------------------
# continuation
#
# Near p = 1 the differences x_i - x_j inside a cluster scale like
# z^{1/(p-1)} for fluxes |z| < 1, far below double precision relative to x.
# The solver therefore works with edge fluxes z = φ_p(x_i - x_j) on a spanning
# tree of the graph plus a ground vertex (x_0 = 0), and keeps every tree
# difference in log form. With a minimum spanning tree for |x_i - x_j| the sum
# along any tree path is at least its largest term, so no cancellation occurs.


def residual_tolerance(p: float) -> float:
    return 1e-10 if p >= 1.5 else 1e-8


@dataclass(frozen=True)
class BranchSample:
    p: float
    lam: float
    x: np.ndarray
    residual: float


@dataclass
class EigenBranch:
    label: str
    samples: list[BranchSample] = field(default_factory=list)
    lost_at: float | None = None
    error: str | None = None

    @property
    def ps(self) -> np.ndarray:
        return np.array([s.p for s in self.samples])

    @property
    def lams(self) -> np.ndarray:
        return np.array([s.lam for s in self.samples])

    def last(self) -> BranchSample:
        return self.samples[-1]


class _Frame:
    """Augmented graph: vertex 0 is ground, graph vertex i is node i.

    Edges are the graph edges ``(i, j)`` followed by ground edges ``(i, 0)``;
    each stands for the difference ``x_tail - x_head``.
    """

    def __init__(self, g: Graph) -> None:
        self.g = g
        self.n = g.n
        self.edges = [tuple(e) for e in g.edges] + [(i, 0) for i in range(1, g.n + 1)]
        self.m_graph = len(g.edges)
        inc = np.zeros((g.n, self.m_graph))
        for k, (i, j) in enumerate(g.edges):
            inc[i - 1, k] += 1
            inc[j - 1, k] -= 1
        self.incidence = inc
        self.deg = np.asarray(g.degrees, dtype=float)

    def tree_paths(self, tree: Sequence[int]) -> np.ndarray:
        """``O[e, k]``: orientation of tree edge ``k`` on the tree path realizing edge ``e``."""
        n1 = self.n + 1
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n1)]
        for k, e in enumerate(tree):
            u, v = self.edges[e]
            adj[u].append((v, k, 1))  # stepping u -> v adds x_u - x_v = +t_k
            adj[v].append((u, k, -1))
        parent = [-1] * n1
        pedge = [(-1, 0)] * n1
        depth = [0] * n1
        seen = [False] * n1
        seen[0] = True
        stack = [0]
        while stack:
            u = stack.pop()
            for v, k, o in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    pedge[v] = (k, -o)  # stepping v -> u
                    depth[v] = depth[u] + 1
                    stack.append(v)
        if not all(seen):
            raise ValueError("tree does not span the augmented graph")
        O = np.zeros((len(self.edges), len(tree)))
        for e, (a, b) in enumerate(self.edges):
            # x_a - x_b: walk a up and b up to the common ancestor
            while depth[a] > depth[b]:
                k, o = pedge[a]
                O[e, k] += o
                a = parent[a]
            while depth[b] > depth[a]:
                k, o = pedge[b]
                O[e, k] -= o
                b = parent[b]
            while a != b:
                k, o = pedge[a]
                O[e, k] += o
                a = parent[a]
                k, o = pedge[b]
                O[e, k] -= o
                b = parent[b]
        return O

    def min_tree(self, log_abs: np.ndarray) -> list[int]:
        """Kruskal on ``|difference|`` (given as logs), ties by edge index."""
        order = sorted(range(len(self.edges)), key=lambda e: (log_abs[e], e))
        parent = list(range(self.n + 1))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        tree = []
        for e in order:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                tree.append(e)
        return sorted(tree)


@dataclass
class _Eval:
    flux: np.ndarray  # φ_p of every augmented-edge difference
    log_abs: np.ndarray  # log |difference| per augmented edge
    sign: np.ndarray  # sign of each difference
    r: np.ndarray  # eigen-equations then normalization
    residual: float
    jac: np.ndarray | None = None


class _FluxState:
    """Tree fluxes plus λ; used for p < 2."""

    kind = "flux"

    def __init__(self, frame: _Frame, tree: list[int], f: np.ndarray, lam: float) -> None:
        self.frame = frame
        self.tree = tree
        self.O = frame.tree_paths(tree)
        self.f = np.asarray(f, dtype=float)
        self.lam = float(lam)

    def copy(self) -> _FluxState:
        s = object.__new__(_FluxState)
        s.frame, s.tree, s.O, s.f, s.lam = self.frame, self.tree, self.O, self.f.copy(), self.lam
        return s

    @property
    def params(self) -> np.ndarray:
        return np.concatenate([self.f, [self.lam]])

    def set_params(self, v: np.ndarray) -> None:
        self.f, self.lam = v[:-1].copy(), float(v[-1])

    def evaluate(self, p: float, params: np.ndarray | None = None, jac: bool = False) -> _Eval:
        fr = self.frame
        f, lam = (self.f, self.lam) if params is None else (params[:-1], float(params[-1]))
        q = 1.0 / (p - 1.0)
        absf = np.abs(f)
        with np.errstate(divide="ignore"):
            lf = np.log(absf)
        L = q * lf
        s = np.sign(f)
        O = self.O
        mask = (O != 0) & (absf > 0)[None, :]
        Lm = np.where(mask, L[None, :], -np.inf)
        M = Lm.max(axis=1)
        finite = np.isfinite(M)
        Msafe = np.where(finite, M, 0.0)
        terms = np.where(mask, O * s[None, :] * np.exp(np.where(mask, L[None, :] - Msafe[:, None], 0.0)), 0.0)
        Sp = terms.sum(axis=1)
        with np.errstate(divide="ignore"):
            log_abs = np.where(finite & (Sp != 0), Msafe + np.log(np.abs(Sp)), -np.inf)
        sign = np.where(np.isfinite(log_abs), np.sign(Sp), 0.0)
        flux = sign * np.exp(np.where(np.isfinite(log_abs), log_abs / q, -np.inf))
        mg = fr.m_graph
        w = flux[mg:]
        log_x = log_abs[mg:]
        R = fr.incidence @ flux[:mg] - lam * fr.deg * w
        log_terms = np.where(np.isfinite(log_x), np.log(fr.deg) + p * log_x, -np.inf)
        top = log_terms.max()
        total = np.exp(log_terms - top).sum()
        norm = top + math.log(total)
        r = np.concatenate([R, [norm]])
        log_xinf = log_x.max()
        residual = float(np.max(np.abs(R)) * math.exp(-(p - 1) * log_xinf))
        out = _Eval(flux, log_abs, sign, r, residual)
        if jac:
            out.jac = self._jacobian(p, q, f, lam, lf, log_abs, sign, w, log_x, log_terms - norm)
        return out

    def _jacobian(self, p, q, f, lam, lf, log_abs, sign, w, log_x, log_share) -> np.ndarray:
        fr = self.frame
        O = self.O
        n = fr.n
        # dF_e/df_k = O[e,k] |f_k|^{q-1} |S_e|^{1/q-1}, bounded by 1 along a minimum tree
        lf_safe = np.maximum(lf, -700.0)
        zero_s = ~np.isfinite(log_abs)
        log_s = np.where(zero_s, 0.0, log_abs)
        expo = (q - 1.0) * lf_safe[None, :] + (1.0 / q - 1.0) * log_s[:, None]
        expo = np.where(zero_s[:, None], 0.0, expo)
        dF = O * np.exp(np.minimum(expo, 50.0))
        for k, e in enumerate(self.tree):
            dF[e, :] = 0.0
            dF[e, k] = 1.0
        mg = fr.m_graph
        J = np.zeros((n + 1, n + 1))
        J[:n, :n] = fr.incidence @ dF[:mg] - lam * fr.deg[:, None] * dF[mg:]
        J[:n, n] = -fr.deg * w
        # d log|x_i| / df_k = sign(x_i) O[g_i,k] q |f_k|^{q-1} / |x_i|
        share = np.exp(log_share)
        fin = np.isfinite(log_x)
        log_xs = np.where(fin, log_x, 0.0)
        dlog = O[mg:] * sign[mg:, None] * q * np.exp(np.minimum((q - 1.0) * lf_safe[None, :] - log_xs[:, None], 50.0))
        dlog = np.where(fin[:, None], dlog, 0.0)
        J[n, :n] = p * (share @ dlog)
        return J

    def x_vector(self, p: float) -> np.ndarray:
        ev = self.evaluate(p)
        mg = self.frame.m_graph
        return ev.sign[mg:] * np.exp(ev.log_abs[mg:])

    def refresh(self, p: float) -> None:
        """Rebuild the minimum tree at the current solution."""
        ev = self.evaluate(p)
        tree = self.frame.min_tree(ev.log_abs)
        if tree != self.tree:
            self.tree = tree
            self.O = self.frame.tree_paths(tree)
            self.f = ev.flux[tree].copy()

    def anchor_sign(self, p: float) -> None:
        x = self.x_vector(p)
        i = int(np.argmax(np.abs(x)))
        if x[i] < 0:
            self.f = -self.f


class _XState:
    """Plain coordinates plus λ; used for p >= 2 where φ_p is continuously differentiable."""

    kind = "x"

    def __init__(self, g: Graph, x: np.ndarray, lam: float) -> None:
        self.g = g
        self.deg = np.asarray(g.degrees, dtype=float)
        self.I, self.J = g.edge_index
        self.x = np.asarray(x, dtype=float).copy()
        self.lam = float(lam)

    def copy(self) -> _XState:
        return _XState(self.g, self.x, self.lam)

    @property
    def params(self) -> np.ndarray:
        return np.concatenate([self.x, [self.lam]])

    def set_params(self, v: np.ndarray) -> None:
        self.x, self.lam = v[:-1].copy(), float(v[-1])

    def evaluate(self, p: float, params: np.ndarray | None = None, jac: bool = False) -> _Eval:
        x, lam = (self.x, self.lam) if params is None else (params[:-1], float(params[-1]))
        n = self.g.n
        I, J = self.I, self.J
        t = x[I] - x[J]
        flux = phi_p(t, p)
        R = np.zeros(n)
        np.add.at(R, I, flux)
        np.add.at(R, J, -flux)
        w = phi_p(x, p)
        R -= lam * self.deg * w
        total = float(np.sum(self.deg * np.abs(x) ** p))
        norm = math.log(total) if total > 0 else -math.inf
        xinf = np.max(np.abs(x))
        residual = float(np.max(np.abs(R)) / xinf ** (p - 1)) if xinf > 0 else np.inf
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(t))
        out = _Eval(flux, log_abs, np.sign(t), np.concatenate([R, [norm]]), residual)
        if jac:
            Jm = np.zeros((n + 1, n + 1))
            c = (p - 1) * np.abs(t) ** (p - 2) if p != 2 else np.ones_like(t)
            np.add.at(Jm, (I, I), c)
            np.add.at(Jm, (J, J), c)
            np.add.at(Jm, (I, J), -c)
            np.add.at(Jm, (J, I), -c)
            dv = (p - 1) * np.abs(x) ** (p - 2) if p != 2 else np.ones_like(x)
            Jm[np.arange(n), np.arange(n)] -= lam * self.deg * dv
            Jm[:n, n] = -self.deg * w
            Jm[n, :n] = p * self.deg * w / total
            out.jac = Jm
        return out

    def x_vector(self, p: float) -> np.ndarray:
        return self.x.copy()

    def refresh(self, p: float) -> None:
        pass

    def anchor_sign(self, p: float) -> None:
        i = int(np.argmax(np.abs(self.x)))
        if self.x[i] < 0:
            self.x = -self.x


def _newton(state, p: float, max_iter: int = 60) -> tuple[bool, float, bool]:
    """Polish ``state`` at ``p``; returns ``(converged, residual, rank_deficient)``."""
    tol = residual_tolerance(p)
    target = tol * 1e-3
    rank_def = False
    ev = state.evaluate(p, jac=True)
    for _ in range(max_iter):
        if ev.residual <= target and abs(ev.r[-1]) <= 1e-12:
            break
        J = ev.jac
        if not np.all(np.isfinite(J)):
            rank_def = True
            break
        delta, _, rank, _ = np.linalg.lstsq(J, -ev.r, rcond=None)
        if rank < J.shape[0]:
            rank_def = True
        merit = np.linalg.norm(ev.r)
        base = state.params
        alpha = 1.0
        accepted = False
        while alpha > 1e-6:
            trial = base + alpha * delta
            tr = state.evaluate(p, trial)
            if np.all(np.isfinite(tr.r)) and np.linalg.norm(tr.r) < (1 - 1e-4 * alpha) * merit:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break
        state.set_params(trial)
        ev = state.evaluate(p, jac=True)
    ok = ev.residual <= tol and abs(ev.r[-1]) <= 1e-9
    return ok, ev.residual, rank_def


def _state_from_vector(g: Graph, lam: float, x: Sequence[float], p: float, kind: str | None = None):
    """Continuation state for ``(λ, x)`` at ``p``; by default the representation suited to ``p``."""
    x = np.asarray(x, dtype=float)
    if kind is None:
        kind = "x" if p >= 2 else "flux"
    if kind == "x":
        st = _XState(g, x, lam)
        ev = st.evaluate(p)
        st.x = st.x * math.exp(-ev.r[-1] / p)
        return st
    frame = _Frame(g)
    diffs = np.array([(x[a - 1] if a else 0.0) - (x[b - 1] if b else 0.0) for a, b in frame.edges])
    with np.errstate(divide="ignore"):
        tree = frame.min_tree(np.log(np.abs(diffs)))
    f = phi_p(diffs[tree], p)
    st = _FluxState(frame, tree, f, lam)
    # impose the normalization before Newton
    ev = st.evaluate(p)
    st.f = st.f * math.exp(-ev.r[-1] * (p - 1) / p)
    return st


def seed_from_p2(g: Graph, k: int) -> tuple[float, float, np.ndarray]:
    """The ``k``-th (1-based, ascending) p = 2 eigenpair as a continuation seed."""
    vals, vecs = eigenpairs_p2(g)
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in 1..{g.n}")
    return 2.0, float(vals[k - 1]), vecs[:, k - 1]


def seed_from_delta1(g: Graph, lam, x: Sequence, p: float) -> _FluxState:
    """Flux state near p = 1 built from a 1-Laplacian eigenpair ``(λ, x)``.

    Untied edges carry flux ``sign(x_i - x_j)`` and nonzero coordinates ground
    flux ``sign(x_i)``. The free part (tied edges, ground flux of zero
    coordinates) is the minimum-norm solution of the balance equations, which
    spreads the subgradient evenly the way the p -> 1 limit does.
    """
    frame = _Frame(g)
    lam = float(lam)
    x = np.array([float(v) for v in x])
    if not np.any(x):
        raise ZeroVectorError("x must be nonzero")
    flux = np.zeros(len(frame.edges))
    free: list[int] = []
    for k, (i, j) in enumerate(g.edges):
        s = np.sign(x[i - 1] - x[j - 1])
        flux[k] = s
        if s == 0:
            free.append(k)
    mg = frame.m_graph
    for i in range(g.n):
        flux[mg + i] = np.sign(x[i])
        if x[i] == 0:
            free.append(mg + i)
    # balance: incidence @ z - λ d w = 0, solved for the free entries with weights sqrt(d)
    A = np.zeros((g.n, len(frame.edges)))
    A[:, :mg] = frame.incidence
    A[:, mg:] = -lam * np.diag(frame.deg)
    scale = np.ones(len(frame.edges))
    scale[mg:] = 1.0 / np.sqrt(frame.deg)
    rhs = -(A @ flux)
    if free:
        cols = A[:, free] * scale[free]
        u = np.linalg.lstsq(cols, rhs, rcond=None)[0]
        flux[free] = np.clip(u * scale[free], -1.0, 1.0)
    weight = np.array([abs((x[a - 1] if a else 0.0) - (x[b - 1] if b else 0.0)) for a, b in frame.edges])
    with np.errstate(divide="ignore"):
        tree = frame.min_tree(np.log(weight))
    if p >= 2:
        raise ValueError("a 1-Laplacian seed is meant for p close to 1")
    st = _FluxState(frame, tree, flux[tree], lam)
    ev = st.evaluate(p)
    st.f = st.f * math.exp(-ev.r[-1] * (p - 1) / p)
    return st


def _convert(state, g: Graph, p_at: float, p_next: float):
    """Switch representation when the step ``p_at -> p_next`` needs the other one."""
    want = "x" if min(p_at, p_next) >= 2 else "flux"
    if state.kind == want:
        return state.copy()
    return _state_from_vector(g, state.lam, state.x_vector(p_at), p_at, want)


def _advance(state, g: Graph, p_from: float, p_to: float, depth: int = 0):
    if (p_from - 2) * (p_to - 2) < 0:
        state = _advance(state, g, p_from, 2.0, depth)
        p_from = 2.0
    trial = _convert(state, g, p_from, p_to)
    ok, res, rank_def = _newton(trial, p_to)
    if ok:
        trial.refresh(p_to)
        return trial
    if depth >= 14:
        cls = SingularJacobianError if rank_def else BranchLossError
        raise cls(f"Newton failed (residual {res:.3g})", p_to)
    mid = 0.5 * (p_from + p_to)
    half = _advance(state, g, p_from, mid, depth + 1)
    return _advance(half, g, mid, p_to, depth + 1)


def _sample(state, p: float) -> BranchSample:
    state.anchor_sign(p)
    x = state.x_vector(p)
    return BranchSample(p, state.lam, x / np.max(np.abs(x)), state.evaluate(p).residual)


def trace(g: Graph, state, p0: float, grid: Sequence[float], label: str = "", strict: bool = True) -> EigenBranch:
    """Follow ``state`` (already near ``p0``) through ``grid`` (monotone), sampling each point."""
    branch = EigenBranch(label)
    ok, res, rank_def = _newton(state, p0)
    if not ok:
        err = (SingularJacobianError if rank_def else BranchLossError)(f"seed does not converge (residual {res:.3g})", p0)
        if strict:
            raise err
        branch.lost_at, branch.error = p0, str(err)
        return branch
    state.refresh(p0)
    prev = p0
    grid = list(grid)
    if grid and grid[0] == p0:
        branch.samples.append(_sample(state, p0))
        grid = grid[1:]
    for p in grid:
        try:
            state = _advance(state, g, prev, p)
        except ContinuationError as err:
            if strict:
                raise
            branch.lost_at, branch.error = err.p, str(err)
            break
        branch.samples.append(_sample(state, p))
        prev = p
    return branch


def geometric_grid(p0: float, p_target: float, steps: int) -> list[float]:
    """``steps`` points geometric in ``p - 1`` from ``p0`` to ``p_target`` (both included)."""
    if p0 <= 1 or p_target <= 1:
        raise ValueError("continuation endpoints must exceed 1")
    a, b = math.log(p0 - 1), math.log(p_target - 1)
    return [1 + math.exp(a + (b - a) * i / steps) for i in range(steps + 1)]


def continue_branch(g: Graph, seed: tuple[float, float, Sequence[float]], p_target: float, steps: int = 200,
                    label: str = "", strict: bool = True) -> EigenBranch:
    """Predictor-corrector continuation of an eigenpair ``(p0, λ0, x0)`` to ``p_target``."""
    p0, lam0, x0 = seed
    if not np.any(np.asarray(x0, dtype=float)):
        raise ZeroVectorError("seed vector must be nonzero")
    state = _state_from_vector(g, lam0, x0, p0)
    return trace(g, state, p0, geometric_grid(p0, p_target, steps), label, strict)


def continue_from_state(g: Graph, state, p0: float, p_target: float, steps: int = 200,
                        label: str = "", strict: bool = True) -> EigenBranch:
    return trace(g, state, p0, geometric_grid(p0, p_target, steps), label, strict)


# --------------------------------------------------------------------------
# transport map and its inequalities


def phi_map(x: Sequence[float], ratio: float) -> np.ndarray:
    """``Φ_r(x) = (|x_i|^r sign(x_i))_i``."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** ratio


@dataclass(frozen=True)
class TransportReport:
    """Both transport inequalities at ``(x, p, q)``; each slack is ``rhs - lhs`` of an ``lhs <= rhs`` form."""

    lower_lhs: float  # 2^{p-q} F_q(x)
    lower_rhs: float  # F_p(Φ_{q/p} x)
    upper_lhs: float  # p (2 F_p(Φ_{q/p} x))^{1/p}
    upper_rhs: float  # q (2 F_q(x))^{1/q}

    @property
    def lower_slack(self) -> float:
        return self.lower_rhs - self.lower_lhs

    @property
    def upper_slack(self) -> float:
        return self.upper_rhs - self.upper_lhs

    @property
    def holds(self) -> bool:
        return self.lower_slack >= -1e-10 and self.upper_slack >= -1e-10


def transport_inequality_check(g: Graph, x: Sequence[float], p: float, q: float) -> TransportReport:
    if not 1 <= p <= q:
        raise ValueError("need 1 <= p <= q")
    y = phi_map(x, q / p)
    fp = rayleigh_p(g, y, p)
    fq = rayleigh_p(g, x, q)
    return TransportReport(2.0 ** (p - q) * fq, fp, p * (2 * fp) ** (1 / p), q * (2 * fq) ** (1 / q))


def power_mean_inequality_check(t: float, a: float, b: float) -> tuple[float, float]:
    """Slacks of ``M |b-a| <= |Φ_t(b) - Φ_t(a)| <= t M |b-a|`` with ``M = ((|a|^t+|b|^t)/2)^{1-1/t}``."""
    if t < 1:
        raise ValueError("need t >= 1")
    lhs = abs(math.copysign(abs(b) ** t, b) - math.copysign(abs(a) ** t, a))
    m = ((abs(a) ** t + abs(b) ** t) / 2) ** (1 - 1 / t)
    base = abs(b - a) * m
    return lhs - base, t * base - lhs


# --------------------------------------------------------------------------
# monotonicity in p


@dataclass(frozen=True)
class MonotonicityRow:
    p: float
    lam: float
    increasing: float  # p (2λ)^{1/p}
    decreasing: float  # 2^{-p} λ
    violation: bool


def branch_over_grid(g: Graph, k: int, p_grid: Sequence[float], strict: bool = True) -> list[tuple[float, float]]:
    """Continue the ``k``-th p = 2 eigenpair over ``p_grid``; returns ``(p, λ)`` ascending in p."""
    grid = sorted(set(float(p) for p in p_grid))
    if grid[0] <= 1:
        raise ValueError("grid must lie in (1, inf)")
    seed = seed_from_p2(g, k)
    below = [p for p in grid if p < 2.0][::-1]
    above = [p for p in grid if p > 2.0]
    out: dict[float, float] = {}
    for part in (below, above):
        if not part:
            continue
        st = _state_from_vector(g, seed[1], seed[2], 2.0)
        br = trace(g, st, 2.0, part, strict=strict)
        out.update((s.p, s.lam) for s in br.samples)
    if 2.0 in grid:
        out[2.0] = seed[1]
    return sorted(out.items())


def monotonicity_sweep(g: Graph, k: int, p_grid: Sequence[float], slack: float = 1e-6) -> list[MonotonicityRow]:
    """Tabulate ``p (2λ)^{1/p}`` (should not decrease) and ``2^{-p} λ`` (should not increase)."""
    pts = branch_over_grid(g, k, p_grid)
    rows = []
    prev = None
    for p, lam in pts:
        lam_c = max(lam, 0.0)
        inc = p * (2 * lam_c) ** (1 / p)
        dec = 2.0 ** (-p) * lam_c
        bad = prev is not None and (inc < prev[0] - slack or dec > prev[1] + slack)
        rows.append(MonotonicityRow(p, lam, inc, dec, bad))
        prev = (inc, dec)
    return rows


# --------------------------------------------------------------------------
# two vertices joined by two edges with different incidence coefficients


def two_vertex_generalized_fp(x: Sequence[float], p: float) -> float:
    """``(|x1 + x2|^p + |x1 - 2 x2|^p) / (2|x1|^p + 3|x2|^p)``."""
    x1, x2 = (float(v) for v in x)
    den = 2 * abs(x1) ** p + 3 * abs(x2) ** p
    if den == 0:
        raise ZeroVectorError("x must be nonzero")
    return (abs(x1 + x2) ** p + abs(x1 - 2 * x2) ** p) / den
