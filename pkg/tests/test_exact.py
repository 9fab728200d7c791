from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plap.exact import (
    CirculationProblem,
    CompositionNonzeroError,
    GF2Matrix,
    circulation_feasible,
    frac_str,
    gf2_quotient_dim,
    gf2_rank,
    lp_feasible,
    parse_frac,
    symmetric_inertia,
)
from plap.onelap import eigen_circulation
from plap.catalog import path

F = Fraction

TRIANGLE_D1 = GF2Matrix.from_columns(3, [(0, 1), (1, 2), (0, 2)])


def rank_mod2_reference(rows):
    """Textbook elimination on 0/1 lists."""
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                m[i] = [(a + b) % 2 for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def test_rank_identity_and_zero():
    assert gf2_rank(GF2Matrix.identity(3)) == 3
    assert gf2_rank(GF2Matrix.zeros(3, 3)) == 0


def test_rank_triangle_boundary():
    assert gf2_rank(TRIANGLE_D1) == 2


def test_triangle_betti_numbers():
    assert gf2_quotient_dim(GF2Matrix.zeros(3, 0), TRIANGLE_D1) == 1
    assert gf2_quotient_dim(TRIANGLE_D1, GF2Matrix.zeros(0, 3)) == 1


def test_quotient_of_zero_maps():
    assert gf2_quotient_dim(GF2Matrix.zeros(1, 0), GF2Matrix.zeros(0, 1)) == 1


def test_quotient_rejects_nonzero_composition():
    with pytest.raises(CompositionNonzeroError):
        gf2_quotient_dim(GF2Matrix.identity(2), GF2Matrix.from_dense([[1, 1]]))


matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rank_properties(rows):
    m = GF2Matrix.from_dense(rows)
    r = gf2_rank(m)
    assert r == rank_mod2_reference(rows)
    assert r <= min(m.rows, m.cols)
    assert gf2_rank(m.transpose()) == r


@given(matrices)
def test_rank_nullity(rows):
    m = GF2Matrix.from_dense(rows)
    # kernel dimension counted by brute force over all vectors
    cols = m.cols
    kernel = sum(1 for v in range(1 << cols) if all(bin(r & v).count("1") % 2 == 0 for r in m.bits))
    assert gf2_rank(m) + (kernel.bit_length() - 1) == cols


def test_frac_round_trip():
    assert frac_str(F(5, 9)) == "5/9"
    assert frac_str(0) == "0/1"
    assert parse_frac("5/9") == F(5, 9)


# --------------------------------------------------------------------------
# circulations


def test_all_zero_problem_is_feasible():
    prob = CirculationProblem(3, ((0, 1, F(0), F(0)), (1, 2, F(0), F(0))), ((F(0), F(0)),) * 3)
    res = circulation_feasible(prob)
    assert res.feasible and all(f == 0 for f in res.flow)


def p6_encoding(lam):
    x = [F(1), F(1), F(0), F(0), F(0), F(0)]
    return eigen_circulation(path(6), lam, x)


def test_p6_eigen_encoding_feasible_at_one_third():
    res = circulation_feasible(p6_encoding(F(1, 3)))
    assert res.feasible
    assert p6_encoding(F(1, 3)).check(res.flow)


def test_p6_eigen_encoding_infeasible_at_one_quarter():
    assert not circulation_feasible(p6_encoding(F(1, 4))).feasible


def test_p6_encoding_feasible_only_at_one_third():
    # by hand: vertex 1 forces z_12 = λ, vertex 2 forces z_12 = 1 - 2λ
    feasible = [F(k, 24) for k in range(25) if circulation_feasible(p6_encoding(F(k, 24))).feasible]
    assert feasible == [F(1, 3)]


@st.composite
def circulations(draw):
    n = draw(st.integers(2, 5))
    arcs = []
    for _ in range(draw(st.integers(1, 7))):
        t = draw(st.integers(0, n - 1))
        h = draw(st.integers(0, n - 1).filter(lambda v: v != t))
        lo = F(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
        hi = lo + F(draw(st.integers(0, 6)), draw(st.integers(1, 3)))
        arcs.append((t, h, lo, hi))
    bal = []
    for _ in range(n):
        lo = F(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
        bal.append((lo, lo + F(draw(st.integers(0, 4)), 2)))
    return CirculationProblem(n, tuple(arcs), tuple(bal))


def brute_force_feasible(prob):
    """LP feasibility of the same system through the simplex oracle."""
    m = len(prob.arcs)
    n = prob.n_nodes
    # variables: f = lo + u, u in [0, hi - lo]; slack s_v for the balance interval
    rows, rhs = [], []
    width = m + m + n + n
    for k, (t, h, lo, hi) in enumerate(prob.arcs):
        row = [F(0)] * width
        row[k] = F(1)
        row[m + k] = F(1)
        rows.append(row)
        rhs.append(hi - lo)
    for v in range(n):
        base = sum((lo if t == v else -lo if h == v else 0) for t, h, lo, _ in prob.arcs)
        lo_v, hi_v = prob.balances[v]
        row = [F(0)] * width
        for k, (t, h, _, _) in enumerate(prob.arcs):
            if t == v:
                row[k] += 1
            if h == v:
                row[k] -= 1
        row[2 * m + v] = F(-1)  # net - s = lo_v, s in [0, hi_v - lo_v]
        rows.append(row)
        rhs.append(lo_v - base)
        cap = [F(0)] * width
        cap[2 * m + v] = F(1)
        cap[2 * m + n + v] = F(1)
        rows.append(cap)
        rhs.append(hi_v - lo_v)
    return lp_feasible(rows, rhs).feasible


@given(circulations())
def test_circulation_agrees_with_lp(prob):
    res = circulation_feasible(prob)
    assert res.feasible == brute_force_feasible(prob)
    if res.feasible:
        assert prob.check(res.flow)


@given(circulations(), st.integers(1, 5), st.integers(1, 5))
def test_circulation_scaling_invariance(prob, num, den):
    s = F(num, den)
    scaled = CirculationProblem(prob.n_nodes, tuple((t, h, lo * s, hi * s) for t, h, lo, hi in prob.arcs),
                                tuple((lo * s, hi * s) for lo, hi in prob.balances))
    assert circulation_feasible(scaled).feasible == circulation_feasible(prob).feasible


# --------------------------------------------------------------------------
# LP and inertia


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_lp_certificates(a, b_from):
    b = [sum(F(v) for v in row[:2]) + b_from[i % 4] for i, row in enumerate(a)]
    res = lp_feasible(a, b)
    if res.feasible:
        assert all(v >= 0 for v in res.point)
        assert all(sum(F(c) * v for c, v in zip(row, res.point)) == rhs for row, rhs in zip(a, b))
    else:
        y = res.farkas
        assert sum(yi * bi for yi, bi in zip(y, b)) > 0
        for j in range(len(a[0])):
            assert sum(y[i] * a[i][j] for i in range(len(a))) <= 0


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n)))
def test_inertia_matches_eigenvalues(flat):
    n = int(round(len(flat) ** 0.5))
    m = np.array(flat, dtype=float).reshape(n, n)
    m = m + m.T
    neg, zero, pos = symmetric_inertia([[F(int(v)) for v in row] for row in m])
    ev = np.linalg.eigvalsh(m)
    assert (neg, zero, pos) == (int(np.sum(ev < -1e-9)), int(np.sum(np.abs(ev) <= 1e-9)), int(np.sum(ev > 1e-9)))


def test_inertia_zero_diagonal_pivot():
    assert symmetric_inertia([[0, 1], [1, 0]]) == (1, 0, 1)
