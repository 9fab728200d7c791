import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from plap.catalog import complete, cycle, five_vertex, g6, path, standard_catalog, star
from plap.cheeger import (
    NOT_CHECKABLE,
    InvalidSubpartitionError,
    cheeger_constants,
    cheeger_report,
    closed_form_spectra,
    minmax_eigenvalue_interval,
    complete_distinct_count,
    complete_graph_eigenpairs,
    hstar,
    independence_top_values,
    inequality_diagram_check,
    gap_near_one_holds,
    minmax_lambda_delta1,
    minmax_spectrum_delta1,
    multiway_cheeger,
    multiway_cheeger_by_labels,
    p2_eigenvalues_in,
    pseudo_independence,
    sandwich_holds,
    subpartition_lower_bound,
)
from plap.complex import ComplexSizeError
from plap.graph import Graph
from plap.onelap import enumerate_delta1_spectrum
from plap.psolver import apply_delta_p, eigen_residual, spectrum_p2
from strategies import graphs

G6_H = (F(0), F(2, 5), F(5, 7), F(1), F(1), F(1))
P6_H = (F(0), F(1, 5), F(1, 2), F(1), F(1), F(1))


# --------------------------------------------------------------------------
# multi-way Cheeger constants


def test_cheeger_constants_examples():
    assert cheeger_constants(g6()) == G6_H
    assert cheeger_constants(path(6)) == P6_H
    assert cheeger_constants(cycle(6))[:3] == (F(0), F(1, 3), F(1, 2))
    assert multiway_cheeger(g6(), 3) == F(5, 7)


def test_cheeger_rejects_bad_k():
    with pytest.raises(ValueError):
        multiway_cheeger(g6(), 0)
    with pytest.raises(ValueError):
        multiway_cheeger(g6(), 7)
    with pytest.raises(ComplexSizeError):
        cheeger_constants(path(9))


@settings(max_examples=40)
@given(graphs(min_n=2, max_n=5))
def test_dp_matches_label_search(g):
    hs = cheeger_constants(g)
    for k in range(1, min(len(hs), 3) + 1):
        assert hs[k - 1] == multiway_cheeger_by_labels(g, k)


@settings(max_examples=40)
@given(graphs(min_n=2, max_n=6))
def test_cheeger_constants_nondecreasing(g):
    hs = cheeger_constants(g)
    assert all(a <= b for a, b in zip(hs, hs[1:]))
    assert all(0 <= h <= 1 for h in hs)


# --------------------------------------------------------------------------
# min-max values of the 1-Laplacian


def test_minmax_examples():
    assert minmax_spectrum_delta1(g6()) == G6_H
    assert minmax_spectrum_delta1(path(6)) == P6_H
    assert minmax_lambda_delta1(g6(), 2) == F(2, 5)
    with pytest.raises(ValueError):
        minmax_lambda_delta1(g6(), 7)


@pytest.mark.parametrize("name", sorted(standard_catalog()))
def test_minmax_values_are_certified_and_below_h(name):
    g = standard_catalog()[name]
    if g.n > 6:
        pytest.skip("homology cap")
    mm = minmax_spectrum_delta1(g)
    spec = enumerate_delta1_spectrum(g).values
    hs = cheeger_constants(g)
    assert all(a <= b for a, b in zip(mm, mm[1:]))
    for k, lam in enumerate(mm, start=1):
        assert lam in spec
        if k <= len(hs):
            assert lam <= hs[k - 1]


@pytest.mark.parametrize("g", [path(4), path(5), star(5), Graph(5, [(1, 2), (2, 3), (2, 4), (4, 5)])])
def test_trees_have_hhat_equal_to_h(g):
    hs = cheeger_constants(g)
    assert minmax_spectrum_delta1(g)[:len(hs)] == hs


# --------------------------------------------------------------------------
# subpartitions and pseudo-independence


def test_hstar_examples():
    assert hstar(g6(), [[2, 3, 4], [1, 5, 6]]) == (F(5, 7), 4)
    assert hstar(g6(), [[1]]) == (F(1), 1)
    assert hstar(g6(), [[5, 6]]) == (F(1), 1)


@pytest.mark.parametrize("blocks", [[[2, 6]], [[1, 2], [2, 3]], [[]], [], [[7]]])
def test_invalid_subpartitions(blocks):
    with pytest.raises(InvalidSubpartitionError):
        hstar(g6(), blocks)


def test_pseudo_independence_examples():
    assert pseudo_independence(g6()) == 3
    assert pseudo_independence(complete(3)) == 2
    assert pseudo_independence(Graph(4, [])) == 4
    assert pseudo_independence(path(6)) == 3


@pytest.mark.parametrize("name", ["g6", "p6", "c6", "five", "seven_edge"])
def test_top_values_equal_one(name):
    g = standard_catalog()[name]
    assert all(v == 1 for v in independence_top_values(g))


def test_subpartition_lower_bound():
    lam, h = subpartition_lower_bound(g6(), [[2, 3, 4], [1, 5, 6]])
    assert (lam, h) == (F(5, 7), F(5, 7))
    lam, h = subpartition_lower_bound(path(6), [[1, 2], [3, 4], [5, 6]])
    assert lam >= h


# --------------------------------------------------------------------------
# closed forms


def test_complete_p2():
    assert closed_form_spectra("complete", 4, 2) == [F(0), F(4, 3)]


def test_complete_eigenpairs_solve_the_equation():
    for n in (4, 5):
        for p in (1.5, 3.0):
            for lam, x in complete_graph_eigenpairs(n, p):
                assert eigen_residual(complete(n), lam, x, p) <= 1e-10


def test_complete_distinct_count_generic_p():
    assert complete_distinct_count(5) == 7
    assert len(closed_form_spectra("complete", 5, 3.3)) == 7
    assert len(closed_form_spectra("complete", 5, 1.5)) == 7


def test_complete_count_coincidence_at_p3():
    # at p = 3 the value (5 + 2 sqrt(ij)) / 4 is the same for (i, j) = (1, 4) and (2, 2)
    vals = closed_form_spectra("complete", 5, 3)
    assert len(vals) == 6
    assert 2.25 in [round(v, 12) for v in vals]


def test_cycle_and_path_spectra():
    assert closed_form_spectra("cycle", 8) == [F(0), F(1, 4), F(1, 3), F(1, 2), F(1)]
    assert closed_form_spectra("path6", 6) == [F(0), F(1, 5), F(1, 3), F(1, 2), F(1)]
    assert set(closed_form_spectra("cycle", 6)) == set(enumerate_delta1_spectrum(cycle(6)).values)
    assert set(closed_form_spectra("path6", 6)) == set(enumerate_delta1_spectrum(path(6)).values)
    with pytest.raises(ValueError):
        closed_form_spectra("complete", 5, 1)
    with pytest.raises(ValueError):
        closed_form_spectra("wheel", 5)


# --------------------------------------------------------------------------
# spectral gap near 1 and the interval bounds


@settings(max_examples=40)
@given(graphs(min_n=3, max_n=7, connected=True))
def test_inertia_count_matches_eigensolver(g):
    vals = spectrum_p2(g)
    lo, hi = F(1, 2), F(3, 2)
    inside = int(np.sum((vals >= 0.5 - 1e-9) & (vals <= 1.5 + 1e-9)))
    assert p2_eigenvalues_in(g, lo, hi) == inside
    assert gap_near_one_holds(g)


def test_gap_fails_on_a_single_edge():
    # the spectrum of K_2 is {0, 2}, which is why the gap needs n >= 3
    assert not gap_near_one_holds(complete(2))


def test_minmax_eigenvalue_intervals():
    assert minmax_eigenvalue_interval(2) == (0.5, 1.5, True)
    lo, hi, closed = minmax_eigenvalue_interval(1.5)
    assert lo == pytest.approx(2 ** -1.5) and not closed
    assert minmax_eigenvalue_interval(3)[:2] == pytest.approx((4 / 27, 3.0))
    with pytest.raises(ValueError):
        minmax_eigenvalue_interval(0.5)


# --------------------------------------------------------------------------
# the inequality diagram


def test_diagram_g6_k2_p2():
    arrows = inequality_diagram_check(g6(), 2, 2.0)
    by = {a.name: a for a in arrows}
    lam = float(spectrum_p2(g6())[1])
    assert lam == pytest.approx(0.5918, abs=1e-4)
    assert by["hhat_k <= h_k"].holds
    assert by["2^{p-1}/p^p hhat_k^p <= lambda_k(Delta_p)"].lhs == pytest.approx(0.08)
    assert by["lambda_k(Delta_p) <= 2^{p-1} hhat_k"].rhs == pytest.approx(0.8)
    checked = [a for a in arrows if a.status != "not checkable"]
    assert checked and all(a.holds for a in checked)
    assert [a.name for a in arrows if a.status == "not checkable"] == list(NOT_CHECKABLE)


def test_diagram_collapses_at_p1():
    arrows = inequality_diagram_check(g6(), 3, 1)
    checked = [a for a in arrows if a.status == "exact"]
    assert all(a.holds for a in checked)
    assert any(a.name == "lambda_k(Delta_1) is a certified eigenvalue" for a in checked)


def test_sandwich_on_catalog():
    for name in ("g6", "p6", "five"):
        g = standard_catalog()[name]
        for k in range(1, g.n + 1):
            assert sandwich_holds(g, 1, k)
            assert sandwich_holds(g, 2, k)


def test_report_shape():
    rep = cheeger_report(g6())
    assert sorted(rep) == [str(k) for k in range(1, 7)]
    assert set(rep["3"]) == {"h_k", "hhat_k", "lambda_k_delta1", "h_over_hhat", "arrows"}
    assert rep["3"]["h_k"] == "5/7" and rep["3"]["h_over_hhat"] == "1/1"
    assert rep["1"]["h_over_hhat"] is None
