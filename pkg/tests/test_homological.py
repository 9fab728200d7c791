from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plap.catalog import complete, five_vertex, g6, path, random_connected, standard_catalog
from plap.cheeger import minmax_spectrum_delta1
from plap.complex import ComplexSizeError, betti_gf2_dense
from plap.graph import mask_of
from plap.homological import Filtration, homological_spectrum, local_link_criterion
from plap.onelap import enumerate_delta1_spectrum

F = Fraction

# Whole-filtration answer on G6; the non-min-max values 3/5 and 7/9 come out
# homological while 2/3 and 3/4 do not.
G6_HOMOLOGICAL = tuple(F(s) for s in ("0", "2/5", "5/9", "3/5", "5/7", "7/9", "1"))


def test_g6_homological_values():
    assert homological_spectrum(g6()).values == G6_HOMOLOGICAL


def test_p6_homological_values():
    assert homological_spectrum(path(6)).values == tuple(F(s) for s in ("0", "1/5", "1/2", "1"))


def test_five_vertex_half_is_not_homological():
    g = five_vertex()
    assert F(1, 2) in enumerate_delta1_spectrum(g).values
    assert F(1, 2) not in homological_spectrum(g).values


def test_g6_link_criterion():
    v = local_link_criterion(g6(), mask_of((2, 5, 6)))
    assert v.status == "applicable-true" and v.holds
    assert v.lam == F(5, 9)
    assert v.components == 2 and v.reduced_betti[0] == 1


def test_link_at_full_set_is_false_but_zero_stays_homological():
    g = g6()
    v = local_link_criterion(g, g.full_mask)
    assert v.lam == 0 and not v.holds
    assert F(0) in homological_spectrum(g).values


def test_link_reports_ties_as_inapplicable():
    g = complete(4)
    v = local_link_criterion(g, mask_of((1,)))
    assert v.status == "inapplicable" and v.ties


def test_cap():
    with pytest.raises(ComplexSizeError):
        homological_spectrum(complete(7))


def dense_matches(filt, lams):
    for lam in lams:
        r = filt.threshold_rank(lam)
        closed = betti_gf2_dense(filt.sublevel(lam))
        assert closed == filt.closed_betti(r)[: len(closed)]
        assert not any(filt.closed_betti(r)[len(closed):])


def test_betti_changes_match_dense_recomputation():
    filt = Filtration.of(five_vertex())
    dense_matches(filt, filt.values)


def test_g6_around_five_ninths_matches_dense_recomputation():
    filt = Filtration.of(g6())
    dense_matches(filt, [F(1, 2), F(9, 17), F(7, 13), F(5, 9)])


def test_json_report_shape():
    rep = homological_spectrum(path(6)).to_json()
    assert rep["1/3"]["homological"] is False
    assert rep["1/5"]["homological"] is True
    assert set(rep["0/1"]) == {"strict_betti", "closed_betti", "homological", "betti_changed"}


def check_filtration_invariants(g):
    filt = Filtration.of(g)
    spec = homological_spectrum(g)
    # strict sublevel at a threshold is the closed sublevel at its predecessor
    for r in range(1, len(filt.values)):
        assert filt.strict_betti(r) == filt.closed_betti(r - 1)
    assert set(spec.values) <= set(enumerate_delta1_spectrum(g).values)
    assert set(minmax_spectrum_delta1(g)) <= set(spec.values)
    for t in spec.thresholds:
        if t.betti_changed:
            assert t.homological


@pytest.mark.parametrize("name", ["g6", "p6", "seven_edge", "five", "c4", "c5", "k4", "star5", "path4"])
def test_catalog_invariants(name):
    check_filtration_invariants(standard_catalog()[name])


@settings(max_examples=12)
@given(st.integers(3, 5), st.integers(0, 10 ** 6))
def test_random_graph_invariants(n, seed):
    g = random_connected(n, np.random.default_rng(seed))
    check_filtration_invariants(g)
    hom = set(homological_spectrum(g).values)
    for a in range(1, 1 << n):
        v = local_link_criterion(g, a)
        if v.holds:
            assert v.lam in hom
