from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plap.catalog import complete, cycle, seven_edge, five_vertex, g6, many_eigenvalues, path, standard_catalog
from plap.graph import Graph, SetPair, ZeroVectorError
from plap.onelap import (
    PatternOverflowError,
    delta1_image,
    distinct_count_lower_bound,
    enumerate_delta1_spectrum,
    is_critical_f1,
    simple_nodal_eigenvalue,
    simple_nodal_sets,
    verify_eigenpair,
)
from plap.psolver import apply_delta_p
from strategies import graphs

F = Fraction


def vec(n, a, b=()):
    return [int(v) for v in SetPair.of(a, b).vector(n)]


def test_zonotope_examples():
    k2 = Graph(2, [(1, 2)])
    z = delta1_image(k2, [1, 0])
    assert z.offset == (1, -1) and z.generators == ()
    assert np.allclose(apply_delta_p(k2, [1, 0], 1 + 1e-9), z.center)
    z0 = delta1_image(g6(), [0] * 6)
    assert z0.offset == (0,) * 6 and len(z0.generators) == 10
    assert delta1_image(path(4), [4, 3, 2, 1]).generators == ()


@settings(max_examples=40)
@given(graphs(min_n=3, max_n=5), st.data())
def test_zonotope_center_is_the_p_to_1_limit(g, data):
    x = data.draw(st.lists(st.integers(-2, 2), min_size=g.n, max_size=g.n))
    z = delta1_image(g, x)
    # tied edges contribute nothing in the limit; untied ones tend to sign(x_i - x_j)
    assert np.allclose(apply_delta_p(g, x, 1 + 1e-12), z.center, atol=1e-9)
    assert z.generator_vectors().shape == (sum(x[i - 1] == x[j - 1] for i, j in g.edges), g.n)


def test_certified_examples():
    cert = verify_eigenpair(path(6), F(1, 3), vec(6, (1, 2)))
    assert cert is not None and cert.recheck(path(6))
    assert verify_eigenpair(seven_edge(), F(1, 2), vec(6, (3, 4), (5, 6))) is not None
    assert verify_eigenpair(g6(), F(5, 9), vec(6, (2, 5, 6))) is not None
    assert verify_eigenpair(path(6), F(1, 4), vec(6, (1, 2))) is None


def test_certificate_rejects_zero_vector():
    with pytest.raises(ZeroVectorError):
        verify_eigenpair(path(3), 0, [0, 0, 0])


def test_certificate_recheck_detects_tampering():
    cert = verify_eigenpair(g6(), F(5, 9), vec(6, (2, 5, 6)))
    bad = type(cert)(cert.lam + F(1, 100), cert.x, cert.witness, cert.slack)
    assert not bad.recheck(g6())


def test_simple_nodal_sets():
    assert (1, 2) in simple_nodal_sets(path(6))
    assert simple_nodal_eigenvalue(path(6), (1, 2)) == F(1, 3)
    assert (2, 3) not in simple_nodal_sets(path(3))
    assert (1, 2) in simple_nodal_sets(five_vertex())
    assert simple_nodal_eigenvalue(five_vertex(), (1, 2)) == F(1, 2)


def test_distinct_count_bounds():
    g = many_eigenvalues(8)
    assert distinct_count_lower_bound(g) == 3 * 8 // 2 - 2
    assert distinct_count_lower_bound(Graph(4, [])) == 2
    k5 = complete(5)
    assert distinct_count_lower_bound(k5) == 2 + len({k5.degree(i) + k5.degree(j) for i, j in k5.edges})


def test_spectra():
    assert enumerate_delta1_spectrum(g6()).values == tuple(
        F(s) for s in ("0", "2/5", "5/9", "3/5", "2/3", "5/7", "3/4", "7/9", "1"))
    assert enumerate_delta1_spectrum(path(6)).values == tuple(F(s) for s in ("0", "1/5", "1/3", "1/2", "1"))
    assert enumerate_delta1_spectrum(cycle(8)).values == tuple(F(s) for s in ("0", "1/4", "1/3", "1/2", "1"))


def test_many_eigenvalues_family_reaches_its_lower_bound():
    g = many_eigenvalues(8)
    assert len(enumerate_delta1_spectrum(g).values) >= distinct_count_lower_bound(g)


@pytest.mark.parametrize("name", sorted(standard_catalog()))
def test_spectrum_invariants(name):
    g = standard_catalog()[name]
    spec = enumerate_delta1_spectrum(g)
    assert spec.values[0] == 0 and spec.values[-1] == 1
    assert all(0 <= v <= 1 for v in spec.values)
    for lam, w in spec.witnesses.items():
        x = [int(t) for t in w.vector(g.n)]
        assert verify_eigenpair(g, lam, x).recheck(g)
    for edge in simple_nodal_sets(g):
        i, j = edge
        assert verify_eigenpair(g, simple_nodal_eigenvalue(g, edge), vec(g.n, (i, j))) is not None


def test_criticality_examples():
    g = seven_edge()
    v = is_critical_f1(g, vec(6, (3, 4)))
    assert v.critical and v.lam == F(1, 2)
    assert is_critical_f1(g, vec(6, (5, 6))).critical
    bad = is_critical_f1(g, vec(6, (3, 4), (5, 6)))
    assert not bad.critical and bad.witness_value < 0
    assert [int(t) for t in bad.witness] in ([1, -1, 0, 0, 0, 0], [-1, 1, 0, 0, 0, 0])


def test_constant_vector_is_critical():
    v = is_critical_f1(g6(), [1] * 6)
    assert v.critical and v.lam == 0


def test_zero_vector_criticality():
    with pytest.raises(ZeroVectorError):
        is_critical_f1(g6(), [0] * 6)


def test_pattern_cap():
    with pytest.raises(PatternOverflowError):
        is_critical_f1(complete(10), [1] * 10)


@settings(max_examples=60)
@given(graphs(min_n=3, max_n=5, connected=True), st.data())
def test_critical_points_are_eigenvectors(g, data):
    x = data.draw(st.lists(st.integers(-2, 2), min_size=g.n, max_size=g.n).filter(any))
    v = is_critical_f1(g, x)
    if v.critical:
        assert verify_eigenpair(g, v.lam, x) is not None
    else:
        assert v.witness_value < 0
