import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, multiset_close, path
from nbspec import (
    DegenerateScale,
    GraphDisconnected,
    MinDegreeTooLow,
    SeededRng,
    TooLarge,
    build_B,
    build_operators,
    directed_edges,
    e_operator_norm,
    gen_eig,
    ihara_bass_oracle,
    sample_gnp,
)
from nbspec.graph import Graph
from nbspec.operators import dump_matrix_csv, load_matrix_csv, nb_spectrum_operator, partly_averaged_operator


def brute_B(g):
    # straight from the definition, no index helpers
    arcs = sorted([(i, j) for i, j in g.edges.tolist()] + [(j, i) for i, j in g.edges.tolist()])
    return np.array([[1.0 if b == c and a != d else 0.0 for (c, d) in arcs] for (a, b) in arcs])


def test_B_matches_definition(gnp):
    for g in (cycle(3), path(3), complete(4), complete(5), gnp(12, 0.4, seed=2)):
        assert np.array_equal(build_B(g), brute_B(g))


def test_B_triangle_is_two_directed_3_cycles():
    B = build_B(cycle(3))
    assert np.all(B.sum(axis=1) == 1)
    # a permutation matrix of order 3 with no fixed points
    assert np.array_equal(np.linalg.matrix_power(B, 3), np.eye(6))
    assert np.all(np.diag(B) == 0)
    assert multiset_close(gen_eig(B).values, [cmath.exp(2j * np.pi * k / 3) for k in range(3)] * 2, 1e-10)


def test_B_path_is_nilpotent():
    B = build_B(path(3))
    assert B.sum() == 2
    assert not np.linalg.matrix_power(B, 2).any()
    assert np.max(np.abs(gen_eig(B).values)) < 1e-12


def test_B_row_sums_K4():
    assert np.all(build_B(complete(4)).sum(axis=1) == 2)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 14), p=st.floats(0.1, 0.9), seed=st.integers(0, 2**32))
def test_row_sum_law(n, p, seed):
    g = sample_gnp(n, p, SeededRng(seed))
    idx = directed_edges(g)
    if len(idx) == 0:
        return
    rows = build_B(g, idx).sum(axis=1)
    heads = idx.arcs[:, 1]
    assert np.array_equal(rows, g.degrees[heads] - 1)


def test_K4_p1_has_no_fluctuation():
    b = build_operators(complete(4), 1.0)
    assert b.alpha == 2.0
    assert np.array_equal(b.H, b.H0)
    assert not b.E.any()
    assert e_operator_norm(b) == 0.0


def test_C4_block_structure():
    g = cycle(4)
    H = nb_spectrum_operator(g)
    I = np.eye(4)
    expected = np.block([[g.adjacency, -I], [I, np.zeros((4, 4))]])
    assert np.array_equal(H, expected)


def test_bundle_blocks(gnp):
    g = gnp(40, 0.3, seed=8)
    b = build_operators(g, 0.3)
    n, alpha = g.n, 39 * 0.3 - 1
    assert b.alpha == pytest.approx(alpha) and b.scale == pytest.approx(np.sqrt(alpha))
    A, I, Z = g.adjacency.astype(float), np.eye(n), np.zeros((n, n))
    np.testing.assert_array_equal(b.H, np.block([[A, I - np.diag(g.degrees)], [I, Z]]))
    np.testing.assert_allclose(b.H0, np.block([[A, -alpha * I], [I, Z]]))
    np.testing.assert_allclose(b.tH0, np.block([[A / np.sqrt(alpha), -I], [I, Z]]))
    Ediag = ((n - 1) * 0.3 - g.degrees) / alpha
    np.testing.assert_allclose(b.E, np.block([[Z, np.diag(Ediag)], [Z, Z]]))
    # summed, so the identity holds to the bit
    assert np.array_equal(b.tH, b.tH0 + b.E)
    np.testing.assert_allclose(b.tH, np.block([[A / np.sqrt(alpha), (I - np.diag(g.degrees)) / alpha], [I, Z]]), atol=1e-15)


def test_E_norm_is_max_entry(gnp):
    g = gnp(500, 0.1, seed=4)
    b = build_operators(g, 0.1)
    expected = np.max(np.abs(g.degrees - 499 * 0.1)) / b.alpha
    assert e_operator_norm(b) == pytest.approx(expected, rel=1e-14)
    assert e_operator_norm(b) == pytest.approx(np.linalg.norm(b.E, 2), rel=1e-12)


def test_tH_is_conjugate_of_scaled_H(gnp):
    for s in range(3):
        g = gnp(60, 0.2, seed=s)
        b = build_operators(g, 0.2)
        assert multiset_close(gen_eig(b.tH).values, gen_eig(b.H / b.scale).values, 1e-8)


def test_degenerate_scale():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(DegenerateScale):
        build_operators(g, 0.5)
    H0 = partly_averaged_operator(g, 0.5)
    assert H0.shape == (6, 6)


def test_oracle_small_graphs():
    r = ihara_bass_oracle(cycle(4))
    assert r.passed and r.multiplicity == 0
    spec = gen_eig(build_B(cycle(4))).values
    assert multiset_close(spec, [1, 1, -1, -1, 1j, 1j, -1j, -1j], 1e-10)
    assert ihara_bass_oracle(cycle(3)).passed


def test_oracle_K4_explicit_spectrum():
    r = ihara_bass_oracle(complete(4))
    assert r.passed and r.multiplicity == 2
    root = (-1 + 1j * np.sqrt(7)) / 2
    expected = [1, 1, -1, -1, 2, 1] + [root, np.conj(root)] * 3
    assert multiset_close(gen_eig(build_B(complete(4))).values, expected, 1e-7)


def test_oracle_refuses_bad_inputs():
    with pytest.raises(MinDegreeTooLow):
        ihara_bass_oracle(path(4))
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(GraphDisconnected):
        ihara_bass_oracle(two_triangles)
    with pytest.raises(TooLarge):
        ihara_bass_oracle(complete(70))


def test_matrix_csv_round_trip(tmp_path, gnp):
    b = build_operators(gnp(10, 0.5, seed=1), 0.5)
    dump_matrix_csv(b.tH, tmp_path / "m.csv")
    assert np.array_equal(load_matrix_csv(tmp_path / "m.csv"), b.tH)
    Z = b.tH + 1j * b.tH0 / 3
    dump_matrix_csv(Z, tmp_path / "z.csv")
    assert np.array_equal(load_matrix_csv(tmp_path / "z.csv"), Z)
