from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import params_strategy, random_params
from periodic_xy.errors import DimensionMismatch, ParameterError, ShapeMismatch
from periodic_xy.linalg import tridiag_char
from periodic_xy.model import (
    ChainModel,
    PeriodicParameters,
    RingModel,
    assemble_from_components,
    block_det,
    build_block,
    build_chain,
    build_hk,
    build_ring,
    extract_component,
    frobenius,
    l_chain,
    l_ring,
    load_params,
    matvec,
    q_chain,
    r_chain,
    shift_matrix,
    shift_matrix_apply,
    shift_transpose_apply,
    unit_phase,
)


def test_homogeneous_chain_fill():
    t = build_chain(ChainModel(PeriodicParameters((0.0,), (1.0,)), 3))
    np.testing.assert_array_equal(t.diag, [0, 0, 0])
    np.testing.assert_array_equal(t.offdiag, [1, 1])


def test_alternating_chain_fill():
    a, b, c, d = 0.3, -0.4, 1.5, -0.7
    t = build_chain(ChainModel(PeriodicParameters((a, b), (c, d)), 5))
    np.testing.assert_array_equal(t.diag, [2 * a, 2 * b, 2 * a, 2 * b, 2 * a])
    np.testing.assert_array_equal(t.offdiag, [c, d, c, d])


def test_component_lengths_k3():
    u = np.arange(11.0)
    assert [len(extract_component(u, j, 3)) for j in (1, 2, 3)] == [4, 4, 3]


def test_homogeneous_ring_circulant():
    m = build_ring(RingModel(PeriodicParameters((0.0,), (1.0,)), 4))
    ref = np.roll(np.eye(4), 1, axis=1) + np.roll(np.eye(4), -1, axis=1)
    np.testing.assert_array_equal(m, ref)


def test_two_cell_ring_corner():
    m = build_ring(RingModel(PeriodicParameters((0.1, 0.2), (1.0, 3.0)), 2))
    assert m[0, 3] == m[3, 0] == 3.0


@given(params_strategy(), st.integers(2, 6))
def test_ring_minus_chain_two_entries(params, cells):
    ring = RingModel(params, cells)
    diff = build_ring(ring) - build_chain(ChainModel(params, ring.sites)).to_dense()
    assert np.count_nonzero(diff) == 2
    np.testing.assert_array_equal(diff, diff.T)


@given(params_strategy(), st.integers(2, 6))
def test_chain_is_corner_of_ring(params, m):
    ring = build_ring(RingModel(params, m))
    n = params.k * m - 1
    np.testing.assert_array_equal(build_chain(ChainModel(params, n)).to_dense(), ring[:n, :n])


def test_block_examples():
    p = PeriodicParameters((0.4, -0.1), (1.3, 0.6))
    np.testing.assert_array_equal(build_block(p, 1, 1).to_dense(), [[0.8]])
    assert build_block(p, 2, 1).order == 0
    for lam in (-1.0, 0.2, 2.5):
        ref = (0.8 - lam) * (-0.2 - lam) - 1.3**2
        assert block_det(p, 1, 2, lam) == pytest.approx(ref, abs=1e-14)


def test_block_det_minus_one_convention():
    p = PeriodicParameters((0.4,), (1.0,))
    assert block_det(p, 2, 0, 0.3) == 0.0
    assert block_det(p, 2, 1, 0.3) == 1.0


def test_hk_examples():
    w1, w2, d1, d2 = 0.2, -0.5, 1.1, 0.7
    p = PeriodicParameters((w1, w2), (d1, d2))
    np.testing.assert_allclose(build_hk(p, 1.0), [[2 * w1, d1 + d2], [d1 + d2, 2 * w2]])
    np.testing.assert_allclose(build_hk(p, -1.0), [[2 * w1, d1 - d2], [d1 - d2, 2 * w2]])


def test_hk_scalar_case():
    p = PeriodicParameters((0.3,), (0.9,))
    q = unit_phase(1, 3)
    assert build_hk(p, q)[0, 0] == pytest.approx(0.6 + 2 * 0.9 * np.cos(np.pi / 3))


@given(params_strategy(kmin=2), st.floats(0, 2 * np.pi))
def test_hk_hermitian(params, theta):
    h = build_hk(params, np.exp(1j * theta))
    np.testing.assert_allclose(h, h.conj().T, atol=1e-15)


def test_extract_examples():
    u = np.array([1, 2, 3, 4, 5])
    np.testing.assert_array_equal(extract_component(u, 1, 2), [1, 3, 5])
    np.testing.assert_array_equal(extract_component(u, 2, 2), [2, 4])
    with pytest.raises(ShapeMismatch):
        extract_component(u, 3, 2)


@pytest.mark.parametrize("n,k", [(5, 2), (8, 3), (11, 3)])
def test_component_round_trip(n, k, rng):
    u = rng.normal(size=n)
    comps = [extract_component(u, j, k) for j in range(1, k + 1)]
    np.testing.assert_array_equal(assemble_from_components(comps, k, n), u)


def test_assemble_checks_lengths():
    with pytest.raises(DimensionMismatch):
        assemble_from_components([np.zeros(3), np.zeros(3)], 2, 5)
    with pytest.raises(DimensionMismatch):
        assemble_from_components([np.zeros(3)], 2, 5)


def test_shift_examples():
    np.testing.assert_array_equal(shift_matrix_apply([1, 2, 3]), [2, 3, 1])
    np.testing.assert_array_equal(shift_transpose_apply([1, 2, 3]), [3, 1, 2])
    v = np.arange(7.0)
    w = v
    for _ in range(7):
        w = shift_matrix_apply(w)
    np.testing.assert_array_equal(w, v)
    np.testing.assert_array_equal(shift_matrix(3) @ np.array([1, 2, 3]), [2, 3, 1])


def test_shift_conjugation_rotates_parameters(rng):
    p = random_params(rng, 3)
    t = shift_matrix(9)
    lhs = t @ build_ring(RingModel(p, 3)) @ t.T
    np.testing.assert_allclose(lhs, build_ring(RingModel(p.rotated(1), 3)), atol=0)


@given(params_strategy(), st.integers(2, 5))
def test_cell_shift_commutes_with_ring(params, m):
    h = build_ring(RingModel(params, m))
    tk = np.linalg.matrix_power(shift_matrix(params.k * m), params.k)
    np.testing.assert_allclose(tk @ h, h @ tk, atol=1e-14)


def test_chain_and_ring_maps():
    np.testing.assert_array_equal(l_ring(1.0, 2.0, 4)[:3], l_chain(1.0, 2.0, 4))
    np.testing.assert_array_equal(q_chain(4), np.eye(4)[:3])
    np.testing.assert_array_equal(r_chain(4), shift_matrix(4)[:3])


@given(params_strategy(), st.integers(2, 5), st.integers(0, 10**6))
def test_matvec_and_frobenius(params, m, seed):
    v = np.random.default_rng(seed).normal(size=params.k * m)
    for model in (RingModel(params, m), ChainModel(params, params.k * m)):
        dense = build_ring(model) if isinstance(model, RingModel) else build_chain(model).to_dense()
        np.testing.assert_allclose(matvec(model, v), dense @ v, atol=1e-13)
        assert frobenius(model) == pytest.approx(np.linalg.norm(dense), rel=1e-14)


@given(params_strategy(kmin=2), st.floats(-4, 4))
def test_hk_tridiagonal_part_is_block(params, lam):
    h = build_hk(params, 1j).real.copy()
    k = params.k
    h[0, k - 1] = h[k - 1, 0] = 0.0 if k > 2 else params.d(1)
    np.testing.assert_allclose(h, build_block(params, 1, k).to_dense(), atol=1e-15)
    assert tridiag_char(build_block(params, 1, k), lam) == pytest.approx(
        np.linalg.det(build_block(params, 1, k).to_dense() - lam * np.eye(k)), rel=1e-9, abs=1e-9
    )


def test_parameter_validation():
    with pytest.raises(ParameterError, match=r"coupling\[1\]"):
        PeriodicParameters((0.0, 0.0), (1.0, 0.0))
    with pytest.raises(ParameterError):
        PeriodicParameters((0.0,), (1.0, 2.0))
    with pytest.raises(ParameterError):
        ChainModel(PeriodicParameters((0.0,), (1.0,)), 0)
    with pytest.raises(ParameterError):
        RingModel(PeriodicParameters((0.0,), (1.0,)), 1)


def test_load_params(tmp_path):
    good = tmp_path / "p.json"
    good.write_text(json.dumps({"k": 2, "omega": [0.1, 0.2], "coupling": [1, -1]}))
    assert load_params(good).coupling == (1.0, -1.0)
    bad = [
        {"k": 2, "omega": [0.1], "coupling": [1, 1]},
        {"k": 2, "omega": [0.1, 0.2], "coupling": [1, 0]},
        {"k": 0, "omega": [], "coupling": []},
        {"omega": [0.1], "coupling": [1]},
        {"k": 1, "omega": ["x"], "coupling": [1]},
    ]
    for i, data in enumerate(bad):
        path = tmp_path / f"bad{i}.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ParameterError):
            load_params(path)
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ParameterError):
        load_params(broken)


def test_params_dict_round_trip(rng):
    p = random_params(rng, 4)
    assert PeriodicParameters.from_dict(p.to_dict()) == p
