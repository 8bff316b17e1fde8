"""The numba kernels and their numpy fallbacks must agree exactly."""

import numpy as np
import pytest

from polywidth import _kernels as kn
from polywidth import mc
from polywidth._accel import USING_NUMBA


def test_phi_batch_paths_agree():
    gen = mc.stream(1, 0)
    maps = gen.integers(0, 30, size=(200, 9))
    edges = np.arange(28, dtype=np.int64).reshape(7, 4)
    ref = kn.phi_batch_ref(maps, edges, 30, 2)
    assert np.array_equal(kn.phi_batch(maps, edges, 30, 2), ref)
    if USING_NUMBA:
        assert np.array_equal(kn._phi_batch_jit(maps.astype(np.int64), edges, 30, 2), ref)


def test_phi_hist_batch_paths_agree():
    gen = mc.stream(2, 0)
    hists = gen.integers(0, 5, size=(150, 20)).astype(np.int64)
    edges = np.arange(20, dtype=np.int64).reshape(10, 2)
    ref = kn.phi_hist_batch_ref(hists, edges, 1)
    assert np.array_equal(kn.phi_hist_batch(hists, edges, 1), ref)
    if USING_NUMBA:
        assert np.array_equal(kn._phi_hist_batch_jit(hists, edges, 1), ref)


def test_phi_batch_empty_inputs():
    edges = np.zeros((0, 2), dtype=np.int64)
    maps = np.zeros((0, 3), dtype=np.int64)
    assert kn.phi_batch(maps, np.arange(4).reshape(2, 2), 5, 1).shape == (0,)
    assert np.array_equal(
        kn.phi_batch(np.ones((3, 2), dtype=np.int64), edges, 5, 1), np.zeros(3, dtype=np.int64)
    )


def test_contained_edges_paths_agree():
    gen = mc.stream(3, 0)
    bits = (gen.random((100, 13)) < 0.5).astype(np.uint8)
    edges = gen.integers(0, 13, size=(40, 3)).astype(np.int64)
    ref = kn.contained_edges_batch_ref(bits, edges)
    assert np.array_equal(kn.contained_edges_batch(bits, edges), ref)
    if USING_NUMBA:
        assert np.array_equal(kn._contained_edges_batch_jit(bits, edges), ref)


def test_coo_matvec_paths_agree():
    gen = mc.stream(4, 0)
    rows = gen.integers(0, 12, size=60).astype(np.int64)
    cols = gen.integers(0, 12, size=60).astype(np.int64)
    vals = gen.integers(1, 4, size=60).astype(np.int64)
    x = mc.normals(gen, 12)
    ref = kn.coo_matvec_ref(rows, cols, vals.astype(float), x, 12)
    out = kn.coo_matvec(rows, cols, vals, x, 12)
    assert np.allclose(out, ref, rtol=0, atol=0)
    dense = np.zeros((12, 12))
    np.add.at(dense, (rows, cols), vals)
    assert np.allclose(out, dense @ x)


def test_wht_paths_agree_and_invert():
    gen = mc.stream(5, 0)
    a = gen.integers(-50, 50, size=64).astype(np.int64)
    ref = kn.wht_inplace_ref(a.copy())
    out = kn.wht_inplace(a.copy())
    assert np.array_equal(out, ref)
    # direct definition: out[x] = sum_m a[m] (-1)^popcount(m & x)
    direct = np.array(
        [
            sum(int(a[m]) * (-1) ** bin(m & x).count("1") for m in range(64))
            for x in range(64)
        ],
        dtype=np.int64,
    )
    assert np.array_equal(out, direct)
    # involution up to scaling
    twice = kn.wht_inplace(out.copy())
    assert np.array_equal(twice, 64 * a)


def test_wht_validates_inputs():
    with pytest.raises(ValueError):
        kn.wht_inplace(np.zeros(3, dtype=np.int64))
    with pytest.raises(ValueError):
        kn.wht_inplace(np.zeros(4, dtype=np.float64))
