"""The compiled and numpy kernels must agree on every input."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from encdec import _backend

try:
    compiled = _backend.get_kernels("compiled")
except ImportError:  # pragma: no cover - extension not built
    compiled = None

python = _backend.get_kernels("python")
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
floats01 = st.floats(0.0, 1.0, allow_nan=False)


def test_backend_selected():
    assert _backend.BACKEND in ("compiled", "python")
    assert all(hasattr(_backend.kernels, name) for name in _backend.KERNEL_NAMES)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")


@needs_ext
@given(arrays(float, st.tuples(st.integers(1, 20), st.just(2)), elements=floats01),
       st.integers(1, 5), st.floats(0.05, 1.0))
def test_pou_weights_parity(points, k, eps):
    centers = np.stack(np.meshgrid((np.arange(k) + 0.5) / k, (np.arange(k) + 0.5) / k, indexing="ij"), -1).reshape(-1, 2)
    wp, bp = python.pou_weights(points, centers, eps)
    wc, bc = compiled.pou_weights(points, centers, eps)
    assert bp == bc
    if bp < 0:
        np.testing.assert_allclose(np.asarray(wc), wp, rtol=1e-13, atol=1e-15)
        assert np.array_equal(np.asarray(wc) == 0, wp == 0)


@needs_ext
@given(arrays(float, st.tuples(st.integers(1, 30), st.just(1)), elements=floats01), st.integers(2, 40))
def test_interp_parity_1d(points, n):
    lower, upper, shape = np.array([0.0]), np.array([1.0]), np.array([n], dtype=np.int64)
    ip, wp = python.interp_stencil(lower, upper, shape, points)
    ic, wc = compiled.interp_stencil(lower, upper, shape, points)
    assert np.array_equal(np.asarray(ic), ip)
    np.testing.assert_allclose(np.asarray(wc), wp, rtol=0, atol=1e-15)
    vals = np.sin(np.arange(n, dtype=float))
    np.testing.assert_allclose(np.asarray(compiled.interp_eval(vals, ip, wp)), python.interp_eval(vals, ip, wp),
                               rtol=0, atol=1e-14)


@needs_ext
@given(arrays(float, st.tuples(st.integers(1, 30), st.just(2)), elements=floats01),
       st.integers(2, 12), st.integers(2, 12))
def test_interp_parity_2d(points, nx, ny):
    lower, upper, shape = np.zeros(2), np.ones(2), np.array([nx, ny], dtype=np.int64)
    ip, wp = python.interp_stencil(lower, upper, shape, points)
    ic, wc = compiled.interp_stencil(lower, upper, shape, points)
    assert np.array_equal(np.asarray(ic), ip)
    np.testing.assert_allclose(np.asarray(wc), wp, rtol=0, atol=1e-15)


@needs_ext
@given(arrays(float, st.tuples(st.integers(1, 5), st.integers(2, 50)), elements=st.floats(-10, 10)),
       st.floats(1e-3, 1.0))
def test_cumulative_trapezoid_parity(rows, h):
    np.testing.assert_allclose(np.asarray(compiled.cumulative_trapezoid(rows, h)),
                               python.cumulative_trapezoid(rows, h), rtol=1e-13, atol=1e-12)


@needs_ext
@given(arrays(float, st.tuples(st.integers(1, 20), st.integers(1, 4)), elements=st.floats(-1, 1)),
       st.integers(0, 4))
def test_monomial_design_parity(x, degree):
    from encdec.approximator import total_degree_exponents

    exps = total_degree_exponents(x.shape[1], degree)
    np.testing.assert_allclose(np.asarray(compiled.monomial_design(x, exps)), python.monomial_design(x, exps),
                               rtol=1e-14, atol=1e-15)


def test_cumulative_trapezoid_oracle():
    # integral of 2x on a 5-node grid is x^2 exactly (trapezoid is exact for linear integrands)
    x = np.linspace(0, 1, 5)
    out = _backend.kernels.cumulative_trapezoid(np.ascontiguousarray((2 * x)[None, :]), 0.25)
    np.testing.assert_allclose(np.asarray(out)[0], x**2, atol=1e-15)


def test_pou_weights_reports_uncovered_point():
    w, bad = python.pou_weights(np.array([[0.0], [0.9]]), np.array([[0.0]]), 0.5)
    assert bad == 1
