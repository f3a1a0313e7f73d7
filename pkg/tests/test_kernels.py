import math

import numpy as np
import pytest

from cuspwind import kernels
from cuspwind.errors import NonConvergence
from cuspwind.kernels import HAVE_COMPILED, backend_name, power_log_radius


def dense_radius(weights, in_keys, out_keys, n_keys):
    n = len(weights)
    m = np.zeros((n, n))
    for e in range(n):
        for f in range(n):
            if out_keys[e] == in_keys[f]:
                m[e, f] = weights[e]
    return max(abs(np.linalg.eigvals(m))) if n else 0.0


def random_instance(rng, n_edges, n_keys):
    w = rng.uniform(0.05, 1.0, size=n_edges)
    ik = rng.integers(0, n_keys, size=n_edges)
    ok = rng.integers(0, n_keys, size=n_edges)
    return w, ik.astype(np.int64), ok.astype(np.int64)


def test_matches_dense_eigenvalues():
    rng = np.random.default_rng(3)
    for trial in range(20):
        n_keys = int(rng.integers(2, 5))
        w, ik, ok = random_instance(rng, int(rng.integers(4, 20)), n_keys)
        rho = dense_radius(w, ik, ok, n_keys)
        if rho <= 1e-12:
            continue
        est, iters, delta = power_log_radius(w, ik, ok, n_keys)
        assert est == pytest.approx(math.log(rho), abs=1e-8)


def test_periodic_cycles_converge():
    # pure 3-cycle: single-step ratios cycle, the window mean does not
    w = np.array([0.5, 0.2, 0.1])
    ik = np.array([0, 1, 2], dtype=np.int64)
    ok = np.array([1, 2, 0], dtype=np.int64)
    est, _, _ = power_log_radius(w, ik, ok, 3)
    assert est == pytest.approx(math.log(0.5 * 0.2 * 0.1) / 3.0, abs=1e-9)


def test_period_two_bipartite():
    w = np.array([0.7, 0.3])
    ik = np.array([0, 1], dtype=np.int64)
    ok = np.array([1, 0], dtype=np.int64)
    est, _, _ = power_log_radius(w, ik, ok, 2)
    assert est == pytest.approx(0.5 * math.log(0.21), abs=1e-10)


def test_zero_weights_give_minus_inf():
    w = np.zeros(4)
    ik = np.zeros(4, dtype=np.int64)
    ok = np.zeros(4, dtype=np.int64)
    est, iters, delta = power_log_radius(w, ik, ok, 1)
    assert est == -math.inf


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")
def test_compiled_matches_python_backend():
    rng = np.random.default_rng(11)
    for trial in range(10):
        n_keys = int(rng.integers(2, 6))
        w, ik, ok = random_instance(rng, int(rng.integers(5, 40)), n_keys)
        if dense_radius(w, ik, ok, n_keys) <= 1e-12:
            continue
        e1, _, _ = power_log_radius(w, ik, ok, n_keys, backend="python")
        e2, _, _ = power_log_radius(w, ik, ok, n_keys, backend="compiled")
        assert e1 == pytest.approx(e2, abs=1e-9)


def test_backend_selection():
    assert backend_name("python") == "python"
    assert backend_name("auto") in ("python", "compiled")
    with pytest.raises(ValueError):
        backend_name("gpu")
