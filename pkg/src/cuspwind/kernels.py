"""Power-iteration kernels for the factorized transfer operator.

The weighted operator M[e, f] = A(e, f) * w(e) never gets materialized:
admissibility only compares the out-key of e with the in-key of f, so a
matrix-vector product is one scatter-add over in-keys followed by a gather
over out-keys.  Both the numpy fallback below and the optional compiled
kernel in ``_ckernels.pyx`` implement the same iteration; the compiled one
is picked automatically when it has been built (``python setup.py
build_ext --inplace``).

The dominant eigenvalue is estimated from two-step norm ratios,
sqrt(|M^2 v| / |v|), which also converges for period-two incidence graphs
(free products of two parabolic cyclic groups produce exactly those).
"""

from __future__ import annotations

import numpy as np

from .errors import NonConvergence, NotIrreducible

try:  # compiled hot loop, optional
    from . import _ckernels as _compiled
except ImportError:  # pragma: no cover - depends on build environment
    _compiled = None

HAVE_COMPILED = _compiled is not None


def backend_name(backend: str = "auto") -> str:
    if backend == "auto":
        return "compiled" if HAVE_COMPILED else "python"
    if backend not in ("python", "compiled"):
        raise ValueError("unknown backend %r" % (backend,))
    if backend == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernel requested but not built")
    return backend


def power_log_radius(
    weights: np.ndarray,
    in_keys: np.ndarray,
    out_keys: np.ndarray,
    n_keys: int,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    backend: str = "auto",
):
    """log of the spectral radius of the factorized nonnegative operator.

    weights  -- per-edge weight w(e) >= 0 (already scaled to avoid overflow)
    in_keys  -- key indexing the first two symbols of each edge
    out_keys -- key indexing the last two symbols of each edge
    n_keys   -- number of distinct keys

    Returns (log_radius, iterations, delta) where delta is the final
    relative change of the eigenvalue estimate.  Raises NonConvergence when
    the iteration budget is exhausted and NotIrreducible when the iterate
    collapses in a way incompatible with a simple dominant value.
    """
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    in_keys = np.ascontiguousarray(in_keys, dtype=np.int64)
    out_keys = np.ascontiguousarray(out_keys, dtype=np.int64)
    n = weights.shape[0]
    if n == 0:
        return -np.inf, 0, 0.0
    if not np.any(weights > 0.0):
        return -np.inf, 0, 0.0

    if backend_name(backend) == "compiled":
        log_r, iters, delta, status = _compiled.power_log_radius(
            weights, in_keys, out_keys, int(n_keys), float(tol), int(max_iter)
        )
        if status == 2:
            raise NotIrreducible("iterate collapsed to zero; operator reducible")
        if status == 1:
            raise NonConvergence(
                "power iteration did not reach tol=%g in %d iterations"
                % (tol, max_iter)
            )
        return log_r, iters, delta
    return _power_log_radius_numpy(weights, in_keys, out_keys, n_keys, tol, max_iter)


WINDOW = 12  # averages out norm-ratio cycles of any period dividing 12


def _power_log_radius_numpy(weights, in_keys, out_keys, n_keys, tol, max_iter):
    n = weights.shape[0]
    v = np.full(n, 1.0 / n)
    ratios = np.zeros(WINDOW)
    est_prev = None
    for it in range(1, max_iter + 1):
        s = np.bincount(in_keys, weights=v, minlength=n_keys)
        v = weights * s[out_keys]
        norm = v.sum()
        if norm <= 0.0 or not np.isfinite(norm):
            if it <= 2:
                return -np.inf, it, 0.0
            raise NotIrreducible("iterate collapsed to zero; operator reducible")
        v /= norm
        ratios[it % WINDOW] = np.log(norm)
        # mean log-ratio over the window: stable for periodic incidence
        # (free products of two parabolic pairs give period two, toy cycles
        # give longer periods) where single-step ratios oscillate
        est = float(ratios.mean())
        if est_prev is not None and it > 2 * WINDOW:
            delta = abs(est - est_prev) / max(1.0, abs(est))
            if delta <= tol:
                return est, it, delta
        est_prev = est
    raise NonConvergence(
        "power iteration did not reach tol=%g in %d iterations" % (tol, max_iter)
    )
