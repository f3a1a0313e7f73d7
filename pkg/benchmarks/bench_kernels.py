"""Benchmark: compiled vs pure-numpy power-iteration kernel.

The hot loop of a pressure evaluation is the factorized matvec inside the
power iteration.  This script times both backends on the lattice-type
preset at several truncation caps and prints the speedup; run after
``python setup.py build_ext --inplace`` to have the compiled kernel
available.
"""

import time

import numpy as np

from cuspwind.fuchsian import build_group
from cuspwind.gdms import _assemble
from cuspwind.induced import fuchsian_system
from cuspwind.kernels import HAVE_COMPILED, power_log_radius
from cuspwind.presets import preset_config


def bench(backend, weights, in_keys, out_keys, n_keys, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        est, iters, _ = power_log_radius(weights, in_keys, out_keys, n_keys,
                                         backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, est, iters


def main():
    pres = build_group(preset_config("gamma2-type"))
    print("backend availability: compiled =", HAVE_COMPILED)
    print("%6s %8s %9s %12s %12s %9s" % (
        "cap", "edges", "iters", "python[s]", "compiled[s]", "speedup"))
    for cap in (50, 100, 200, 400, 800):
        sysm = fuchsian_system(pres, cap)
        lw, in_keys, out_keys = _assemble(sysm, 0.95, 0.1, "mid", True)
        weights = np.exp(lw - lw.max())
        t_py, est_py, iters = bench("python", weights, in_keys, out_keys,
                                    sysm.n_keys)
        if HAVE_COMPILED:
            t_c, est_c, _ = bench("compiled", weights, in_keys, out_keys,
                                  sysm.n_keys)
            assert abs(est_py - est_c) < 1e-9
            print("%6d %8d %9d %12.4f %12.4f %8.1fx" % (
                cap, len(weights), iters, t_py, t_c, t_py / t_c))
        else:
            print("%6d %8d %9d %12.4f %12s %9s" % (
                cap, len(weights), iters, t_py, "-", "-"))


if __name__ == "__main__":
    main()
