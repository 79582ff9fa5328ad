"""Compare the compiled kernels with the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints per-kernel timings and the speedup, then times an end-to-end fused
CDF/threshold workload under each backend (in a subprocess, since the
backend is chosen at import).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from fusedglrt import _kernels_py as py_k

try:
    from fusedglrt import _kernels as c_k
except ImportError:
    c_k = None

END_TO_END = """
import time, numpy as np
from fusedglrt import dist, _backend
t = time.perf_counter()
p = dist.FusedDistParams.default(15.0, 15.0)
z = np.geomspace(1.05, 1e3, 400)
dist.cdf_h0_fused(z, p.central())
dist.cdf_h1_fused(z, p)
dist.threshold_for_pfa(0.01, p.central())
print(_backend.BACKEND, time.perf_counter() - t)
"""


def _inputs(rng):
    K = 400
    lc = -np.cumsum(np.log(np.arange(1, K + 1)))
    sign = np.where(np.arange(K) % 2, 1.0, -1.0)
    return {
        "lgamma_real": ((rng.uniform(-40, 40, 20000),), {}),
        "lgamma_shift": ((-2.5 + 1e-7, np.arange(-200, 200)), {}),
        "log_gamma_complex": ((rng.uniform(-30, 30, 5000) + 1j * rng.uniform(-30, 30, 5000),), {}),
        "series_sum": ((lc, sign, np.arange(K, dtype=float), np.full(K, 1e-15),
                        np.array([0, K]), np.array([False]), np.linspace(-2, 3, 2000),
                        1e-16, 20), {}),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if c_k is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for name, (a, kw) in _inputs(rng).items():
        tp = min(timeit.repeat(lambda: getattr(py_k, name)(*a, **kw), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: getattr(c_k, name)(*a, **kw), number=1, repeat=args.repeat))
        print(f"{name:<20}{1e3 * tp:>14.2f}{1e3 * tc:>16.2f}{tp / tc:>10.1f}")
    print("\nend-to-end (fresh process, cold caches):")
    for pure in (True, False):
        env = dict(os.environ)
        env.pop("FUSEDGLRT_PURE_PYTHON", None)
        if pure:
            env["FUSEDGLRT_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<10}{float(out[1]):8.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
