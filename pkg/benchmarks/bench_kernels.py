"""Compare the numba and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from latticeforms import _accel
from latticeforms.eisenstein import _window
from latticeforms.discriminant import discriminant_group
from latticeforms.lattice import validate_lattice


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def theta_case():
    # D4 with a Gaussian majorant, many cosets
    G = np.array([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]], dtype=float)
    rng = np.random.default_rng(0)
    centers = rng.random((16, 4))
    radii = np.sqrt(2 * 12.0 * np.diag(np.linalg.inv(G))) + 1
    return lambda flag: _accel.theta_sum(G, G, centers, radii, 0.2, 1.0, 12.0, use_numba=flag)


def coset_case():
    L = validate_lattice([[2, 0, 0], [0, 0, 1], [0, 1, 0]])
    D = discriminant_group(L)
    _, c, d, W, _ = _window(D, D.zero(), 80)
    h = 1e-3
    tau = 0.1 + 1.2j
    taus = np.array([tau, tau + h, tau - h, tau + 1j * h, tau - 1j * h])
    return lambda flag: _accel.coset_series(c, d, W, taus, 1.5, 2.0, use_numba=flag)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {_accel.NUMBA_AVAILABLE}")
    print(f"{'kernel':<14}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}{'max diff':>12}")
    for name, case in [("theta_sum", theta_case()), ("coset_series", coset_case())]:
        a, b = case(True), case(False)  # also warms up the jit
        ra = a[0] if isinstance(a, tuple) else a
        rb = b[0] if isinstance(b, tuple) else b
        diff = float(np.max(np.abs(ra - rb)))
        tn = best_of(lambda: case(True), args.repeat)
        tp = best_of(lambda: case(False), args.repeat)
        print(f"{name:<14}{tn:>12.4f}{tp:>12.4f}{tp / tn:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
