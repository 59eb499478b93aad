"""Time the compiled sweep kernels against the numpy reference versions.

Runs the two hot kernels (single-target phase sweep, worst-receiver phase
sweep) on representative panel sizes and prints per-sweep wall time for each
backend plus the speedup.  State is rebuilt before every timed call because
the kernels update their inputs in place.

Usage: python benchmarks/bench_kernels.py [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from irswet import _kernels_py
from irswet.hardware import CouplingParams, amplitude_of_phase

try:
    from irswet import _accel
except ImportError:
    _accel = None

GRID_POINTS = 360
REFINE_TOL = 1e-6


def ao_case(n, seed=0):
    rng = np.random.default_rng(seed)
    params = CouplingParams(beta_min=0.2, eta=0.43 * np.pi, alpha=1.6)
    thetas = rng.uniform(-np.pi, np.pi, n)
    psis = rng.uniform(-np.pi, np.pi, n)
    grid = np.linspace(-np.pi, np.pi, GRID_POINTS, endpoint=False)
    grid_beta = amplitude_of_phase(grid, params)
    grid_cos = np.cos(grid)
    grid_sin = np.sin(grid)
    amps = amplitude_of_phase(thetas, params)
    u = float(np.sum(amps * np.cos(thetas + psis)))
    v = float(np.sum(amps * np.sin(thetas + psis)))

    def setup():
        return (thetas.copy(), psis, params.beta_min, params.eta, params.alpha,
                grid, grid_beta, grid_cos, grid_sin, REFINE_TOL,
                np.array([u, v]))

    return setup


def maxmin_case(k, n, seed=0):
    rng = np.random.default_rng(seed)
    channels = np.ascontiguousarray(
        (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n)))
        / np.sqrt(2.0))
    thetas = rng.uniform(-np.pi, np.pi, n)
    grid = np.linspace(-np.pi, np.pi, GRID_POINTS, endpoint=False)
    grid_cos = np.cos(grid)
    grid_sin = np.sin(grid)
    sums = (np.exp(1j * thetas)[None, :] * channels).sum(axis=1)

    def setup():
        return (thetas.copy(), channels, grid, grid_cos, grid_sin,
                REFINE_TOL, sums.copy())

    return setup


def best_of(fn, setup, repeats):
    """Minimum wall time over `repeats` calls, state rebuilt outside the clock."""
    best = np.inf
    for _ in range(repeats):
        args = setup()
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed calls per case, best is reported")
    args = parser.parse_args()

    cases = [
        ("ao_sweep      n=100        ", "ao_sweep", ao_case(100)),
        ("ao_sweep      n=400        ", "ao_sweep", ao_case(400)),
        ("maxmin_sweep  k=3  n=100   ", "maxmin_sweep", maxmin_case(3, 100)),
        ("maxmin_sweep  k=8  n=256   ", "maxmin_sweep", maxmin_case(8, 256)),
    ]

    if _accel is None:
        print("compiled kernels not built; timing the python backend only")
    header = f"{'case':<29}{'python':>12}{'cython':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, name, setup in cases:
        t_py = best_of(getattr(_kernels_py, name), setup, args.repeats)
        if _accel is not None:
            t_cy = best_of(getattr(_accel, name), setup, args.repeats)
            print(f"{label:<29}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
                  f"{t_py / t_cy:>9.1f}x")
        else:
            print(f"{label:<29}{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
