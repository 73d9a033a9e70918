"""Compare the compiled and pure-Python integration kernels.

Usage::

    python bench/benchmark.py [--cycles 200] [--repeat 3]

Each model is integrated from the same state with both kernels; the script
reports wall time per run, the speed-up and the largest difference between
the two trajectories.  Both kernels perform the same floating-point operations
in the same order, so the difference is zero except where the C and Python
trigonometric functions round differently (the full nonlinear model).
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from huygens.dynamics import ModelKind, get_kernel, integrate
from huygens.params import DimensionlessParams, PoincareParams

DIM = DimensionlessParams(sigma=0.1613, omega2=0.002672, beta=0.01298, gamma=0.122, epsilon=0.75)
POIN = PoincareParams(mu=0.0133, a=5.0, sigma=0.1, omega=0.3, gamma=0.5, kappa=3.0)

CASES = [
    (ModelKind.FULL_NONLINEAR, DIM, [0.1, 0, 0.5, 0, 0, 0]),
    (ModelKind.DIMENSIONLESS, DIM, [0.1, 0, 0.5, 0, 0, 0]),
    (ModelKind.LINEAR, DIM, [0.1, 0, 0.5, 0, 0, 0]),
    (ModelKind.SMALL_SIGMA, POIN, [0.1, 0, 0.5, 0, 0, 0]),
    (ModelKind.THREE_DOF, POIN, [0.1, 0, 0.5, 0, 0, 0]),
    (ModelKind.TWO_MASS, POIN, [0.1, 0, 0.5, 0, 0, 0, 0, 0]),
]


def best_time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cycles", type=float, default=200.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    py = get_kernel("python")
    try:
        cy = get_kernel("cython")
    except ImportError:
        print("compiled kernel not built; only the Python kernel is available")
        cy = None
    t_end = 2 * math.pi * args.cycles
    print(f"{'model':<22}{'steps':>8}{'python [s]':>12}{'cython [s]':>12}{'speed-up':>10}{'max |diff|':>12}")
    for model, params, y0 in CASES:
        tp, trp = best_time(lambda: integrate(model, y0, params, t_end, kernel=py), args.repeat)
        if cy is None:
            print(f"{model.tag:<22}{trp.stats['nsteps']:>8}{tp:>12.4f}")
            continue
        tc, trc = best_time(lambda: integrate(model, y0, params, t_end, kernel=cy), args.repeat)
        diff = float(np.max(np.abs(trp.states - trc.states)))
        print(f"{model.tag:<22}{trc.stats['nsteps']:>8}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
