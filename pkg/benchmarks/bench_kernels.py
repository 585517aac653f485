"""Numba vs numpy kernel benchmark.

Times each hot kernel on both backends with identical inputs and checks
that the outputs agree, then times one end-to-end trajectory per backend in
a subprocess (the backend is fixed at import time via DDGATE_BACKEND).

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ddgate.kernels import _numba, _numpy
from ddgate.pulses import PulseSchedule


def _inputs():
    sched = PulseSchedule.udd(8, 0.016)
    sw = sched.switching_function()
    horizon = sched.horizon(16)
    bounds = np.asarray(horizon.boundaries)
    signs = np.asarray(horizon.signs)
    pos, coef = sched.positions_and_coefficients()
    omega = np.geomspace(1e-2, 2e3, 200_000)
    ms = np.arange(1, 17, dtype=np.int64)
    return {
        "boundary_sum": (omega * 0.016, pos, coef),
        "im_functional": (omega, sw.starts, sw.lengths, np.asarray(sw.signs)),
        "dirichlet": (omega[:20_000] * 0.016, ms, 1e-6),
        "aleph_factor": (omega[:20_000] * 0.016, ms),
        "pair_sum_sine": (omega[:2_000], bounds, signs, signs),
        "pair_sum_ohmic": (1.0, 30.0, bounds, signs, signs),
    }


_E2E = """
import time
from ddgate import BACKEND, BathTopology, Ohmic, PulseSchedule, Tabulated, theta_of_t, trajectory
from ddgate.kernels import im_functional
import numpy as np
im_functional(np.ones(3), np.zeros(1), np.ones(1), np.ones(1))  # warm the jit
t0 = time.perf_counter()
trajectory(PulseSchedule.udd(8, 0.016), 16, BathTopology(Ohmic(100.0, 30.0), None, Ohmic(100.0, 30.0), Ohmic(100.0, 30.0)), 1.0)
w = np.linspace(0.0, 900.0, 301)
theta_of_t(PulseSchedule.udd(4, 0.016), 4, Tabulated(tuple(w), tuple(w * np.exp(-w / 30.0))), method="time")
print(BACKEND, time.perf_counter() - t0)
"""


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}  max|diff|")
    for name, inp in _inputs().items():
        f_np, f_nb = getattr(_numpy, name), getattr(_numba, name)
        ref, got = f_np(*inp), f_nb(*inp)  # also compiles
        diff = float(np.max(np.abs(np.asarray(ref) - np.asarray(got))))
        t_np = min(timeit.repeat(lambda: f_np(*inp), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*inp), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}  {diff:.2e}")

    print("\nend-to-end: trajectory (UDD8, M=16, three baths) + time-domain Theta on a tabulated spectrum")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, DDGATE_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", _E2E], env=env, capture_output=True, text=True, check=True)
        name, secs = out.stdout.split()
        print(f"  {name:<8}{float(secs):8.3f} s")


if __name__ == "__main__":
    main()
