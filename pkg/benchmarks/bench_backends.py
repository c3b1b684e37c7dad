"""Time the hot kernels under both backends.

Each backend runs in its own interpreter because the choice is read from
``LOEWNERLAB_BACKEND`` at import. numba compile time is excluded by a
warm-up call.

    python3 benchmarks/bench_backends.py --repeat 5
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from loewnerlab import drivers, kernels, loewner, scenarios

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
V = np.sort(rng.normal(size=400))
lam = np.full(400, 1 / 400)
S = np.array([0.3 + 1j, -0.5 + 0.7j])
alpha = np.array([-10.0, 4.0])
path = drivers.simulate(scenarios.builtin("johnny", 51).with_(T=0.2))
grid = scenarios.field_grid(40, 20)

cases = {
    "drift_sle N=400": lambda: kernels.drift_sle(V, lam),
    "drift_quad N=400": lambda: kernels.drift_quad(V, lam, S, alpha),
    "cauchy N=400 x 800 z": lambda: kernels.cauchy(V, lam, grid.ravel()),
    "loewner_flow 800 probes": lambda: loewner.grid_flow(path, grid, 0.2),
    "simulate semicircle N=100": lambda: drivers.simulate(
        scenarios.builtin("semicircle", 100).with_(T=0.02)),
}
out = {}
for name, fn in cases.items():
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps({"backend": kernels.BACKEND, "timings": out}))
"""


def run_backend(backend, repeat):
    env = dict(os.environ, LOEWNERLAB_BACKEND=backend)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="best of this many runs per case")
    args = parser.parse_args(argv)

    t0 = time.perf_counter()
    numba_res = run_backend("numba", args.repeat)
    numpy_res = run_backend("numpy", args.repeat)
    if numba_res["backend"] != "numba":
        print("numba unavailable; both columns use numpy", file=sys.stderr)

    width = max(len(k) for k in numba_res["timings"])
    print(f"{'case':<{width}}  {'numba [ms]':>11}  {'numpy [ms]':>11}  {'speedup':>8}")
    for name, a in numba_res["timings"].items():
        b = numpy_res["timings"][name]
        print(f"{name:<{width}}  {1e3 * a:11.3f}  {1e3 * b:11.3f}  {b / a:8.1f}x")
    print(f"total wall time {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
