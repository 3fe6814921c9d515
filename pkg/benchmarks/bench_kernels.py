"""Time the hot kernels with the numba backend and the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time (``EXTREMAL_DOMAINS_NO_NUMBA=1``). Timings are the best of
``--repeat`` warm runs, so numba compilation is excluded.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from extremal_domains import _backend, _kernels, approx, quaddiff
from extremal_domains.geometry import PlanarDomain
from extremal_domains.laurent import Laurent

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
t = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
ring = np.exp(1j * t) * (1 + 0.2 * np.cos(3 * t))
pts = 2.4 * (rng.random(4000) - 0.5) + 2.4j * (rng.random(4000) - 0.5)
lap = Laurent.from_poles({0.1j: list(rng.normal(size=24))}, poly=list(rng.normal(size=24)), center=0.2)
zs = 0.5 + rng.random(200000) + 1j * rng.random(200000)
path = np.linspace(0.5, 1.5 + 0.5j, 50)
qd = quaddiff.QuadraticDifferential.polynomial([0, 1])
ell = PlanarDomain.ellipse(1.0, 0.6)

cases = {
    "winding_numbers 4000 x 2048": lambda: _kernels.winding_numbers(pts, ring),
    "count_crossings 2048": lambda: _kernels.count_crossings(ring),
    "laurent_eval 2e5 points": lambda: _kernels.laurent_eval(zs, *lap.kernel_args()),
    "rk4_path h=1e-4": lambda: _kernels.rk4_path(path, *lap.kernel_args(), 0.3, 1 + 0j, 0.5j, 1e-4, 1 + 0j),
    "trace_trajectory": lambda: quaddiff.trace_trajectory(qd, 0.3 + 0.1j, max_length=2.0),
    "solve_minimax ellipse": lambda: approx.solve_minimax(ell),
}
out = {"backend": _backend.backend_name(), "times": {}}
for name, fn in cases.items():
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out["times"][name] = best
print(json.dumps(out))
"""


def run(no_numba, repeat):
    env = dict(os.environ)
    env.pop("EXTREMAL_DOMAINS_NO_NUMBA", None)
    if no_numba:
        env["EXTREMAL_DOMAINS_NO_NUMBA"] = "1"
    r = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True,
                       check=True)
    return json.loads(r.stdout.strip().splitlines()[-1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", help="also write the raw timings here")
    args = p.parse_args(argv)
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    width = max(map(len, fast["times"]))
    print(f"{'kernel':<{width}}  {fast['backend']:>10}  {slow['backend']:>10}  speedup")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:<{width}}  {t_fast * 1e3:8.2f}ms  {t_slow * 1e3:8.2f}ms  {t_slow / t_fast:6.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba": fast, "numpy": slow}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
