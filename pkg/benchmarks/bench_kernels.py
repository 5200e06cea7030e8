"""Compare the compiled and numpy bitnet kernels on batched Ricci evaluation.

    python3 benchmarks/bench_kernels.py [--rows 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from bngeom import kernels
from bngeom.bitnet import BitnetModel
from bngeom.dag import parse_topology_name


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--names", default="K3,L3,C4,D4,C5")
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"{'model':<6}{'d':>4}{'rows':>8}" + "".join(f"{b + ' s':>12}" for b in backends) + f"{'speedup':>10}")
    rng = np.random.default_rng(0)
    for name in args.names.split(","):
        model = BitnetModel(parse_topology_name(name)[2])
        theta = rng.uniform(0.02, 0.98, (args.rows, model.dim))
        ref = None
        times = []
        for b in backends:
            times.append(best_of(lambda: kernels.bitnet_batch(model, theta, backend=b), args.repeat))
            out = kernels.bitnet_batch(model, theta, backend=b)[0]
            if ref is None:
                ref = out
            else:
                np.testing.assert_allclose(out, ref, rtol=1e-9, atol=1e-9)
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else f"{'n/a':>10}"
        print(f"{name:<6}{model.dim:>4}{args.rows:>8}" + "".join(f"{t:>12.4f}" for t in times) + speed)


if __name__ == "__main__":
    main()
