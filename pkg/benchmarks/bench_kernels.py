"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--number N] [--end-to-end]

Kernel timings call both modules directly on the same inputs.  The
end-to-end timing runs the default CLI scenario in a subprocess once per
backend (the pure one via ``AQCSTAB_PURE=1``).
"""

import argparse
import os
import random
import subprocess
import sys
import time
import timeit

from aqcstab import _kernels_py as py

try:
    from aqcstab import _kernels as cy
except ImportError:
    cy = None


def cases(rng: random.Random, n: int) -> dict[str, list[tuple]]:
    out: dict[str, list[tuple]] = {k: [] for k in
                                   ("split", "from_fraction_rel", "add", "mul", "div", "mix64")}
    for _ in range(n):
        p = rng.choice((2, 3, 5, 7))
        a = rng.randint(-(2**40), 2**40) or 1
        b = rng.randint(1, 2**20)
        x = py.from_fraction_rel(a, b, p, 64)
        y = py.from_fraction_rel(b, a, p, 64)
        out["split"].append((a * p**5, p))
        out["from_fraction_rel"].append((a, b, p, 64))
        out["add"].append((p, *x, *y))
        out["mul"].append((p, *x, *y))
        out["div"].append((p, *x, *y))
        out["mix64"].append((rng.getrandbits(64), a))
    return out


def bench(mod, name: str, args: list[tuple], repeat: int) -> float:
    fn = getattr(mod, name)

    def run():
        for a in args:
            fn(*a)

    return min(timeit.repeat(run, number=1, repeat=repeat)) / len(args)


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["AQCSTAB_PURE"] = "1"
    start = time.perf_counter()
    subprocess.run([sys.executable, "-m", "aqcstab", "--out", os.devnull],
                   env=env, check=False, capture_output=True)
    return time.perf_counter() - start


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--number", type=int, default=20000, help="inputs per kernel")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true", help="also time the default CLI run")
    ns = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels are not built; only the pure backend is available")
    data = cases(random.Random(0), ns.number)
    print(f"{'kernel':<20}{'pure ns/op':>12}{'cython ns/op':>14}{'speedup':>9}")
    for name, args in data.items():
        t_py = bench(py, name, args, ns.repeat)
        if cy is None:
            print(f"{name:<20}{t_py * 1e9:>12.0f}{'-':>14}{'-':>9}")
            continue
        t_cy = bench(cy, name, args, ns.repeat)
        print(f"{name:<20}{t_py * 1e9:>12.0f}{t_cy * 1e9:>14.0f}{t_py / t_cy:>8.1f}x")
    if ns.end_to_end:
        t_py, t_cy = end_to_end(True), end_to_end(False)
        print(f"{'default CLI run':<20}{t_py:>11.2f}s{t_cy:>13.2f}s{t_py / t_cy:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
