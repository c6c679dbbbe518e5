"""Compare the compiled and pure-Python linear-algebra kernels.

Runs the kernels on random rational matrices of the sizes the sweeps use,
checks both backends agree exactly, then times the whole built-in regression
under each backend (in a subprocess, since the backend is chosen at import).

    python benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from deltakit import _linalg_py

try:
    from deltakit import _linalg_ext
except ImportError:  # pragma: no cover - depends on the build
    _linalg_ext = None


def random_symmetric(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    for i in range(n):
        m[i][i] -= 40  # keep it comfortably definite so no pivot vanishes
    return m


def workload(rng, count):
    cases = []
    for _ in range(count):
        n = rng.randint(2, 7)
        m = random_symmetric(rng, n)
        a = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)]
        b = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)]
        cases.append((m, a, b))
    return cases


def run_kernels(mod, cases):
    out = []
    for m, a, b in cases:
        out.append((mod.bilinear(m, a, b), tuple(mod.solve(m, a)), tuple(mod.leading_minors(m))))
    return out


def time_it(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def time_regression(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["DELTAKIT_PURE_PYTHON"] = "1"
    else:
        env.pop("DELTAKIT_PURE_PYTHON", None)
    t = time.perf_counter()
    subprocess.run([sys.executable, "-m", "deltakit", "check"], env=env, check=True, capture_output=True)
    return time.perf_counter() - t


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=217)
    parser.add_argument("--cases", type=int, default=2000)
    args = parser.parse_args(argv)

    cases = workload(random.Random(args.seed), args.cases)
    t_py = time_it(lambda: run_kernels(_linalg_py, cases), args.repeat)
    print(f"kernels   python  {t_py * 1e3:8.1f} ms  ({args.cases} cases)")
    if _linalg_ext is None:
        print("kernels   cython  (extension not built)")
    else:
        if run_kernels(_linalg_ext, cases) != run_kernels(_linalg_py, cases):
            print("backends DISAGREE")
            return 1
        t_cy = time_it(lambda: run_kernels(_linalg_ext, cases), args.repeat)
        print(f"kernels   cython  {t_cy * 1e3:8.1f} ms  speedup {t_py / t_cy:4.2f}x, results identical")
    r_py = time_regression(pure=True)
    print(f"regression python {r_py:8.2f} s")
    if _linalg_ext is not None:
        r_cy = time_regression(pure=False)
        print(f"regression cython {r_cy:8.2f} s  speedup {r_py / r_cy:4.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
