"""Compare the compiled and pure-Python short-vector enumeration kernels.

    python3 benchmarks/bench_enumeration.py --repeat 3
"""
import argparse
import time

from ssx import _kernel
from ssx import root_lattice as rl

CASES = [("A", 6, 4), ("D", 5, 4), ("E", 6, 4), ("E", 7, 4), ("E", 8, 4)]


def _time(gram, bound, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = _kernel.enumerate_short(gram, bound, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, sorted(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--bound", type=int, default=None, help="override the norm bound")
    args = ap.parse_args(argv)
    if _kernel.BACKEND != "cython":
        print("compiled kernel unavailable; timing the Python backend only")
    print(f"{'lattice':<8} {'bound':>5} {'vectors':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for kind, n, bound in CASES:
        bound = args.bound or bound
        gram, den = rl._integer_gram(rl.build_coroot_lattice(kind, n))
        t_py, v_py = _time(gram, bound * den, "python", args.repeat)
        if _kernel.BACKEND == "cython":
            t_cy, v_cy = _time(gram, bound * den, "cython", args.repeat)
            if v_cy != v_py:
                raise SystemExit(f"{kind}{n}: backends disagree")
            print(f"{kind}{n:<7} {bound:>5} {len(v_py):>8} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>7.1f}x")
        else:
            print(f"{kind}{n:<7} {bound:>5} {len(v_py):>8} {t_py:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
