"""Compare the compiled and pure-Python kernels on random inputs.

    python3 benchmarks/bench_kernels.py [--size N] [--repeat R]
"""
import argparse
import random
import timeit

from scg import _pykernels

try:
    from scg import _ckernels
except ImportError:
    _ckernels = None


def cases(size, rng):
    seq = [rng.choice((1, 2, 3, 4)) for _ in range(size)]
    periodic = ([1, 2, 1, 3] * (size // 4 + 1))[:size]
    return {
        "suffix_array": lambda k: k.suffix_array(seq),
        "lcp_array": lambda k, sa=_pykernels.suffix_array(seq): k.lcp_array(seq, sa),
        "z_array": lambda k: k.z_array(seq),
        "period_runs": lambda k: k.period_runs(periodic, 4, True),
        "window_hashes": lambda k: k.window_hashes(seq, 32),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"n = {args.size}, best of {args.repeat}")
    print(f"{'kernel':<15}{'python (s)':>12}{'compiled (s)':>14}{'speedup':>10}")
    for name, fn in cases(args.size, rng).items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:<15}{py:>12.4f}{'n/a':>14}{'':>10}")
            continue
        assert fn(_ckernels) == fn(_pykernels), name
        c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<15}{py:>12.4f}{c:>14.4f}{py / c:>9.1f}x")


if __name__ == "__main__":
    main()
