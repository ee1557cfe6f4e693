"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--k 2] [--repeat 5]

Each kernel runs on inputs shaped like those the package produces for a
Killing field of the given k. An end-to-end timing of the spectral
coefficient fit is taken in a subprocess per backend, selected through
G2SPECTRAL_PURE_PYTHON.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from g2spectral import _kernels_py

try:
    from g2spectral import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

END_TO_END = (
    "import time; from g2spectral.loop import random_killing_field; "
    "from g2spectral.spectral import spectral_coefficients; from g2spectral import BACKEND; "
    "A = random_killing_field({k}, 3); t = time.perf_counter(); "
    "[spectral_coefficients(A) for _ in range({repeat})]; "
    "print(BACKEND, (time.perf_counter() - t) / {repeat})"
)


def cases(k, rng):
    d = 6 * k + 1
    coeffs = rng.standard_normal((2 * d + 1, 7, 7)) + 1j * rng.standard_normal((2 * d + 1, 7, 7))
    zetas = np.exp(2j * np.pi * rng.random(24 * d + 48))
    other = rng.standard_normal((d + 2, 7, 7)) + 0j
    mats = rng.standard_normal((zetas.size, 7, 7)) + 1j * rng.standard_normal((zetas.size, 7, 7))
    return {
        "laurent_eval": lambda m: [m.laurent_eval(coeffs, -d, z) for z in zetas[:64]],
        "laurent_eval_many": lambda m: m.laurent_eval_many(coeffs, -d, zetas),
        "laurent_commutator": lambda m: m.laurent_commutator(coeffs, other),
        "charpoly": lambda m: m.charpoly(mats),
    }


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(k, repeat):
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, G2SPECTRAL_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END.format(k=k, repeat=repeat)],
                             env=env, capture_output=True, text=True, check=True)
        name, secs = res.stdout.split()
        out[name] = float(secs)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    table = cases(args.k, rng)
    print(f"k = {args.k}; best of {args.repeat}; times in ms")
    print(f"{'kernel':<20}{'python':>10}{'cython':>10}{'speedup':>10}")
    for name, fn in table.items():
        tp = best_time(lambda: fn(_kernels_py), args.repeat) * 1e3
        if _kernels_c is None:
            print(f"{name:<20}{tp:>10.3f}{'n/a':>10}{'':>10}")
            continue
        tc = best_time(lambda: fn(_kernels_c), args.repeat) * 1e3
        print(f"{name:<20}{tp:>10.3f}{tc:>10.3f}{tp / tc:>9.1f}x")
    e2e = end_to_end(args.k, args.repeat)
    line = "  ".join(f"{b} {t * 1e3:.1f} ms" for b, t in sorted(e2e.items()))
    print(f"spectral_coefficients: {line}")


if __name__ == "__main__":
    main()
