"""Benchmark the Euler-characteristic backends: compiled kernel vs numpy.

Times both backends on random masks and on thresholded smooth fields at a
range of grid sizes, checks that they agree, and prints a small table.

Usage::

    python benchmarks/bench_euler.py [--repeats 5] [--sizes 64,128,256,512]
"""

import argparse
import time

import numpy as np

from meanchi.topology import HAVE_COMPILED, euler_char_compiled, euler_char_numpy


def make_masks(size, dim, rng):
    shape = (size,) * dim
    random_mask = rng.random(shape) < 0.5
    # smooth field: sum of a few random plane waves, thresholded at 0
    axes = [np.linspace(0.0, 2.0 * np.pi, size)] * dim
    grid = np.meshgrid(*axes, indexing="ij")
    field = np.zeros(shape)
    for _ in range(6):
        k = rng.integers(1, 6, size=dim)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        field += np.cos(sum(ki * gi for ki, gi in zip(k, grid)) + phase)
    smooth_mask = field >= 0.0
    return {"random": random_mask, "smooth": smooth_mask}


def time_backend(func, mask, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        chi = func(mask)
        best = min(best, time.perf_counter() - start)
    return chi, best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--sizes", default="64,128,256,512")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernel not available; benchmarking numpy backend only")

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)
    header = f"{'case':<24}{'chi':>8}{'numpy [ms]':>14}"
    if HAVE_COMPILED:
        header += f"{'compiled [ms]':>16}{'speedup':>10}"
    print(header)
    for dim in (2, 3):
        for size in sizes:
            if dim == 3 and size > 128:
                continue
            for label, mask in make_masks(size, dim, rng).items():
                case = f"{dim}d {label} {size}^{dim}"
                chi_np, t_np = time_backend(euler_char_numpy, mask, args.repeats)
                row = f"{case:<24}{chi_np:>8}{t_np * 1e3:>14.3f}"
                if HAVE_COMPILED:
                    chi_c, t_c = time_backend(
                        euler_char_compiled, mask, args.repeats
                    )
                    if chi_c != chi_np:
                        raise SystemExit(
                            f"backend disagreement on {case}: {chi_c} != {chi_np}"
                        )
                    row += f"{t_c * 1e3:>16.3f}{t_np / t_c:>10.1f}"
                print(row)


if __name__ == "__main__":
    main()
