#!/usr/bin/env python3
"""Compare the compiled kernel against the numpy fallback on the workloads
that dominate a verification run: batched block-sum evaluation (quadrature
circles) and a full proximity integral on a schedule-sized curve.

Run:  python benchmarks/bench_kernels.py [--points 16384] [--repeats 7]
"""

import argparse
import math
import time

import numpy as np

from unicurve.kernels import compiled_or_none, pure
from unicurve.nevanlinna import QuadConfig, proximity
from unicurve.rcurve import RationalCurve
from unicurve.scheduler import GrowthGauge, build_schedule, resolve_all
from unicurve.curve import UniversalCurve


def schedule_sized_packed():
    """Packed data shaped like the acceptance schedule (6 blocks, n=1,
    degrees <= 2)."""
    gauge = GrowthGauge.scaled_log(1.0, 1.0)
    c1 = RationalCurve.from_strings([["0", "1"], ["1"]])
    c2 = RationalCurve.from_strings([["1", "0", "1"], ["0", "1"]])
    s = resolve_all(build_schedule([c1, c2], [0.0, math.pi / 2], 6, gauge, 1))
    u = UniversalCurve(s)
    packed = u._value
    return u, (packed.num_flat, packed.num_off, packed.den_flat, packed.den_off, u.centers)


def best_of(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=16384)
    ap.add_argument("--repeats", type=int, default=7)
    args = ap.parse_args()

    comp = compiled_or_none()
    u, packed = schedule_sized_packed()
    rng = np.random.default_rng(0)
    zs = rng.normal(scale=100, size=args.points) + 1j * rng.normal(
        scale=100, size=args.points
    )

    print(f"block-sum evaluation, {args.points} points, 6 blocks, n=1")
    t_pure = best_of(lambda: pure().rational_block_sum(*packed, zs), args.repeats)
    print(f"  pure numpy : {t_pure * 1e3:8.3f} ms")
    if comp is None:
        print("  compiled   : not built")
    else:
        t_comp = best_of(lambda: comp.rational_block_sum(*packed, zs), args.repeats)
        print(f"  compiled   : {t_comp * 1e3:8.3f} ms   ({t_pure / t_comp:.2f}x)")
        a = pure().rational_block_sum(*packed, zs)
        b = comp.rational_block_sum(*packed, zs)
        print(f"  max |diff| : {float(np.max(np.abs(a - b))):.3e}")

    print("proximity integral m(r) on the 6-block schedule (doubling trapezoid)")
    import unicurve.kernels as kmod

    quad = QuadConfig()
    radii = [30.0, 51.3, 160.0, 5000.0]  # 51.3: near disc 1 but off its pole

    def run_proximity():
        for r in radii:
            proximity(u, r, quad)

    saved = (kmod._impl, kmod.polyval, kmod.rational_block_sum)
    try:
        kmod._impl = pure()
        kmod.polyval = pure().polyval
        kmod.rational_block_sum = pure().rational_block_sum
        t_pure = best_of(run_proximity, max(3, args.repeats // 2))
        print(f"  pure numpy : {t_pure * 1e3:8.3f} ms")
        if comp is not None:
            kmod._impl = comp
            kmod.polyval = comp.polyval
            kmod.rational_block_sum = comp.rational_block_sum
            t_comp = best_of(run_proximity, max(3, args.repeats // 2))
            print(f"  compiled   : {t_comp * 1e3:8.3f} ms   ({t_pure / t_comp:.2f}x)")
    finally:
        kmod._impl, kmod.polyval, kmod.rational_block_sum = saved


if __name__ == "__main__":
    main()
