"""Wall-clock comparison of the three spectrum routes, with a pointwise agreement check."""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from ternxc.spectrum import MAX_R, WeilParams, full_spectrum, tower_for
from ternxc.tower import Case


@dataclass(frozen=True)
class BenchConfig:
    rs: tuple[int, ...] = (1, 2, 3)
    methods: tuple[str, ...] = ("reduced", "sequence", "brute")
    workers: int = 1


def main(cfg: BenchConfig) -> None:
    print(f"{'r':>2} {'case':>4} {'method':>9} {'seconds':>9}  agrees")
    for r in cfg.rs:
        for case in Case:
            p = WeilParams(r, case)
            ref = None
            for method in cfg.methods:
                if r > MAX_R[method]:
                    continue
                tower_for.cache_clear()
                t0 = time.perf_counter()
                rep = full_spectrum(p, method, workers=cfg.workers)
                dt = time.perf_counter() - t0
                ref = rep.values if ref is None else ref
                print(f"{r:>2} {case.value:>4} {method:>9} {dt:>9.3f}  {np.array_equal(ref, rep.values)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--r", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    main(BenchConfig(rs=tuple(a.r), workers=a.workers))
