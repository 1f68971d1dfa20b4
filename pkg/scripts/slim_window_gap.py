"""Diagonal sets in a slim octagonal window.

The anchored problem (fixed translate, no window) has k! solutions on the
k x k grid, while the window pins down the diagonal.  Prints both counts and
the timings of reconstruction and the uniqueness test as k grows.
"""

from __future__ import annotations

import argparse
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from modeltomo.cyclotomic import CycNum, zeta
from modeltomo.grid import build_grid
from modeltomo.modelset import ModelSetSpec, polygon_window, preset_spec
from modeltomo.tomography import anchored_solutions, reconstruct, uniqueness, verify_solution
from modeltomo.xray import make_instance


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [3, 4, 5, 6])
    count_limit: int = 6  # anchored enumeration is k!; skip beyond this


def slim_spec() -> ModelSetSpec:
    u = 1 + zeta(8, 3)
    i = zeta(8, 2)
    quarter = Fraction(1, 4)
    W = polygon_window(8, [(u, 2), (-u, 2), (i * u, quarter), (-i * u, quarter)], "slim_diagonal")
    return ModelSetSpec(8, preset_spec("ammann_beenker").star, W)


def row(spec: ModelSetSpec, k: int, cfg: Config) -> str:
    z = zeta(8)
    F = [a + a * z for a in range(k)]
    dirs = [CycNum.one(8), z]
    inst = make_instance(spec, F, dirs)
    grid = [g.position for g in build_grid(inst)]
    count = "-"
    if k <= cfg.count_limit:
        count = str(sum(1 for _ in anchored_solutions(grid, inst)))
    t0 = time.perf_counter()
    res = reconstruct(inst)
    t1 = time.perf_counter()
    uni = uniqueness(F, dirs, spec)
    t2 = time.perf_counter()
    ok = verify_solution(inst, res)
    diagonal = res.solution is not None and set(res.solution) == set(F)
    return (f"{k:>3} {len(grid):>5} {count:>9} {math.factorial(k):>7} "
            f"{str(ok and diagonal):>9} {uni.status.value:>10} {t1 - t0:8.3f}s {t2 - t1:8.3f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    ap.add_argument("--count-limit", type=int, default=Config.count_limit)
    cfg = Config(**vars(ap.parse_args()))
    spec = slim_spec()
    print("  k  grid  anchored      k!  diagonal  uniqueness  reconstruct  unique")
    for k in cfg.sizes:
        print(row(spec, k, cfg))


if __name__ == "__main__":
    main()
