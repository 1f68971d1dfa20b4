"""Random patch subsets: X-ray, reconstruct, verify."""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from modeltomo.cyclotomic import zeta
from modeltomo.modelset import generate_patch, preset_spec
from modeltomo.tomography import Status, reconstruct, verify_solution
from modeltomo.xray import make_instance


@dataclass
class Config:
    preset: str = "ammann_beenker"
    radius: float = 4.0
    trials: int = 20
    min_size: int = 3
    max_size: int = 8
    seed: int = 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    d = Config()
    ap.add_argument("--preset", default=d.preset)
    ap.add_argument("--radius", type=float, default=d.radius)
    ap.add_argument("--trials", type=int, default=d.trials)
    ap.add_argument("--min-size", type=int, default=d.min_size)
    ap.add_argument("--max-size", type=int, default=d.max_size)
    ap.add_argument("--seed", type=int, default=d.seed)
    cfg = Config(**vars(ap.parse_args()))

    spec = preset_spec(cfg.preset)
    pts = generate_patch(spec, cfg.radius).points
    dirs = [zeta(spec.n, 0), zeta(spec.n, 1)]
    rng = random.Random(cfg.seed)
    good = 0
    t0 = time.perf_counter()
    for trial in range(cfg.trials):
        F = rng.sample(pts, rng.randint(cfg.min_size, min(cfg.max_size, len(pts))))
        inst = make_instance(spec, F, dirs)
        res = reconstruct(inst)
        ok = res.status is Status.CONSISTENT and verify_solution(inst, res)
        good += ok
        same = ok and set(res.solution) == set(F)
        print(f"trial {trial:>3}: |F|={len(F):>2} status={res.status.value:<12} verified={ok} recovered_F={same}")
    print(f"{good}/{cfg.trials} verified, {cfg.preset} patch of {len(pts)} points, {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
