"""Grid class decomposition for two small instances: a lattice one and an octagonal one."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from modeltomo.cyclotomic import CycNum, zeta
from modeltomo.grid import build_grid, decompose, module_index
from modeltomo.modelset import preset_spec
from modeltomo.xray import make_instance


@dataclass
class Config:
    as_json: bool = False


def square_case():
    pts = [CycNum(4, list(c)) for c in ((-3, -1), (-1, 0), (0, 0), (0, 2), (4, 0))]
    i = zeta(4)
    return "square", preset_spec("square"), pts, [1 + i, 1 - 2 * i]


def octagonal_case():
    coords = ((-1, -1, -1, 1), (0, 0, 0, 0), (1, 0, -1, -1), (1, 0, 0, 0), (1, 1, 1, 1))
    pts = [CycNum(8, list(c)) for c in coords]
    return "ammann_beenker", preset_spec("ammann_beenker"), pts, [CycNum.one(8), zeta(8, 2)]


def run(cfg: Config) -> list[dict]:
    rows = []
    for name, spec, pts, dirs in (square_case(), octagonal_case()):
        inst = make_instance(spec, pts, dirs)
        grid = build_grid(inst)
        bound = module_index(*dirs)
        cls = decompose(grid, bound)
        rows.append(
            {
                "preset": name,
                "points": len(pts),
                "grid": len(grid),
                "index_bound": str(bound),
                "classes": [len(c) for c in cls.point_sets()],
            }
        )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", dest="as_json")
    cfg = Config(**vars(ap.parse_args()))
    rows = run(cfg)
    if cfg.as_json:
        print(json.dumps(rows, indent=2))
        return
    for r in rows:
        print(f"{r['preset']:>15}: {r['points']} points, grid {r['grid']}, "
              f"index bound {r['index_bound']}, class sizes {r['classes']}")


if __name__ == "__main__":
    main()
