"""Command-line interface.

Exit codes: 0 success (or CONSISTENT / UNIQUE), 1 INCONSISTENT, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import render
from .cyclotomic import CycNum, set_initial_precision, star_coordinates
from .grid import build_grid, decompose, module_index
from .modelset import ModelSetSpec, generate_patch, internal_to_complex, preset_spec
from .separation import maximal_separable_sets, sample_subsets, separate, translation_box
from .tomography import Status, TomographyLimitError, consistency, reconstruct, uniqueness
from .xray import InstanceError, XRayInstance, make_instance

FULL_SEPARATION_LIMIT = 12


class UsageError(Exception):
    pass


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _load(path: str | None) -> dict:
    if path is None:
        raise UsageError("an input file is required")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_direction(n: int, text: str) -> CycNum:
    text = text.strip()
    if text.startswith("["):
        coeffs = json.loads(text)
    else:
        coeffs = [c for c in text.split(",") if c.strip()]
    try:
        return CycNum(n, [Fraction(str(c).strip()) for c in coeffs])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad direction {text!r}: {exc}") from exc


def _spec_from(args: argparse.Namespace, doc: dict | None = None) -> ModelSetSpec:
    if getattr(args, "preset", None):
        return preset_spec(args.preset)
    if args.spec:
        return ModelSetSpec.from_json(_load(args.spec))
    if doc is not None and "spec" in doc:
        return ModelSetSpec.from_json(doc["spec"])
    raise UsageError("a model-set spec is required (--spec FILE or --preset NAME)")


def _instance(args: argparse.Namespace) -> XRayInstance:
    doc = _load(args.input)
    if doc.get("kind", "xray_instance") != "xray_instance":
        raise UsageError(f"expected an xray_instance, got {doc.get('kind')!r}")
    return XRayInstance.from_json(doc)


# ---------------------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    spec = _spec_from(args)
    if args.radius is None or args.radius <= 0:
        raise UsageError("--radius must be positive")
    patch = generate_patch(spec, Fraction(str(args.radius)))
    _emit(args, dumps(patch.to_json(spec)))
    return 0


def cmd_xray(args: argparse.Namespace) -> int:
    doc = _load(args.input)
    spec = _spec_from(args, doc)
    n = spec.n
    if doc.get("kind") == "patch":
        pts = [CycNum.from_list(n, p) for p in doc["points"]]
    else:
        pts = [CycNum.from_list(n, p) for p in doc.get("points", [])]
    if not args.direction or len(args.direction) < 2:
        raise UsageError("give at least two --direction values")
    dirs = [_parse_direction(n, d) for d in args.direction]
    inst = make_instance(spec, pts, dirs)
    _emit(args, dumps(inst.to_json()))
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    inst = _instance(args)
    grid = build_grid(inst)
    try:
        bound = module_index(inst.directions[0], inst.directions[1])
    except ValueError:
        bound = None
    cls = decompose(grid, bound)
    doc = cls.to_json()
    doc["n"] = inst.n
    doc["grid_size"] = len(grid)
    _emit(args, dumps(doc))
    return 0


def cmd_separate(args: argparse.Namespace) -> int:
    inst = _instance(args)
    spec = inst.spec
    if spec.dim == 0:
        raise UsageError("separation needs a two-dimensional internal space")
    cls = decompose(build_grid(inst))
    rng = np.random.default_rng(args.seed)
    out = []
    for ci, c in enumerate(cls.classes):
        rep = c[0].position
        P = [star_coordinates(spec.star, g.position - rep) for g in c]
        full = not args.maximal and len(P) <= FULL_SEPARATION_LIMIT
        fam = separate(spec.window, P) if full else maximal_separable_sets(spec.window, P)
        entry = {
            "class_index": ci,
            "representative": rep.to_list(),
            "points": [g.position.to_list() for g in c],
            "maximal_only": not full,
            "family": fam.to_json(),
        }
        if args.samples:
            A, b = spec.window.float_constraints()
            Pf = np.array([[x.approx_real() for x in p] for p in P])
            seen = sample_subsets(A, b, Pf, args.samples, rng, translation_box(spec.window, Pf))
            fs = fam.subsets()
            missing = [S for S in seen if not any(S <= T for T in fs)] if not full else [
                S for S in seen if S not in fs
            ]
            entry["sampled_outside_family"] = len(missing)
        out.append(entry)
    _emit(args, dumps({"kind": "separation", "n": inst.n, "classes": out}))
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    res = consistency(_instance(args))
    _emit(args, dumps(res.to_json()))
    return 0 if res.status is Status.CONSISTENT else 1


def cmd_reconstruct(args: argparse.Namespace) -> int:
    res = reconstruct(_instance(args))
    _emit(args, dumps(res.to_json()))
    return 0 if res.status is Status.CONSISTENT else 1


def cmd_unique(args: argparse.Namespace) -> int:
    if args.points:
        doc = _load(args.points)
        spec = _spec_from(args, doc)
        pts = [CycNum.from_list(spec.n, p) for p in doc["points"]]
        if not args.direction or len(args.direction) < 2:
            raise UsageError("give at least two --direction values with --points")
        dirs = [_parse_direction(spec.n, d) for d in args.direction]
    else:
        inst = _instance(args)
        res = reconstruct(inst)
        if res.status is not Status.CONSISTENT:
            _emit(args, dumps(res.to_json()))
            return 1
        pts, dirs, spec = list(res.solution), [d.o for d in inst.directions], inst.spec
    res = uniqueness(pts, dirs, spec)
    _emit(args, dumps(res.to_json()))
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    doc = _load(args.input)
    kind = doc.get("kind")
    rs = render.RenderSpec(kind or "", scale=args.scale)
    groups: list[list[complex]] = []
    polys: list[list[complex]] = []
    if kind == "patch":
        n = int(doc["n"])
        pts = [CycNum.from_list(n, p) for p in doc["points"]]
        if args.view == "internal":
            spec = _spec_from(args, doc)
            groups.append([internal_to_complex(n, star_coordinates(spec.star, z)) for z in pts])
            shift = internal_to_complex(n, spec.tau)
            if spec.dim:
                polys.append(render.window_outline(spec.window, shift))
        else:
            groups.append(render.complex_points(pts))
    elif kind == "grid_classification":
        n = int(doc["n"])
        for c in doc["classes"]:
            groups.append(render.complex_points(CycNum.from_list(n, p) for p in c))
    elif kind == "tomography_result":
        n = doc.get("n")
        for key in ("solution", "second_solution"):
            if key in doc and n is not None:
                groups.append(render.complex_points(CycNum.from_list(n, p) for p in doc[key]))
    elif kind in ("xray_instance", None) and "window" in doc:
        spec = ModelSetSpec.from_json(doc)
        if spec.dim:
            polys.append(render.window_outline(spec.window))
    else:
        raise UsageError(f"cannot render input of kind {kind!r}")
    _emit(args, render.svg_document(rs, groups, polys, title=kind))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="model-set spec JSON file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--precision", type=int, default=64, help="initial interval precision in bits")
    common.add_argument("--seed", type=int, default=0, help="seed for sampling oracles")

    p = argparse.ArgumentParser(
        prog="modeltomo", description="Discrete tomography of planar cyclotomic model sets."
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="patch of a model set inside a disk")
    g.add_argument("--preset", help="named preset instead of --spec")
    g.add_argument("--radius", type=float, required=True)
    g.set_defaults(func=cmd_generate)

    x = sub.add_parser("xray", parents=[common], help="X-rays of a patch")
    x.add_argument("input", help="patch JSON")
    x.add_argument("--direction", "-d", action="append", help="coefficients, e.g. 1,0,0,0 or [\"0\",\"1\"]")
    x.add_argument("--preset")
    x.set_defaults(func=cmd_xray)

    for name, func, text in (
        ("decompose", cmd_decompose, "grid classes modulo O_n"),
        ("check", cmd_check, "consistency (exit 0 / 1)"),
        ("reconstruct", cmd_reconstruct, "consistency with a solution"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("input", help="xray_instance JSON")
        s.set_defaults(func=func)

    s = sub.add_parser("separate", parents=[common], help="window-separable subsets per grid class")
    s.add_argument("input", help="xray_instance JSON")
    s.add_argument("--maximal", action="store_true", help="only inclusion-maximal subsets")
    s.add_argument("--samples", type=int, default=0, help="cross-check with random translations")
    s.set_defaults(func=cmd_separate)

    u = sub.add_parser("unique", parents=[common], help="uniqueness of a reconstruction")
    u.add_argument("input", nargs="?", help="xray_instance JSON")
    u.add_argument("--points", help="point set (patch JSON) to test instead")
    u.add_argument("--direction", "-d", action="append")
    u.add_argument("--preset")
    u.set_defaults(func=cmd_unique)

    r = sub.add_parser("render", parents=[common], help="SVG picture of a JSON file")
    r.add_argument("input")
    r.add_argument("--scale", type=float, default=40.0, help="pixels per unit")
    r.add_argument("--view", choices=("physical", "internal"), default="physical")
    r.add_argument("--preset")
    r.set_defaults(func=cmd_render)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_initial_precision(args.precision)
        return args.func(args)
    except (UsageError, InstanceError, TomographyLimitError, ValueError, KeyError, TypeError) as exc:
        print(f"modeltomo {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
