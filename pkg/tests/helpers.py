"""Shared builders and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from modeltomo.cyclotomic import CycNum, is_in_On, phi, star_coordinates, zeta
from modeltomo.grid import build_grid
from modeltomo.modelset import ModelSetSpec, generate_patch, polygon_window, preset_spec
from modeltomo.separation import separate, subset_at
from modeltomo.xray import InstanceError, XRayInstance, _key, make_instance


def random_integer(n: int, rng: random.Random, bound: int = 3) -> CycNum:
    return CycNum(n, [rng.randint(-bound, bound) for _ in range(phi(n))])


def random_element(n: int, rng: random.Random, bound: int = 4, den: int = 3) -> CycNum:
    return CycNum(n, [Fraction(rng.randint(-bound, bound), rng.randint(1, den)) for _ in range(phi(n))])


_PATCHES: dict[tuple, tuple] = {}


def patch_points(name: str, radius: int = 4, tau: Sequence | None = None) -> tuple[CycNum, ...]:
    key = (name, radius, tuple(tau) if tau else None)
    if key not in _PATCHES:
        _PATCHES[key] = generate_patch(preset_spec(name, tau), radius).points
    return _PATCHES[key]


def slim_diagonal_setup(k: int = 5):
    """Diagonal a + a*zeta_8 (0 <= a < k), directions 1 and zeta_8, slim window along it."""
    n = 8
    z = zeta(n)
    i = zeta(n, 2)
    u = 1 + zeta(n, 3)
    W = polygon_window(
        n, [(u, 2), (-u, 2), (i * u, Fraction(1, 4)), (-i * u, Fraction(1, 4))], "slim_diagonal"
    )
    spec = ModelSetSpec(n, preset_spec("ammann_beenker").star, W)
    F = [a + a * z for a in range(k)]
    return spec, F, [CycNum.one(n), z]


# ---------------------------------------------------------------------------
# exhaustive oracles


def fits_open_window(W, P) -> bool:
    """Some translate of the open window holds every point of P.

    The feasible translations form a convex polygon; the mean of its float
    vertices, certified exactly, is a witness whenever the interior is not
    tiny.  Anything doubtful is settled by full cell enumeration.
    """
    if not P:
        return True
    A, b = W.float_constraints()
    Pf = np.array([[c.approx_real() for c in p] for p in P], dtype=float)
    C = (Pf @ A.T - b[None, :]).ravel()  # need a_i . t > C
    N = np.tile(A, (len(P), 1))
    i1, i2 = np.triu_indices(len(C), 1)
    det = N[i1, 0] * N[i2, 1] - N[i1, 1] * N[i2, 0]
    ok = np.abs(det) > 1e-12
    i1, i2, det = i1[ok], i2[ok], det[ok]
    x = (C[i1] * N[i2, 1] - C[i2] * N[i1, 1]) / det
    y = (N[i1, 0] * C[i2] - N[i2, 0] * C[i1]) / det
    V = np.column_stack([x, y])
    feas = np.all(V @ N.T >= C[None, :] - 1e-6, axis=1)
    if not feas.any():
        return False
    m = V[feas].mean(axis=0)
    t = tuple(CycNum.rational(W.n, Fraction(float(c)).limit_denominator(1 << 30)) for c in m)
    if subset_at(W, P, t) == tuple(range(len(P))):
        return True
    return frozenset(range(len(P))) in separate(W, P).subsets()


def is_window_set(spec: ModelSetSpec, S: Sequence[CycNum]) -> bool:
    """S lies in one O_n translate and some translate of the open window holds its star image."""
    S = sorted(S)
    if not S:
        return True
    base = S[0]
    if not all(is_in_On(z - base) for z in S):
        return False
    if spec.dim == 0:
        return True
    P = [star_coordinates(spec.star, z - base) for z in S]
    return fits_open_window(spec.window, P)


def brute_force_solutions(inst: XRayInstance) -> list[tuple[CycNum, ...]]:
    """All subsets of the grid with the given X-rays that are window sets."""
    if inst.total is None:
        return []
    N = inst.total
    grid = [g.position for g in build_grid(inst)]
    keys = [[_key(d, z) for d in inst.directions] for z in grid]
    targets = [r.counts for r in inst.data]
    out = []
    for combo in itertools.combinations(range(len(grid)), N):
        ok = True
        for i, t in enumerate(targets):
            got: dict = {}
            for c in combo:
                got[keys[c][i]] = got.get(keys[c][i], 0) + 1
            if got != t:
                ok = False
                break
        if ok:
            S = tuple(sorted(grid[c] for c in combo))
            if is_window_set(inst.spec, S):
                out.append(S)
    return out


def brute_force_classes(points: Sequence[CycNum]) -> set[frozenset[CycNum]]:
    """Partition by the all-pairs relation x - y in O_n."""
    pts = list(points)
    out = set()
    for p in pts:
        out.add(frozenset(q for q in pts if is_in_On(q - p)))
    return out


def try_instance(spec, F, dirs):
    try:
        return make_instance(spec, F, dirs)
    except InstanceError:
        return None
