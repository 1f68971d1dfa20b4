"""Grids of X-ray supports and their decomposition into classes modulo O_n."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cyclotomic import (
    CycNum,
    conjugate,
    inverse,
    is_in_On,
    phi,
    real_generator,
    split_real_imag_basis,
)
from .xray import Direction, InstanceError, XRayInstance, _key

__all__ = [
    "GridPoint",
    "GridClassification",
    "intersect_lines",
    "build_grid",
    "decompose",
    "module_basis",
    "module_index",
    "module_coordinates",
]


@dataclass(frozen=True)
class GridPoint:
    position: CycNum
    incident_lines: tuple[CycNum, ...]  # one line key per direction

    def __lt__(self, other: GridPoint) -> bool:
        return self.position < other.position


@dataclass
class GridClassification:
    classes: list[list[GridPoint]]
    iterations: int = 0
    index_bound: int | None = None

    @property
    def representatives(self) -> list[GridPoint]:
        return [c[0] for c in self.classes]

    @property
    def count(self) -> int:
        return len(self.classes)

    def point_sets(self) -> list[list[CycNum]]:
        return [[g.position for g in c] for c in self.classes]

    def to_json(self) -> dict:
        return {
            "kind": "grid_classification",
            "n": self.classes[0][0].position.n if self.classes else None,
            "classes": [[p.to_list() for p in c] for c in self.point_sets()],
            "index_bound": self.index_bound,
        }


@lru_cache(maxsize=4096)
def _pair_inverse(o1: CycNum, o2: CycNum) -> CycNum:
    det = o2 * conjugate(o1) - o1 * conjugate(o2)
    if det.is_zero():
        raise InstanceError("lines are parallel")
    return inverse(det)


def intersect_lines(b1: CycNum, o1: CycNum, b2: CycNum, o2: CycNum) -> CycNum:
    """The point b1 + x*o1 = b2 + y*o2 with real x, y (Cramer over K_n)."""
    d = b2 - b1
    x = (o2 * conjugate(d) - conjugate(o2) * d) * _pair_inverse(o1, o2)
    return b1 + x * o1


def build_grid(inst: XRayInstance) -> list[GridPoint]:
    """Intersection of the support-line unions of all directions."""
    d1, d2 = inst.directions[0], inst.directions[1]
    rows = inst.data[0].lines()
    cols = inst.data[1].lines()
    seen: dict[CycNum, GridPoint] = {}
    for k1, b1, _ in rows:
        for k2, b2, _ in cols:
            g = intersect_lines(b1, d1.o, b2, d2.o)
            if g in seen:
                continue
            keys = [k1, k2]
            ok = True
            for d, ray in zip(inst.directions[2:], inst.data[2:]):
                k = _key(d, g)
                if k not in ray.counts:
                    ok = False
                    break
                keys.append(k)
            if ok:
                seen[g] = GridPoint(g, tuple(keys))
    return sorted(seen.values())


def decompose(grid: Sequence[GridPoint], index_bound: int | None = None) -> GridClassification:
    """Partition by repeatedly taking the least unclassified point as representative."""
    remaining = sorted({g.position: g for g in grid}.values())
    classes: list[list[GridPoint]] = []
    iterations = 0
    while remaining:
        iterations += 1
        rep = remaining[0]
        same, rest = [], []
        for g in remaining:
            (same if is_in_On(g.position - rep.position) else rest).append(g)
        classes.append(same)
        remaining = rest
    return GridClassification(classes, iterations, index_bound)


# ---------------------------------------------------------------------------


def _det(M: list[list[Fraction]]) -> Fraction:
    A = [row[:] for row in M]
    size = len(A)
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, size):
            f = A[r][c] * inv
            if f:
                for k in range(c, size):
                    A[r][k] -= f * A[c][k]
    return det


def _solve(M: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    size = len(M)
    A = [row[:] + [v[i]] for i, row in enumerate(M)]
    for c in range(size):
        piv = next(r for r in range(c, size) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(size):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [A[r][size] for r in range(size)]


def _as_cyc(o: CycNum | Direction) -> CycNum:
    return o.o if isinstance(o, Direction) else o


def module_basis(o1: CycNum | Direction, o2: CycNum | Direction) -> list[CycNum]:
    """Z-basis {lambda^k o1/D, lambda^k o2/D} of M; lambda = zeta + zeta^-1, D = alpha*delta - beta*gamma."""
    o1, o2 = _as_cyc(o1), _as_cyc(o2)
    n = o1.n
    if n < 3:
        raise ValueError("module index needs n >= 3")
    a, b = split_real_imag_basis(o1)
    c, d = split_real_imag_basis(o2)
    D = a * d - b * c
    if D.is_zero():
        raise InstanceError("directions are parallel")
    Dinv = inverse(D)
    lam = real_generator(n)
    out: list[CycNum] = []
    power = CycNum.one(n)
    for _ in range(phi(n) // 2):
        out.append(power * o1 * Dinv)
        out.append(power * o2 * Dinv)
        power = power * lam
    return out


def _transition(o1, o2) -> list[list[Fraction]]:
    basis = module_basis(o1, o2)
    cols = [b.coeffs for b in basis]
    m = len(cols)
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def module_index(o1: CycNum | Direction, o2: CycNum | Direction) -> int:
    """[M : O_n] = 1/|det T|, T the coordinates of the M-basis over 1, zeta, ..."""
    det = abs(_det(_transition(o1, o2)))
    idx = 1 / det
    if idx.denominator != 1:
        raise ArithmeticError(f"non-integral module index {idx}")
    return int(idx)


def module_coordinates(g: CycNum, o1: CycNum | Direction, o2: CycNum | Direction) -> list[Fraction]:
    """Coordinates of g over the Z-basis of M; integral iff g lies in M."""
    return _solve(_transition(o1, o2), list(g.coeffs))
