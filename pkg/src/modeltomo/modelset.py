"""Polygonal windows, cyclotomic model-set specifications and patch generation.

Internal space for the planar aperiodic cases is K_n itself, viewed through
the star map.  A star image y is recorded by its real coordinates (alpha, beta)
with y = alpha + beta * zeta_n, both in the real subfield, so every window
constraint a1*alpha + a2*beta < b is decided by exact arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import (
    CycNum,
    StarMap,
    conjugate,
    is_in_On,
    phi,
    sign_exact,
    star_coordinates,
    zeta,
)

__all__ = [
    "Halfspace",
    "Window",
    "ModelSetSpec",
    "Patch",
    "PRESETS",
    "complex_halfspace",
    "polygon_window",
    "regular_polygon_window",
    "rotate_patch",
    "preset_window",
    "preset_spec",
    "window_contains",
    "generate_patch",
    "membership",
    "genericity_check",
    "internal_point",
    "internal_to_complex",
]

InternalPoint = tuple[CycNum, ...]


def _re(w: CycNum) -> CycNum:
    return (w + conjugate(w)) * Fraction(1, 2)


@dataclass(frozen=True)
class Halfspace:
    """Open halfspace {x | normal . x < offset}."""

    normal: tuple[CycNum, ...]
    offset: CycNum

    def value(self, p: Sequence[CycNum]) -> CycNum:
        """normal . p - offset; negative strictly inside."""
        acc = -self.offset
        for a, x in zip(self.normal, p):
            acc = acc + a * x
        return acc

    def shifted(self, tau: Sequence[CycNum]) -> Halfspace:
        """The same constraint for the translate tau + W."""
        return Halfspace(self.normal, self.value(tau) + 2 * self.offset)


@dataclass(frozen=True)
class Window:
    """Bounded open convex polygon {x | Ax < b} in internal coordinates.

    ``dim == 0`` is the trivial window of the crystallographic cases, which
    contains the single internal point.
    """

    n: int
    dim: int
    halfspaces: tuple[Halfspace, ...] = ()
    name: str | None = None
    # float complex vertices, display and bounding only
    outline: tuple[complex, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.dim not in (0, 2):
            raise ValueError("exact window geometry is limited to internal dimension 0 or 2")
        if self.dim == 0 and self.halfspaces:
            raise ValueError("a zero-dimensional window carries no halfspaces")
        if self.dim == 2:
            if len(self.halfspaces) < 3:
                raise ValueError("a planar window needs at least three halfspaces")
            for h in self.halfspaces:
                if len(h.normal) != 2 or all(a.is_zero() for a in h.normal):
                    raise ValueError("window normals must be nonzero 2-vectors")
                for c in (*h.normal, h.offset):
                    if c.n != self.n or not c.is_real():
                        raise ValueError("window data must lie in the real subfield of K_n")
            if not self.outline:
                object.__setattr__(self, "outline", tuple(_outline(self)))
            if not self.contains(self._centroid_guess(), strict=True):
                raise ValueError("window has empty interior")

    @property
    def l(self) -> int:
        return len(self.halfspaces)

    def contains(self, p: Sequence[CycNum], strict: bool = True) -> bool:
        return window_contains(self, p, strict)

    def translate(self, tau: Sequence[CycNum]) -> Window:
        if self.dim == 0 or not any(not t.is_zero() for t in tau):
            return self
        hs = tuple(h.shifted(tau) for h in self.halfspaces)
        shift = internal_to_complex(self.n, tau)
        return Window(self.n, self.dim, hs, self.name, tuple(v + shift for v in self.outline))

    def circumradius(self) -> float:
        return max((abs(v) for v in self.outline), default=0.0)

    def float_constraints(self) -> tuple[np.ndarray, np.ndarray]:
        """(A, b) as floats in (alpha, beta) coordinates."""
        A = np.array([[a.approx_real() for a in h.normal] for h in self.halfspaces], dtype=float)
        b = np.array([h.offset.approx_real() for h in self.halfspaces], dtype=float)
        return A.reshape(-1, 2), b

    def _centroid_guess(self) -> InternalPoint:
        # exact rational approximation of the float outline centroid
        c = sum(self.outline) / len(self.outline)
        return internal_point_from_complex(self.n, c)

    def to_json(self) -> dict:
        if self.name in PRESETS and self == preset_window(self.name)[2]:
            return {"preset": self.name}
        return {
            "dim": self.dim,
            "halfspaces": [
                {"normal": [a.to_list() for a in h.normal], "offset": h.offset.to_list()}
                for h in self.halfspaces
            ],
        }

    @classmethod
    def from_json(cls, n: int, data: dict) -> Window:
        if "preset" in data:
            pn, _, w = preset_window(data["preset"])
            if pn != n:
                raise ValueError(f"preset {data['preset']!r} lives in n={pn}, not n={n}")
            return w
        hs = tuple(
            Halfspace(
                tuple(CycNum.from_list(n, a) for a in h["normal"]),
                CycNum.from_list(n, h["offset"]),
            )
            for h in data.get("halfspaces", [])
        )
        return cls(n, int(data.get("dim", 2 if hs else 0)), hs)


def internal_to_complex(n: int, p: Sequence[CycNum]) -> complex:
    """Numeric value of alpha + beta*zeta; 0 for the trivial internal space."""
    if not p:
        return 0j
    z = cmath.exp(2j * math.pi / n)
    return p[0].approx_real() + p[1].approx_real() * z


def _complex_to_ab(n: int, y: complex) -> tuple[float, float]:
    s, c = math.sin(2 * math.pi / n), math.cos(2 * math.pi / n)
    beta = y.imag / s
    return y.real - beta * c, beta


def internal_point_from_complex(n: int, y: complex, max_den: int = 1 << 20) -> InternalPoint:
    """Rational internal point close to the complex number y."""
    a, b = _complex_to_ab(n, y)
    return (
        CycNum.rational(n, Fraction(a).limit_denominator(max_den)),
        CycNum.rational(n, Fraction(b).limit_denominator(max_den)),
    )


def internal_point(star_map: StarMap, z: CycNum) -> InternalPoint:
    return star_coordinates(star_map, z)


def _outline(w: Window) -> list[complex]:
    # vertices of the polygon Ax <= b, ordered by normal angle
    A, b = w.float_constraints()
    zc = cmath.exp(2j * math.pi / w.n)
    # normal in (alpha, beta) coords to a complex direction: solve for
    # u with Re(conj(u) * (alpha + beta zc)) = a1 alpha + a2 beta
    normals = []
    for a1, a2 in A:
        ur = a1
        ui = (a2 - a1 * zc.real) / zc.imag
        normals.append(complex(ur, ui))
    order = sorted(range(len(normals)), key=lambda i: cmath.phase(normals[i]))
    verts: list[complex] = []
    for k in range(len(order)):
        i, j = order[k], order[(k + 1) % len(order)]
        M = np.array([A[i], A[j]])
        if abs(np.linalg.det(M)) < 1e-14:
            continue
        ab = np.linalg.solve(M, np.array([b[i], b[j]]))
        v = ab[0] + ab[1] * zc
        if np.all(A @ ab <= b + 1e-9):
            verts.append(complex(v))
    if len(verts) < 3:
        raise ValueError("window is unbounded or degenerate")
    return verts


def complex_halfspace(u: CycNum, r: CycNum | int | Fraction) -> Halfspace:
    """{y | Re(conj(u) * y) < r} in (alpha, beta) coordinates.

    With y = alpha + beta*zeta this is a1*alpha + a2*beta < r where
    a1 = Re(conj u) and a2 = Re(conj(u) * zeta).
    """
    n = u.n
    if not isinstance(r, CycNum):
        r = CycNum.rational(n, r)
    ub = conjugate(u)
    return Halfspace((_re(ub), _re(ub * zeta(n))), r)


def polygon_window(
    n: int, constraints: Sequence[tuple[CycNum, CycNum | int | Fraction]], name: str | None = None
) -> Window:
    """Window cut out by complex normals u with bounds Re(conj(u) * y) < r."""
    return Window(n, 2, tuple(complex_halfspace(u, r) for u, r in constraints), name)


def regular_polygon_window(
    n: int, normals: Sequence[CycNum], inradius: CycNum, name: str | None = None
) -> Window:
    """Polygon with unit complex normals u (elements of K_n) at distance inradius."""
    return polygon_window(n, [(u, inradius) for u in normals], name)


def _sqrt2() -> CycNum:
    return zeta(8) + zeta(8, -1)


def _golden() -> CycNum:
    return 1 + zeta(5) + zeta(5, -1)


def _sqrt3() -> CycNum:
    return zeta(12) + zeta(12, -1)


def _ammann_beenker() -> Window:
    normals = [zeta(8, k) for k in range(8)]
    r = (1 + _sqrt2()) * Fraction(1, 2)  # unit edge: inradius cot(pi/8)/2
    return regular_polygon_window(8, normals, r, "ammann_beenker")


def _tuebingen() -> Window:
    # tenth roots of unity as normals: zeta_10 = -zeta_5^3
    z10 = -zeta(5, 3)
    normals = [z10**k for k in range(10)]
    tau = _golden()
    r = tau * tau * Fraction(1, 2)  # edge tau/sqrt(tau+2): inradius tau^2/2
    return regular_polygon_window(5, normals, r, "tuebingen")


def _shield() -> Window:
    normals = [zeta(12, k) for k in range(12)]
    r = (2 + _sqrt3()) * Fraction(1, 2)  # unit edge: inradius cot(pi/12)/2
    return regular_polygon_window(12, normals, r, "shield")


PRESETS: dict[str, tuple[int, tuple[int, ...]]] = {
    "square": (4, ()),
    "triangle": (3, ()),
    "ammann_beenker": (8, (3,)),
    "tuebingen": (5, (2,)),
    "shield": (12, (5,)),
}


@lru_cache(maxsize=None)
def preset_window(name: str) -> tuple[int, StarMap, Window]:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    n, exps = PRESETS[name]
    s = StarMap(n, exps)
    if name == "ammann_beenker":
        w = _ammann_beenker()
    elif name == "tuebingen":
        w = _tuebingen()
    elif name == "shield":
        w = _shield()
    else:
        w = Window(n, 0, (), name)
    return n, s, w


def window_contains(w: Window, p: Sequence[CycNum], strict: bool = True) -> bool:
    if len(p) != w.dim:
        raise ValueError(f"point of dimension {len(p)} tested against a {w.dim}-dimensional window")
    for h in w.halfspaces:
        s = sign_exact(h.value(p))
        if s > 0 or (strict and s == 0):
            return False
    return True


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSetSpec:
    """Lambda_n(t, tau + W°) with t = 0 unless stated otherwise."""

    n: int
    star: StarMap
    window: Window
    tau: tuple[CycNum, ...] = ()
    t: CycNum | None = None
    preset: str | None = None

    def __post_init__(self) -> None:
        if self.star.n != self.n or self.window.n != self.n:
            raise ValueError("star map, window and spec disagree on n")
        if self.star.dim != self.window.dim:
            raise ValueError(
                f"star map has internal dimension {self.star.dim}, window has {self.window.dim}"
            )
        tau = tuple(self.tau) if self.tau else tuple(CycNum.zero(self.n) for _ in range(self.window.dim))
        if len(tau) != self.window.dim:
            raise ValueError("tau has the wrong dimension")
        for c in tau:
            if c.n != self.n or not c.is_real():
                raise ValueError("tau coordinates must be real elements of K_n")
        object.__setattr__(self, "tau", tau)
        if self.t is None:
            object.__setattr__(self, "t", CycNum.zero(self.n))

    @property
    def dim(self) -> int:
        return self.window.dim

    def with_tau(self, tau: Sequence[CycNum]) -> ModelSetSpec:
        return ModelSetSpec(self.n, self.star, self.window, tuple(tau), self.t, self.preset)

    def translated_window(self) -> Window:
        return self.window.translate(self.tau)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "star_exponents": list(self.star.exponents),
            "window": {"preset": self.preset} if self.preset else self.window.to_json(),
            "tau": [c.to_list() for c in self.tau],
        }
        if not self.t.is_zero():
            out["t"] = self.t.to_list()
        return out

    @classmethod
    def from_json(cls, data: dict) -> ModelSetSpec:
        if "preset" in data and "n" not in data:
            return preset_spec(data["preset"], data.get("tau"))
        n = int(data["n"])
        star = StarMap(n, tuple(data.get("star_exponents", ())))
        wdata = data.get("window", {})
        window = Window.from_json(n, wdata)
        tau = tuple(CycNum.from_list(n, c) for c in data.get("tau", []))
        t = CycNum.from_list(n, data["t"]) if "t" in data else None
        return cls(n, star, window, tau, t, wdata.get("preset"))


def preset_spec(name: str, tau: Sequence | None = None) -> ModelSetSpec:
    n, s, w = preset_window(name)
    tv = tuple(c if isinstance(c, CycNum) else CycNum.from_list(n, c) for c in (tau or ()))
    return ModelSetSpec(n, s, w, tv, None, name)


@dataclass(frozen=True)
class Patch:
    points: tuple[CycNum, ...]
    radius: Fraction
    n: int

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self, spec: ModelSetSpec | None = None) -> dict:
        out = {
            "kind": "patch",
            "n": self.n,
            "radius": str(self.radius),
            "points": [p.to_list() for p in self.points],
        }
        if spec is not None:
            out["spec"] = spec.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> Patch:
        n = int(data["n"])
        pts = tuple(sorted(CycNum.from_list(n, p) for p in data["points"]))
        return cls(pts, Fraction(data.get("radius", "0")), n)


def membership(spec: ModelSetSpec, z: CycNum) -> bool:
    x = z - spec.t
    if not is_in_On(x):
        return False
    if spec.dim == 0:
        return True
    y = star_coordinates(spec.star, x)
    p = tuple(a - b for a, b in zip(y, spec.tau))
    return window_contains(spec.window, p, strict=True)


# ---------------------------------------------------------------------------
# patch enumeration


@lru_cache(maxsize=None)
def _embedding(n: int, exps: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Physical and internal complex images of the power basis."""
    m = phi(n)
    k = np.arange(m)
    phys = np.exp(2j * np.pi * k / n)
    internal = np.array([np.exp(2j * np.pi * ((a * k) % n) / n) for a in exps])
    return phys, internal


def _as_fraction(r) -> Fraction:
    if isinstance(r, Fraction):
        return r
    if isinstance(r, float):
        return Fraction(repr(r))
    return Fraction(r)


def _disk_sign(z: CycNum, r2: Fraction) -> int:
    return sign_exact(z * conjugate(z) - r2)


def _candidate_box(spec: ModelSetSpec, radius: float) -> np.ndarray:
    n = spec.n
    m = phi(n)
    phys, internal = _embedding(n, spec.star.exponents)
    rows = [phys.real, phys.imag]
    for im in internal:
        rows.extend([im.real, im.imag])
    B = np.array(rows)  # real Minkowski matrix, columns = basis elements
    Binv = np.linalg.inv(B)
    w = spec.translated_window()
    rw = w.circumradius() if spec.dim else 0.0
    scales = np.array([radius, radius] + [rw] * (len(rows) - 2))
    bound = np.abs(Binv) @ scales + 1e-6
    ranges = [np.arange(-math.floor(bk), math.floor(bk) + 1) for bk in bound]
    grids = np.meshgrid(*ranges, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64).reshape(-1, m)


def generate_patch(spec: ModelSetSpec, radius) -> Patch:
    """All z in O_n with |z| <= radius and z* in tau + W°.

    The integer coefficient box is bounded through the inverse Minkowski
    matrix; each box point is filtered in floating point with a rigorous
    margin and every undecided case is settled exactly.
    """
    R = _as_fraction(radius)
    if R <= 0:
        raise ValueError("radius must be positive")
    if spec.t is not None and not spec.t.is_zero():
        raise ValueError("generate_patch expects t = 0; offset the points afterwards")
    if spec.dim > 2:
        raise ValueError("patch generation supports internal dimension 0 or 2")
    n = spec.n
    rf = float(R)
    coeffs = _candidate_box(spec, rf)
    phys, internal = _embedding(n, spec.star.exponents)
    z = coeffs @ phys
    err = 1e-12 * (1.0 + np.abs(coeffs).sum(axis=1))
    absz = np.abs(z)
    disk_in = absz <= rf - err * (1 + rf)
    disk_maybe = ~disk_in & (absz <= rf + err * (1 + rf))
    keep = disk_in | disk_maybe
    inside = keep.copy()
    win_maybe = np.zeros_like(keep)
    w = spec.translated_window()
    if spec.dim == 2:
        y = coeffs @ internal[0]
        A, b = w.float_constraints()
        zc = np.exp(2j * np.pi / n)
        beta = y.imag / zc.imag
        alpha = y.real - beta * zc.real
        vals = np.outer(alpha, A[:, 0]) + np.outer(beta, A[:, 1]) - b[None, :]
        scale = (1.0 + np.abs(A).sum(axis=1).max() + np.abs(b).max()) * (1 + rf)
        tol = (err * scale)[:, None] * 1e3
        sure_in = np.all(vals < -tol, axis=1)
        sure_out = np.any(vals > tol, axis=1)
        inside = keep & sure_in
        win_maybe = keep & ~sure_in & ~sure_out
    r2 = R * R
    pts: list[CycNum] = []
    for idx in np.nonzero(inside | win_maybe)[0]:
        c = CycNum(n, [int(v) for v in coeffs[idx]])
        if disk_maybe[idx] and _disk_sign(c, r2) > 0:
            continue
        if win_maybe[idx] and not membership(spec, c):
            continue
        pts.append(c)
    pts.sort()
    return Patch(tuple(pts), R, n)


def _all_in_disk(spec: ModelSetSpec, radius) -> list[CycNum]:
    """Every O_n element of the disk whose star image lies in the closed window box."""
    R = _as_fraction(radius)
    coeffs = _candidate_box(spec, float(R))
    r2 = R * R
    out = []
    for row in coeffs:
        c = CycNum(spec.n, [int(v) for v in row])
        if _disk_sign(c, r2) <= 0:
            out.append(c)
    return out


def genericity_check(spec: ModelSetSpec, patch_radius) -> bool:
    """True iff no O_n point of the disk has its star image on the window boundary."""
    if spec.dim == 0:
        return True
    w = spec.translated_window()
    R = _as_fraction(patch_radius)
    coeffs = _candidate_box(spec, float(R))
    n = spec.n
    phys, internal = _embedding(n, spec.star.exponents)
    y = coeffs @ internal[0]
    A, b = w.float_constraints()
    zc = np.exp(2j * np.pi / n)
    beta = y.imag / zc.imag
    alpha = y.real - beta * zc.real
    vals = np.outer(alpha, A[:, 0]) + np.outer(beta, A[:, 1]) - b[None, :]
    near = np.any(np.abs(vals) < 1e-7, axis=1) & np.all(vals < 1e-7, axis=1)
    near &= np.abs(coeffs @ phys) <= float(R) + 1e-7
    r2 = R * R
    for idx in np.nonzero(near)[0]:
        c = CycNum(n, [int(v) for v in coeffs[idx]])
        if _disk_sign(c, r2) > 0:
            continue
        p = tuple(a - t for a, t in zip(star_coordinates(spec.star, c), spec.tau))
        signs = [sign_exact(h.value(p)) for h in spec.window.halfspaces]
        if max(signs) == 0:
            return False
    return True


def rotate_patch(points: Iterable[CycNum], k: int = 1) -> list[CycNum]:
    """Apply z -> zeta_N^k z with N = lcm(n, 2)."""
    pts = list(points)
    if not pts:
        return []
    n = pts[0].n
    rot = zeta(n) if n % 2 == 0 else -zeta(n)  # -zeta_n generates the 2n-th roots for odd n
    rk = rot**k
    return sorted(p * rk for p in pts)
