"""Subsets of a finite internal point set cut out by translates of an open window.

For W° = {x | Ax < b} and points p_1..p_q, a translate t + W° contains p_j
iff t lies in p_j - W° = {x | Ax > Ap_j - b}.  The sign vector of t against
the l*q lines a_i . x = (Ap_j - b)_i therefore determines the subset, and one
representative per cell of that arrangement yields the whole family.

All predicates are exact: floating point is used as a filter with a margin,
and anything inside the margin is decided with cyclotomic arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import CycNum, inverse, sign_exact, zeta
from .modelset import Window

__all__ = [
    "ArrangementLine",
    "Cell",
    "SeparableFamily",
    "build_arrangement",
    "cell_representatives",
    "arrangement_cells",
    "separate",
    "maximal_separable_sets",
    "subset_at",
    "sample_subsets",
    "size_constant",
    "translation_box",
]

Point = tuple[CycNum, CycNum]

_TOL = 1e-9  # float filter margin, relative to the data scale


@dataclass(frozen=True)
class ArrangementLine:
    """The line normal . x = offset, tagged (window row i, point j)."""

    normal: tuple[CycNum, CycNum]
    offset: CycNum
    tags: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Cell:
    sign_vector: tuple[int, ...]  # aligned with the input line list
    representative: Point
    dimension: int
    tags: tuple[tuple[int, int], ...] = field(default=(), compare=False, repr=False)

    def sign(self, i: int, j: int) -> int:
        return self.sign_vector[self.tags.index((i, j))]


@dataclass
class SeparableFamily:
    """Members as (sorted index tuple, exact witness translation)."""

    members: list[tuple[tuple[int, ...], Point]]
    q: int = 0
    maximal_only: bool = False

    def __len__(self) -> int:
        return len(self.members)

    def subsets(self) -> set[frozenset[int]]:
        return {frozenset(s) for s, _ in self.members}

    def to_json(self) -> list[dict]:
        return [
            {"indices": list(s), "witness": [c.to_list() for c in t]} for s, t in self.members
        ]


def size_constant(l: int) -> int:
    """C with card(Sep) <= C q^2: the cell count of l*q lines is at most 2(lq)^2 + 1."""
    return 2 * l * l + 1


def build_arrangement(W: Window, P: Sequence[Point]) -> list[ArrangementLine]:
    if W.dim != 2:
        raise ValueError("exact separation requires a two-dimensional window")
    lines = []
    for j, p in enumerate(P):
        for i, h in enumerate(W.halfspaces):
            lines.append(ArrangementLine(h.normal, h.value(p), (i, j)))
    return lines


# ---------------------------------------------------------------------------
# shared exact helpers


def _dot(a: Sequence[CycNum], x: Sequence[CycNum]) -> CycNum:
    return a[0] * x[0] + a[1] * x[1]


def _cross(a: Sequence[CycNum], b: Sequence[CycNum]) -> CycNum:
    return a[0] * b[1] - a[1] * b[0]


class _Solver:
    """Cached 2x2 inverses for pairs of normals."""

    def __init__(self) -> None:
        self._inv: dict[tuple, tuple[CycNum, ...] | None] = {}

    def inv(self, a, b) -> tuple[CycNum, ...] | None:
        key = (a, b)
        got = self._inv.get(key, False)
        if got is False:
            det = _cross(a, b)
            if det.is_zero():
                got = None
            else:
                di = inverse(det)
                got = (b[1] * di, -a[1] * di, -b[0] * di, a[0] * di)
            self._inv[key] = got
        return got

    def meet(self, a, c1, b, c2) -> Point | None:
        m = self.inv(a, b)
        if m is None:
            return None
        return (m[0] * c1 + m[1] * c2, m[2] * c1 + m[3] * c2)


def _f(x: CycNum) -> float:
    return x.approx_real()


def _fpt(p: Point) -> tuple[float, float]:
    return (_f(p[0]), _f(p[1]))


def _exact_sign_of_abs_lower(x: CycNum) -> float:
    """A certified positive lower bound for |x|, x real and nonzero."""
    from .cyclotomic import embed

    prec = 64
    while True:
        box = embed(x, prec, real_only=True).re
        lo = min(abs(float(box.a)), abs(float(box.b)))
        if (box.a > 0 or box.b < 0) and lo > 0:
            return lo
        prec *= 2


def subset_at(W: Window, P: Sequence[Point], t: Sequence[CycNum]) -> tuple[int, ...]:
    """Indices j with p_j in t + W°, decided exactly."""
    if not P:
        return ()
    A, b = W.float_constraints()
    tf = np.array(_fpt(tuple(t)))
    Pf = np.array([_fpt(p) for p in P], dtype=float).reshape(-1, 2)
    vals = (Pf - tf) @ A.T - b[None, :]
    scale = 1.0 + (np.abs(Pf).max() + np.abs(tf).max()) * np.abs(A).sum(axis=1) + np.abs(b)
    tol = _TOL * scale[None, :]
    sure_out = np.any(vals > tol, axis=1)
    unsure = np.abs(vals) <= tol
    out = []
    for j in range(len(P)):
        if sure_out[j]:
            continue
        inside = True
        for i in np.nonzero(unsure[j])[0]:
            h = W.halfspaces[int(i)]
            if sign_exact(h.value((P[j][0] - t[0], P[j][1] - t[1]))) >= 0:
                inside = False
                break
        if inside:
            out.append(j)
    return tuple(out)


# ---------------------------------------------------------------------------
# full cell enumeration


class _Arrangement:
    """Deduplicated lines, each stored with a canonical normal."""

    def __init__(self, lines: Sequence[ArrangementLine]):
        self.lines = list(lines)
        self.solver = _Solver()
        normals: list[tuple[CycNum, CycNum]] = []
        nindex: dict[tuple, int] = {}
        for ln in self.lines:
            if ln.normal[0].is_zero() and ln.normal[1].is_zero():
                raise ValueError("arrangement line with zero normal")
            if ln.normal not in nindex:
                nindex[ln.normal] = len(normals)
                normals.append(ln.normal)
        # canonical representative per parallel class, and the factor f with a = f * rep
        rep_of: list[int] = []
        factor: list[CycNum] = []
        for k, a in enumerate(normals):
            for r in sorted(set(rep_of)):
                ra = normals[r]
                if _cross(a, ra).is_zero():
                    j = 0 if not ra[0].is_zero() else 1
                    rep_of.append(r)
                    factor.append(a[j] * inverse(ra[j]))
                    break
            else:
                rep_of.append(k)
                factor.append(CycNum.one(a[0].n))
        finv = [inverse(f) for f in factor]
        fsign = [sign_exact(f) for f in factor]
        self.normals = normals
        self.u_normal: list[tuple[CycNum, CycNum]] = []
        self.u_offset: list[CycNum] = []
        self.u_rep: list[int] = []
        self.line_u: list[int] = []
        self.line_orient: list[int] = []
        ukey: dict[tuple[int, CycNum], int] = {}
        for ln in self.lines:
            k = nindex[ln.normal]
            r = rep_of[k]
            off = ln.offset * finv[k]
            key = (r, off)
            u = ukey.get(key)
            if u is None:
                u = len(self.u_offset)
                ukey[key] = u
                self.u_normal.append(normals[r])
                self.u_offset.append(off)
                self.u_rep.append(r)
            self.line_u.append(u)
            self.line_orient.append(fsign[k])
        self.U = len(self.u_offset)
        self.Af = np.array([_fpt(a) for a in self.u_normal], dtype=float).reshape(-1, 2)
        self.cf = np.array([_f(c) for c in self.u_offset], dtype=float)

    def vertices(self) -> tuple[list[Point], list[set[int]]]:
        verts: dict[Point, set[int]] = {}
        by_rep: dict[int, list[int]] = {}
        for u in range(self.U):
            by_rep.setdefault(self.u_rep[u], []).append(u)
        groups = sorted(by_rep)
        for gi, r1 in enumerate(groups):
            for r2 in groups[gi + 1 :]:
                a, b = self.normals[r1], self.normals[r2]
                for u1 in by_rep[r1]:
                    for u2 in by_rep[r2]:
                        v = self.solver.meet(a, self.u_offset[u1], b, self.u_offset[u2])
                        s = verts.get(v)
                        if s is None:
                            verts[v] = {u1, u2}
                        else:
                            s.update((u1, u2))
        pts = sorted(verts, key=lambda p: (p[0].sort_key(), p[1].sort_key()))
        return pts, [verts[p] for p in pts]

    def _sort_along(self, u: int, pts: list[Point]) -> list[Point]:
        a = self.u_normal[u]
        d = (-a[1], a[0])
        df = _fpt(d)
        keyed = [(df[0] * _f(p[0]) + df[1] * _f(p[1]), p) for p in pts]
        keyed.sort(key=lambda kv: kv[0])
        scale = 1.0 + max((abs(k) for k, _ in keyed), default=0.0)

        def cmp(x, y):
            if abs(x[0] - y[0]) > _TOL * scale:
                return -1 if x[0] < y[0] else 1
            return sign_exact(_dot(d, x[1]) - _dot(d, y[1]))

        # float order is certain except within clusters of near-equal keys
        if any(abs(keyed[i + 1][0] - keyed[i][0]) <= _TOL * scale for i in range(len(keyed) - 1)):
            keyed.sort(key=cmp_to_key(cmp))
        return [p for _, p in keyed]

    def _point_on(self, u: int) -> Point:
        a, c = self.u_normal[u], self.u_offset[u]
        zero = CycNum.zero(c.n)
        if not a[0].is_zero():
            return (c * inverse(a[0]), zero)
        return (zero, c * inverse(a[1]))

    def _step(self, u: int, m: Point) -> Fraction:
        """Power of two below the distance (in units of the normal) from m to other lines."""
        a = self.u_normal[u]
        af = np.array(_fpt(a))
        mf = np.array(_fpt(m))
        denom = self.Af @ af
        num = self.cf - self.Af @ mf
        mask = np.abs(denom) > 1e-12
        mask[u] = False
        if not mask.any():
            return Fraction(1)
        s = np.abs(num[mask] / denom[mask])
        smin = float(s.min())
        if smin < 1e-6:
            exact_min = math.inf
            for w in np.nonzero(mask)[0]:
                if abs(num[w] / denom[w]) < 1e-5:
                    x = self.u_offset[w] - _dot(self.u_normal[w], m)
                    y = _dot(self.u_normal[w], a)
                    if y.is_zero():
                        continue
                    lo = _exact_sign_of_abs_lower(x) / (abs(_f(y)) * (1 + 1e-9))
                    exact_min = min(exact_min, lo)
            smin = min(exact_min, 1e-6)
        k = math.floor(math.log2(smin / 4))
        return Fraction(2) ** k

    def representatives(self) -> list[tuple[Point, int, tuple[int, ...]]]:
        """(point, dimension hint, lines known to contain it)."""
        out: list[tuple[Point, int, tuple[int, ...]]] = []
        if self.U == 0:
            return out
        verts, inc = self.vertices()
        for v, s in zip(verts, inc):
            out.append((v, 0, tuple(sorted(s))))
        on_line: list[list[Point]] = [[] for _ in range(self.U)]
        for v, s in zip(verts, inc):
            for u in s:
                on_line[u].append(v)
        half = Fraction(1, 2)
        for u in range(self.U):
            a = self.u_normal[u]
            d = (-a[1], a[0])
            pts = self._sort_along(u, on_line[u])
            edges: list[Point] = []
            if not pts:
                edges.append(self._point_on(u))
            else:
                edges.append((pts[0][0] - d[0], pts[0][1] - d[1]))
                for p, q in zip(pts, pts[1:]):
                    edges.append(((p[0] + q[0]) * half, (p[1] + q[1]) * half))
                edges.append((pts[-1][0] + d[0], pts[-1][1] + d[1]))
            for m in edges:
                out.append((m, 1, (u,)))
                eps = self._step(u, m)
                for sgn in (1, -1):
                    e = eps * sgn
                    out.append(((m[0] + a[0] * e, m[1] + a[1] * e), 2, ()))
        return out

    def sign_matrix(self, pts: Sequence[Point], zeros: Sequence[tuple[int, ...]]) -> np.ndarray:
        """Exact signs of a_u . x - c_u for each point against every deduplicated line."""
        X = np.array([_fpt(p) for p in pts], dtype=float).reshape(-1, 2)
        vals = X @ self.Af.T - self.cf[None, :]
        scale = 1.0 + np.abs(X).max(axis=1, initial=0.0)[:, None] * np.abs(self.Af).sum(axis=1)[None, :]
        scale = scale + np.abs(self.cf)[None, :]
        tol = _TOL * scale
        S = np.sign(vals).astype(np.int8)
        unsure = np.abs(vals) <= tol
        for r, z in enumerate(zeros):
            if z:
                S[r, list(z)] = 0
                unsure[r, list(z)] = False
        for r, u in zip(*np.nonzero(unsure)):
            S[r, u] = sign_exact(_dot(self.u_normal[u], pts[r]) - self.u_offset[u])
        return S

    def expand(self, S: np.ndarray) -> np.ndarray:
        """Signs against the original (non-deduplicated) line list."""
        orient = np.array(self.line_orient, dtype=np.int8)
        return S[:, self.line_u] * orient[None, :]


def cell_representatives(lines: Sequence[ArrangementLine]) -> list[Cell]:
    """One representative for each nonempty cell, of every dimension."""
    arr = _Arrangement(lines)
    tags = tuple(ln.tags for ln in lines)
    if arr.U == 0:
        n = 8
        zero = CycNum.zero(n)
        return [Cell((), (zero, zero), 2, tags)]
    reps = arr.representatives()
    pts = [p for p, _, _ in reps]
    S = arr.sign_matrix(pts, [z for _, _, z in reps])
    full = arr.expand(S)
    seen: dict[bytes, int] = {}
    cells: list[Cell] = []
    for r in range(len(pts)):
        key = S[r].tobytes()
        if key in seen:
            continue
        seen[key] = len(cells)
        zeros = int((S[r] == 0).sum())
        dim = 2 if zeros == 0 else 1 if zeros == 1 else 0
        cells.append(Cell(tuple(int(x) for x in full[r]), pts[r], dim, tags))
    return cells


def arrangement_cells(lines: Sequence[ArrangementLine]) -> dict[int, int]:
    """Number of cells by dimension."""
    counts = {0: 0, 1: 0, 2: 0}
    for c in cell_representatives(lines):
        counts[c.dimension] += 1
    return counts


def _canonical(members: Iterable[tuple[tuple[int, ...], Point]]) -> list:
    return sorted(members, key=lambda m: (len(m[0]), m[0]))


def separate(W: Window, P: Sequence[Point]) -> SeparableFamily:
    """Sep_{W°}(P) from one representative per arrangement cell."""
    q = len(P)
    zero = CycNum.zero(W.n)
    if q == 0:
        return SeparableFamily([((), (zero, zero))], 0)
    lines = build_arrangement(W, P)
    arr = _Arrangement(lines)
    reps = arr.representatives()
    # prefer full-dimensional witnesses
    reps.sort(key=lambda r: -r[1])
    pts = [p for p, _, _ in reps]
    S = arr.sign_matrix(pts, [z for _, _, z in reps])
    full = arr.expand(S).reshape(len(pts), q, W.l)
    inside = np.all(full > 0, axis=2)
    found: dict[bytes, int] = {}
    for r in range(len(pts)):
        key = inside[r].tobytes()
        if key not in found:
            found[key] = r
    members = []
    for key, r in found.items():
        idx = tuple(int(j) for j in np.nonzero(inside[r])[0])
        members.append((idx, pts[r]))
    return SeparableFamily(_canonical(members), q)


# ---------------------------------------------------------------------------
# maximal sets only


class _WindowTables:
    """Exact per-window data: normals, wedge directions and incidence tensors."""

    def __init__(self, W: Window):
        self.W = W
        l = self.l = W.l
        self.a = [h.normal for h in W.halfspaces]
        self.b = [h.offset for h in W.halfspaces]
        self.A, self.bf = W.float_constraints()
        self.solver = _Solver()
        n = W.n
        one = CycNum.one(n)
        m_phi = len(one.num)
        self.Minv = np.zeros((l, l, 2, 2))
        self.par = np.zeros((l, l), dtype=bool)
        self.dsign = np.zeros((l, l, l), dtype=np.int8)
        self.d: dict[tuple[int, int], Point] = {}
        # a_i . meet(c1, c2) = g1 * c1 + g2 * c2, stored as integer matrices / G_den
        g_all: dict[tuple[int, int, int, int], CycNum] = {}
        for i1 in range(l):
            for i2 in range(l):
                m = self.solver.inv(self.a[i1], self.a[i2])
                if m is None:
                    self.par[i1, i2] = True
                    continue
                self.Minv[i1, i2] = [[_f(m[0]), _f(m[1])], [_f(m[2]), _f(m[3])]]
                d = (m[0] + m[1], m[2] + m[3])
                self.d[(i1, i2)] = d
                for i, ai in enumerate(self.a):
                    self.dsign[i1, i2, i] = sign_exact(_dot(ai, d))
                    g_all[(i1, i2, i, 0)] = ai[0] * m[0] + ai[1] * m[2]
                    g_all[(i1, i2, i, 1)] = ai[0] * m[1] + ai[1] * m[3]
        den = 1
        for g in g_all.values():
            den = den * g.den // math.gcd(den, g.den)
        self.G_den = den
        basis = [zeta(n, k) for k in range(m_phi)]
        self.G = np.zeros((l, l, l, 2, m_phi, m_phi), dtype=object)
        for (i1, i2, i, s), g in g_all.items():
            for k, zk in enumerate(basis):
                col = g * zk
                f = den // col.den
                for r, c in enumerate(col.num):
                    self.G[i1, i2, i, s, r, k] = c * f
        self.G_small = _fits_int64(self.G)
        if self.G_small:
            self.G = self.G.astype(np.int64)
        # window corners in angular order of the normals
        ang = [math.atan2(*reversed(self._complex_normal(i))) for i in range(l)]
        order = sorted(range(l), key=lambda i: ang[i])
        self.corners = []
        for k in range(l):
            i1, i2 = order[k], order[(k + 1) % l]
            if not self.par[i1, i2]:
                self.corners.append((i1, i2))

    def _complex_normal(self, i: int) -> tuple[float, float]:
        a1, a2 = self.A[i]
        zc = complex(math.cos(2 * math.pi / self.W.n), math.sin(2 * math.pi / self.W.n))
        return (a1, (a2 - a1 * zc.real) / zc.imag)


def _fits_int64(arr: np.ndarray, headroom: int = 1 << 20) -> bool:
    if arr.size == 0:
        return True
    return max(abs(int(x)) for x in arr.ravel()) < (1 << 62) // headroom


_TABLES: dict[int, _WindowTables] = {}


def _tables(W: Window) -> _WindowTables:
    key = id(W)
    t = _TABLES.get(key)
    if t is None or t.W is not W:
        t = _WindowTables(W)
        if len(_TABLES) > 64:
            _TABLES.clear()
        _TABLES[key] = t
    return t


class _Offsets:
    """Exact offsets c_ij = a_i . p_j - b_i as integer vectors over a common denominator."""

    def __init__(self, T: _WindowTables, P: Sequence[Point]):
        self.T = T
        self.P = P
        vals = [[_dot(T.a[i], p) - T.b[i] for i in range(T.l)] for p in P]
        self.exact = vals
        den = 1
        for row in vals:
            for c in row:
                den = den * c.den // math.gcd(den, c.den)
        self.den = den
        m_phi = len(T.a[0][0].num)
        arr = np.zeros((len(P), T.l, m_phi), dtype=object)
        for j, row in enumerate(vals):
            for i, c in enumerate(row):
                f = den // c.den
                arr[j, i] = [x * f for x in c.num]
        bound = 1
        if arr.size:
            bound = max(abs(int(x)) for x in arr.ravel()) + 1
        gmax = 1
        if T.G.size:
            gmax = max(abs(int(x)) for x in np.asarray(T.G).ravel()) + 1
        small = T.G_small and 4 * m_phi * bound * max(gmax, T.G_den) < (1 << 62)
        self.C = arr.astype(np.int64) if small else arr
        self.G = T.G if small else np.asarray(T.G, dtype=object)

    def on_line(self, R: np.ndarray, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Whether meet(line(i1, j1), line(i2, j2)) lies exactly on line (i, j), batched."""
        i1, j1, i2, j2 = R[:, 0], R[:, 1], R[:, 2], R[:, 3]
        G = self.G
        c1 = self.C[j1, i1]
        c2 = self.C[j2, i2]
        x = np.einsum("krs,ks->kr", G[i1, i2, i, 0], c1) + np.einsum("krs,ks->kr", G[i1, i2, i, 1], c2)
        x = x - self.T.G_den * self.C[j, i]
        return np.all(x == 0, axis=1)

    def meet(self, i1: int, j1: int, i2: int, j2: int) -> Point:
        return self.T.solver.meet(self.T.a[i1], self.exact[j1][i1], self.T.a[i2], self.exact[j2][i2])


def maximal_separable_sets(W: Window, P: Sequence[Point]) -> SeparableFamily:
    """The inclusion-maximal members of Sep_{W°}(P), each with an exact witness.

    A maximal S is realised on the open polygon Q_S, the intersection of the
    p_j - W° for j in S.  Near any vertex v of its closure, v + eps*d lies in
    Q_S when d points into the wedge of the two boundary lines meeting at v.
    Such vertices are corners of one p_j - W or crossings of two boundaries,
    so scanning those (with every pair of lines through them) finds every
    maximal set; non-maximal ones are filtered out afterwards.
    """
    q = len(P)
    zero = CycNum.zero(W.n)
    if q == 0:
        return SeparableFamily([((), (zero, zero))], 0, True)
    T = _tables(W)
    A, bf = T.A, T.bf
    off = _Offsets(T, P)
    Pf = np.array([_fpt(p) for p in P], dtype=float).reshape(-1, 2)
    Cf = Pf @ A.T - bf[None, :]  # line (i, j): a_i . x = Cf[j, i]
    Rw = max(abs(v) for v in W.outline) + 1e-6
    zc = np.exp(2j * np.pi / W.n)
    Pz = Pf[:, 0] + Pf[:, 1] * zc  # window radius is measured in the complex plane
    reach = np.abs(Pz[:, None] - Pz[None, :]) <= 2 * Rw
    scale = 1.0 + np.abs(Pf).max() * np.abs(A).sum(axis=1).max() + np.abs(bf).max()
    tol = _TOL * scale
    ii1, ii2 = np.nonzero(~T.par)
    corner_pairs = np.array(T.corners, dtype=np.int64).reshape(-1, 2)

    candidates: dict[bytes, tuple[int, int, int, int]] = {}
    for j1 in range(q):
        nb = np.nonzero(reach[j1])[0]
        later = nb[nb > j1]
        # candidate vertices: own corners and crossings with later neighbours
        own = np.column_stack(
            [corner_pairs[:, 0], np.full(len(corner_pairs), j1), corner_pairs[:, 1], np.full(len(corner_pairs), j1)]
        )
        cross = np.column_stack(
            [
                np.tile(ii1, len(later)),
                np.full(len(ii1) * len(later), j1),
                np.tile(ii2, len(later)),
                np.repeat(later, len(ii1)),
            ]
        ).astype(np.int64)
        R = np.concatenate([own, cross]).astype(np.int64)
        rhs = np.stack([Cf[R[:, 1], R[:, 0]], Cf[R[:, 3], R[:, 2]]], axis=1)
        V = np.einsum("kab,kb->ka", T.Minv[R[:, 0], R[:, 2]], rhs)
        # keep vertices on the closure of both polygons
        AV = V @ A.T
        ok = np.all(AV - Cf[R[:, 1]] >= -tol, axis=1) & np.all(AV - Cf[R[:, 3]] >= -tol, axis=1)
        R, AV = R[ok], AV[ok]
        if not len(R):
            continue
        vals = AV[:, None, :] - Cf[nb][None, :, :]  # (K, |nb|, l)
        sign = np.where(vals > tol, 1, np.where(vals < -tol, -1, 0)).astype(np.int8)
        kk, jj, ii = np.nonzero(sign == 0)
        if kk.size:
            jg = nb[jj]
            zero_here = off.on_line(R[kk], ii, jg)
            sign[kk, jj, ii] = np.where(zero_here, T.dsign[R[kk, 0], R[kk, 2], ii], 0)
            for k, a, i in zip(kk[~zero_here], jj[~zero_here], ii[~zero_here]):
                i1, ja, i2, jb = (int(x) for x in R[k])
                v = off.meet(i1, ja, i2, jb)
                sign[k, a, i] = sign_exact(_dot(T.a[i], v) - off.exact[int(nb[a])][int(i)])
        member = np.all(sign > 0, axis=2)
        full = np.zeros((len(R), q), dtype=bool)
        full[:, nb] = member
        packed = np.packbits(full, axis=1)
        _, first = np.unique(packed, axis=0, return_index=True)
        for k in sorted(first):
            key = packed[k].tobytes()
            if key not in candidates:
                candidates[key] = tuple(int(x) for x in R[k])
    # maximal filter on bitmasks
    masks = []
    for key, src in candidates.items():
        bits = np.unpackbits(np.frombuffer(key, dtype=np.uint8))[:q]
        idx = tuple(int(j) for j in np.nonzero(bits)[0])
        masks.append((sum(1 << j for j in idx), idx, src))
    masks.sort(key=lambda m: (-len(m[1]), m[1]))
    kept: list[tuple[int, tuple[int, ...], tuple[int, int, int, int]]] = []
    for mask, idx, src in masks:
        if not idx:
            continue
        if any(mask & km == mask for km, _, _ in kept):
            continue
        kept.append((mask, idx, src))
    members = []
    for _, idx, (i1, j1, i2, j2) in kept:
        v = off.meet(i1, j1, i2, j2)
        members.append((idx, _witness(W, P, v, T.d[(i1, i2)], idx)))
    return SeparableFamily(_canonical(members), q, True)


def _witness(W: Window, P: Sequence[Point], v: Point, d: Point, idx: tuple[int, ...]) -> Point:
    """v + eps*d for a small enough power of two eps, verified exactly."""
    eps = Fraction(1, 8)
    for _ in range(200):
        t = (v[0] + d[0] * eps, v[1] + d[1] * eps)
        if subset_at(W, P, t) == idx:
            return t
        eps /= 4
    raise ArithmeticError("could not certify a witness translation")


# ---------------------------------------------------------------------------
# sampling


def translation_box(W: Window, Pf: np.ndarray, pad: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Axis box in (alpha, beta) coordinates holding every t with t + W meeting P."""
    zc = complex(math.cos(2 * math.pi / W.n), math.sin(2 * math.pi / W.n))
    ab = np.array([[v.real - (v.imag / zc.imag) * zc.real, v.imag / zc.imag] for v in W.outline])
    Pf = np.asarray(Pf, dtype=float).reshape(-1, 2)
    lo = Pf.min(axis=0) - ab.max(axis=0) - pad
    hi = Pf.max(axis=0) - ab.min(axis=0) + pad
    return lo, hi


def sample_subsets(
    A: np.ndarray,
    b: np.ndarray,
    P: np.ndarray,
    samples: int,
    rng: np.random.Generator,
    box: tuple[np.ndarray, np.ndarray] | None = None,
    chunk: int = 20000,
) -> set[frozenset[int]]:
    """Subsets realised by random translations, in floating point.

    Works in any internal dimension; a heuristic sub-family, used as a test
    oracle and as the fallback when the exact planar method does not apply.
    """
    P = np.asarray(P, dtype=float)
    q, dim = P.shape if P.size else (0, A.shape[1])
    if box is None:
        rw = np.abs(np.linalg.pinv(A) @ b).max() * 2 + 1 if A.size else 1
        lo = (P.min(axis=0) if q else np.zeros(dim)) - rw
        hi = (P.max(axis=0) if q else np.zeros(dim)) + rw
    else:
        lo, hi = box
    found: set[frozenset[int]] = set()
    C = P @ A.T - b[None, :] if q else np.zeros((0, len(b)))
    left = samples
    while left > 0:
        k = min(chunk, left)
        left -= k
        t = rng.uniform(lo, hi, size=(k, dim))
        vals = t @ A.T  # (k, l)
        inside = np.all(vals[:, None, :] > C[None, :, :], axis=2)  # (k, q)
        for row in np.unique(np.packbits(inside, axis=1), axis=0):
            bits = np.unpackbits(row)[:q]
            found.add(frozenset(int(j) for j in np.nonzero(bits)[0]))
    return found
