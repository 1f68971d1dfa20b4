"""Consistency, reconstruction and uniqueness from X-rays in O_n-directions.

The search space is reduced in four steps: compare the direction totals,
split the grid into classes modulo O_n, cut each class down to the subsets
that fit into one translate of the open window, and solve the line-sum
problem anchored to each such subset.  With two directions the anchored
problem is a bipartite max-flow; with more it is solved by backtracking.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .cyclotomic import CycNum, is_in_On, star_coordinates
from .grid import build_grid, decompose, module_index
from .modelset import ModelSetSpec, membership
from .separation import maximal_separable_sets
from .xray import Direction, InstanceError, XRayInstance, _key, compute_xray, make_instance

__all__ = [
    "Status",
    "CandidateSet",
    "FlowNetwork",
    "TomographyResult",
    "TomographyLimitError",
    "EXHAUSTIVE_LIMIT",
    "candidate_sets",
    "anchored_consistency",
    "anchored_solutions",
    "consistency",
    "reconstruct",
    "uniqueness",
    "verify_solution",
]

EXHAUSTIVE_LIMIT = 30


class TomographyLimitError(RuntimeError):
    """An exhaustive search was requested beyond the supported size."""


class Status(str, enum.Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"
    UNIQUE = "UNIQUE"
    NON_UNIQUE = "NON_UNIQUE"


@dataclass(frozen=True)
class CandidateSet:
    """Points of one grid class that fit into t + (tau + W°), t the class representative."""

    points: tuple[CycNum, ...]
    t: CycNum
    tau: tuple[CycNum, ...]
    class_index: int
    subset_index: int


@dataclass
class TomographyResult:
    status: Status
    solution: tuple[CycNum, ...] | None = None
    second_solution: tuple[CycNum, ...] | None = None
    t: CycNum | None = None
    tau: tuple[CycNum, ...] | None = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"kind": "tomography_result", "status": self.status.value}
        if self.solution is not None:
            out["solution"] = [p.to_list() for p in self.solution]
        if self.second_solution is not None:
            out["second_solution"] = [p.to_list() for p in self.second_solution]
        if self.t is not None:
            out["t"] = self.t.to_list()
        if self.tau is not None:
            out["tau"] = [c.to_list() for c in self.tau]
        if self.provenance:
            out["provenance"] = dict(self.provenance)
        if self.solution:
            out["n"] = self.solution[0].n
        return out


# ---------------------------------------------------------------------------
# candidates


def candidate_sets(inst: XRayInstance, min_size: int | None = None) -> Iterator[CandidateSet]:
    """Maximal W°-compatible subsets of each grid class, in canonical order.

    Only maximal separable subsets are produced: a solution inside any
    separable subset also lies in a maximal one containing it.
    """
    spec = inst.spec
    N = inst.total if min_size is None else min_size
    grid = build_grid(inst)
    classes = decompose(grid)
    for ci, cls in enumerate(classes.classes):
        pts = [g.position for g in cls]
        if len(pts) < (N or 0):
            continue
        rep = pts[0]
        if spec.dim == 0:
            yield CandidateSet(tuple(pts), rep, (), ci, 0)
            continue
        P = [star_coordinates(spec.star, z - rep) for z in pts]
        fam = maximal_separable_sets(spec.window, P)
        for si, (idx, tau) in enumerate(fam.members):
            if len(idx) >= (N or 0):
                yield CandidateSet(tuple(pts[j] for j in idx), rep, tuple(tau), ci, si)


# ---------------------------------------------------------------------------
# max-flow for two directions


class FlowNetwork:
    """source -> row lines -> column lines -> sink, one unit arc per allowed point."""

    def __init__(self, points: Sequence[CycNum], inst: XRayInstance):
        d1, d2 = inst.directions[0], inst.directions[1]
        r1, r2 = inst.data[0], inst.data[1]
        self.rows = [k for k, _, _ in r1.lines()]
        self.cols = [k for k, _, _ in r2.lines()]
        self.row_cap = [r1.counts[k] for k in self.rows]
        self.col_cap = [r2.counts[k] for k in self.cols]
        ri = {k: i for i, k in enumerate(self.rows)}
        cj = {k: j for j, k in enumerate(self.cols)}
        self.arcs: list[tuple[int, int, CycNum]] = []
        for z in sorted(points):
            i = ri.get(_key(d1, z))
            j = cj.get(_key(d2, z))
            if i is not None and j is not None:
                self.arcs.append((i, j, z))
        self.used = [False] * len(self.arcs)
        self.value = 0

    def max_flow(self) -> int:
        R, C = len(self.rows), len(self.cols)
        row_flow = [0] * R
        col_flow = [0] * C
        out_arcs: list[list[int]] = [[] for _ in range(R)]
        in_arcs: list[list[int]] = [[] for _ in range(C)]
        for a, (i, j, _) in enumerate(self.arcs):
            out_arcs[i].append(a)
            in_arcs[j].append(a)
        while True:
            # BFS over residual graph: nodes ('r', i) and ('c', j)
            prev: dict[tuple[str, int], tuple[tuple[str, int] | None, int]] = {}
            queue: deque[tuple[str, int]] = deque()
            for i in range(R):
                if row_flow[i] < self.row_cap[i]:
                    prev[("r", i)] = (None, -1)
                    queue.append(("r", i))
            end = None
            while queue and end is None:
                node = queue.popleft()
                kind, x = node
                if kind == "r":
                    for a in out_arcs[x]:
                        if not self.used[a]:
                            nxt = ("c", self.arcs[a][1])
                            if nxt not in prev:
                                prev[nxt] = (node, a)
                                if col_flow[nxt[1]] < self.col_cap[nxt[1]]:
                                    end = nxt
                                    break
                                queue.append(nxt)
                else:
                    for a in in_arcs[x]:
                        if self.used[a]:
                            nxt = ("r", self.arcs[a][0])
                            if nxt not in prev:
                                prev[nxt] = (node, a)
                                queue.append(nxt)
            if end is None:
                break
            col_flow[end[1]] += 1
            node = end
            while True:
                parent, a = prev[node]
                if parent is None:
                    row_flow[node[1]] += 1
                    break
                self.used[a] = not self.used[a]
                node = parent
            self.value += 1
        return self.value

    def solution(self) -> tuple[CycNum, ...]:
        return tuple(sorted(z for (_, _, z), u in zip(self.arcs, self.used) if u))

    def alternating_cycle(self) -> list[int] | None:
        """Arc indices of a directed cycle in the residual point graph, if any.

        Unused arcs run row -> column, used arcs column -> row.  Flipping the
        arcs of such a cycle keeps every line sum and yields a second solution.
        """
        R = len(self.rows)
        adj: dict[int, list[tuple[int, int]]] = {}
        for a, (i, j, _) in enumerate(self.arcs):
            if self.used[a]:
                adj.setdefault(R + j, []).append((i, a))
            else:
                adj.setdefault(i, []).append((R + j, a))
        color: dict[int, int] = {}
        for start in sorted(adj):
            if color.get(start):
                continue
            stack = [(start, iter(adj.get(start, ())))]
            path_arcs: list[int] = []
            path_nodes = [start]
            color[start] = 1
            while stack:
                node, it = stack[-1]
                step = next(it, None)
                if step is None:
                    color[node] = 2
                    stack.pop()
                    path_nodes.pop()
                    if path_arcs:
                        path_arcs.pop()
                    continue
                nxt, a = step
                c = color.get(nxt, 0)
                if c == 1:
                    k = path_nodes.index(nxt)
                    return path_arcs[k:] + [a]
                if c == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(adj.get(nxt, ()))))
                    path_nodes.append(nxt)
                    path_arcs.append(a)
        return None

    def switched(self, cycle: Sequence[int]) -> tuple[CycNum, ...]:
        used = list(self.used)
        for a in cycle:
            used[a] = not used[a]
        return tuple(sorted(z for (_, _, z), u in zip(self.arcs, used) if u))


# ---------------------------------------------------------------------------
# exhaustive search


def anchored_solutions(points: Sequence[CycNum], inst: XRayInstance) -> Iterator[tuple[CycNum, ...]]:
    """Every F inside points with the prescribed line sums, by backtracking."""
    dirs = inst.directions
    target = [dict(r.counts) for r in inst.data]
    pts = []
    for z in sorted(points):
        keys = tuple(_key(d, z) for d in dirs)
        if all(k in t for k, t in zip(keys, target)):
            pts.append((z, keys))
    N = inst.total
    if N is None:
        return
    remaining = [dict(t) for t in target]
    # available[i][k]: unused candidate points still ahead on line k of direction i
    avail = [dict.fromkeys(t, 0) for t in target]
    for _, keys in pts:
        for i, k in enumerate(keys):
            avail[i][k] += 1
    for i in range(len(dirs)):
        if any(avail[i][k] < c for k, c in remaining[i].items()):
            return
    chosen: list[CycNum] = []

    def rec(pos: int, left: int) -> Iterator[tuple[CycNum, ...]]:
        if left == 0:
            if all(v == 0 for r in remaining for v in r.values()):
                yield tuple(chosen)
            return
        if len(pts) - pos < left:
            return
        z, keys = pts[pos]
        for i, k in enumerate(keys):
            avail[i][k] -= 1
        # take z
        if all(remaining[i][k] > 0 for i, k in enumerate(keys)):
            for i, k in enumerate(keys):
                remaining[i][k] -= 1
            chosen.append(z)
            yield from rec(pos + 1, left - 1)
            chosen.pop()
            for i, k in enumerate(keys):
                remaining[i][k] += 1
        # skip z
        if all(avail[i][k] >= remaining[i][k] for i, k in enumerate(keys)):
            yield from rec(pos + 1, left)
        for i, k in enumerate(keys):
            avail[i][k] += 1

    yield from rec(0, N)


def anchored_consistency(points: Sequence[CycNum], inst: XRayInstance) -> tuple[CycNum, ...] | None:
    """A subset of points with the given X-rays, or None."""
    if inst.total is None:
        return None
    if inst.total == 0:
        return ()
    if inst.m == 2:
        net = FlowNetwork(points, inst)
        return net.solution() if net.max_flow() == inst.total else None
    if len(points) > EXHAUSTIVE_LIMIT:
        raise TomographyLimitError(
            f"exhaustive anchored search is limited to {EXHAUSTIVE_LIMIT} points, got {len(points)}"
        )
    return next(anchored_solutions(points, inst), None)


def _other_solution(points: Sequence[CycNum], inst: XRayInstance, F: tuple[CycNum, ...]):
    if inst.m == 2:
        net = FlowNetwork(points, inst)
        if net.max_flow() != inst.total:
            return None
        sol = net.solution()
        if sol != F:
            return sol
        cyc = net.alternating_cycle()
        return None if cyc is None else net.switched(cyc)
    if len(points) > EXHAUSTIVE_LIMIT:
        raise TomographyLimitError(
            f"exhaustive anchored search is limited to {EXHAUSTIVE_LIMIT} points, got {len(points)}"
        )
    for sol in anchored_solutions(points, inst):
        if sol != F:
            return sol
    return None


# ---------------------------------------------------------------------------


def _result(status: Status, cand: CandidateSet | None, sol, second=None) -> TomographyResult:
    if cand is None:
        return TomographyResult(status, sol, second)
    return TomographyResult(
        status,
        sol,
        second,
        cand.t,
        cand.tau,
        {"class_index": cand.class_index, "subset_index": cand.subset_index},
    )


def consistency(inst: XRayInstance) -> TomographyResult:
    if inst.total is None:
        return TomographyResult(Status.INCONSISTENT, provenance={"reason": "direction totals differ"})
    if inst.total == 0:
        return TomographyResult(Status.CONSISTENT, ())
    for cand in candidate_sets(inst):
        sol = anchored_consistency(cand.points, inst)
        if sol is not None:
            return _result(Status.CONSISTENT, cand, sol)
    return TomographyResult(Status.INCONSISTENT)


def reconstruct(inst: XRayInstance) -> TomographyResult:
    res = consistency(inst)
    if res.status is Status.CONSISTENT and res.solution and not verify_solution(inst, res):
        raise AssertionError("reconstructed set failed verification")
    return res


def verify_solution(inst: XRayInstance, res: TomographyResult) -> bool:
    """Re-check line sums and window membership of a reported solution."""
    sol = res.solution or ()
    for d, ray in zip(inst.directions, inst.data):
        if compute_xray(sol, d).counts != ray.counts:
            return False
    if not sol:
        return True
    spec = inst.spec
    t = res.t if res.t is not None else sol[0]
    tau = res.tau if res.tau is not None else ()
    local = ModelSetSpec(spec.n, spec.star, spec.window, tuple(tau), t)
    return all(membership(local, z) for z in sol)


def _anchor(F: Sequence[CycNum]) -> CycNum:
    pts = sorted(F)
    base = pts[0]
    for p in pts[1:]:
        if not is_in_On(p - base):
            raise InstanceError("F does not lie on a single translate of O_n")
    return base


def uniqueness(
    F: Sequence[CycNum], directions: Sequence[CycNum | Direction], spec: ModelSetSpec
) -> TomographyResult:
    Fs = tuple(sorted(set(F)))
    inst = make_instance(spec, Fs, directions)
    if not Fs:
        return TomographyResult(Status.UNIQUE, ())
    base = _anchor(Fs)
    if spec.dim:
        P = [star_coordinates(spec.star, z - base) for z in Fs]
        fam = maximal_separable_sets(spec.window, P)
        full = tuple(range(len(Fs)))
        if not any(idx == full for idx, _ in fam.members):
            raise InstanceError("F is not contained in any translate of the open window model set")
    for cand in candidate_sets(inst):
        other = _other_solution(cand.points, inst, Fs)
        if other is not None:
            return _result(Status.NON_UNIQUE, cand, Fs, other)
    return TomographyResult(Status.UNIQUE, Fs)


def index_bound(inst: XRayInstance) -> int | None:
    try:
        return module_index(inst.directions[0], inst.directions[1])
    except ValueError:
        return None
