"""O_n-directions, exact line keys and discrete X-rays of finite point sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycNum, conjugate, inverse, is_in_On, is_real, zeta
from .modelset import ModelSetSpec

__all__ = [
    "Direction",
    "LineKey",
    "XRayData",
    "XRayInstance",
    "InstanceError",
    "line_key",
    "compute_xray",
    "validate_instance",
    "make_instance",
]


class InstanceError(ValueError):
    """Malformed tomography input."""


class Direction:
    """A nonzero element o of O_n used as X-ray direction."""

    __slots__ = ("o", "_scale")

    def __init__(self, o: CycNum):
        if o.is_zero():
            raise InstanceError("0 is not an O_n-direction")
        if not is_in_On(o):
            raise InstanceError(f"direction {o} is not in O_n")
        self.o = o
        zn = zeta(o.n)
        # key(z) = (w - conj w) * scale with w = z * conj(o)
        self._scale = inverse(o * conjugate(o) * (zn - conjugate(zn)))

    @property
    def n(self) -> int:
        return self.o.n

    def parallel(self, other: Direction) -> bool:
        return is_real(self.o * inverse(other.o))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Direction) and self.o == other.o

    def __hash__(self) -> int:
        return hash(("Direction", self.o))

    def __repr__(self) -> str:
        return f"Direction({self.o!r})"


@dataclass(frozen=True)
class LineKey:
    """The line z + R*o, identified by the zeta-coordinate of z/o."""

    direction: Direction
    key: CycNum


def line_key(o: Direction, z: CycNum) -> LineKey:
    return LineKey(o, _key(o, z))


def _key(o: Direction, z: CycNum) -> CycNum:
    w = z * conjugate(o.o)
    return (w - conjugate(w)) * o._scale


@dataclass
class XRayData:
    """Line sums in one direction: key -> count, with a base point per line."""

    direction: Direction
    counts: dict[CycNum, int] = field(default_factory=dict)
    bases: dict[CycNum, CycNum] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def support_size(self) -> int:
        return len(self.counts)

    def lines(self) -> list[tuple[CycNum, CycNum, int]]:
        """(key, base, count) sorted by base point."""
        return sorted(((k, self.bases[k], c) for k, c in self.counts.items()), key=lambda t: t[1])

    def as_mapping(self) -> dict[CycNum, int]:
        return dict(self.counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XRayData):
            return NotImplemented
        return self.direction == other.direction and self.counts == other.counts


def compute_xray(F: Iterable[CycNum], o: Direction) -> XRayData:
    pts = sorted(set(F))
    if pts:
        p0 = pts[0]
        for p in pts[1:]:
            if not is_in_On(p - p0):
                raise InstanceError("point set does not live on a single translate of O_n")
    data = XRayData(o)
    for p in pts:  # sorted, so the first base seen is the canonical least
        k = _key(o, p)
        data.counts[k] = data.counts.get(k, 0) + 1
        data.bases.setdefault(k, p)
    return data


@dataclass
class XRayInstance:
    """X-ray data in m pairwise non-parallel directions plus the model-set spec."""

    spec: ModelSetSpec
    directions: list[Direction]
    data: list[XRayData]
    total: int | None = None
    totals: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return len(self.directions)

    @cached_property
    def consistent_totals(self) -> bool:
        return self.total is not None

    def to_json(self) -> dict:
        out = {"kind": "xray_instance", **self.spec.to_json()}
        out["directions"] = [d.o.to_list() for d in self.directions]
        out["data"] = [
            {
                "direction_index": i,
                "lines": [{"base": b.to_list(), "count": c} for _, b, c in d.lines()],
            }
            for i, d in enumerate(self.data)
        ]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> XRayInstance:
        try:
            spec = ModelSetSpec.from_json(dict(data))
            n = spec.n
            dirs = [Direction(CycNum.from_list(n, o)) for o in data["directions"]]
            rays = [XRayData(d) for d in dirs]
            for block in data["data"]:
                i = int(block["direction_index"])
                if not 0 <= i < len(dirs):
                    raise InstanceError(f"direction_index {i} out of range")
                for ln in block["lines"]:
                    base = CycNum.from_list(n, ln["base"])
                    count = int(ln["count"])
                    k = _key(dirs[i], base)
                    rays[i].counts[k] = rays[i].counts.get(k, 0) + count
                    prev = rays[i].bases.get(k)
                    rays[i].bases[k] = base if prev is None or base < prev else prev
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed instance: {exc}") from exc
        return validate_instance(cls(spec, dirs, rays))


def validate_instance(inst: XRayInstance) -> XRayInstance:
    """Check directions and supports, then record the common total (or None)."""
    if inst.m < 2:
        raise InstanceError("at least two directions are required")
    if len(inst.data) != inst.m:
        raise InstanceError("one X-ray per direction is required")
    for i, d in enumerate(inst.directions):
        if d.n != inst.n:
            raise InstanceError("direction lives in the wrong field")
        for e in inst.directions[:i]:
            if d.parallel(e):
                raise InstanceError(f"directions {e.o} and {d.o} are parallel")
    for ray, d in zip(inst.data, inst.directions):
        if ray.direction != d:
            raise InstanceError("X-ray data attached to the wrong direction")
        for k, c in list(ray.counts.items()):
            if c < 0:
                raise InstanceError("line sums must be nonnegative")
            if c == 0:
                del ray.counts[k]
                ray.bases.pop(k, None)
        for b in ray.bases.values():
            if not is_in_On(b):
                raise InstanceError(f"base point {b} is not in O_n")
    inst.totals = [r.total for r in inst.data]
    inst.total = inst.totals[0] if len(set(inst.totals)) == 1 else None
    inst.__dict__.pop("consistent_totals", None)
    return inst


def make_instance(
    spec: ModelSetSpec, F: Iterable[CycNum], directions: Sequence[CycNum | Direction]
) -> XRayInstance:
    """X-rays of F in the given directions, packaged and validated."""
    pts = list(F)
    dirs = [d if isinstance(d, Direction) else Direction(d) for d in directions]
    data = [compute_xray(pts, d) for d in dirs]
    return validate_instance(XRayInstance(spec, dirs, data))
