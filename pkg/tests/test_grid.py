import random
from fractions import Fraction

import pytest

from modeltomo import grid as grid_mod
from modeltomo.cyclotomic import CycNum, real_generator, zeta
from modeltomo.grid import (
    build_grid,
    decompose,
    intersect_lines,
    module_coordinates,
    module_index,
)
from modeltomo.modelset import preset_spec
from modeltomo.xray import make_instance

from helpers import brute_force_classes, patch_points, random_integer, try_instance

I4 = zeta(4)
THREE_CLASS_SQUARE = [CycNum.from_list(4, c) for c in (["-3", "-1"], ["-1", "0"], ["0", "0"], ["0", "2"], ["4", "0"])]
TWO_CLASS_AB = [
    CycNum.from_list(8, c)
    for c in (
        ["-1", "-1", "-1", "1"],
        ["0", "0", "0", "0"],
        ["1", "0", "-1", "-1"],
        ["1", "0", "0", "0"],
        ["1", "1", "1", "1"],
    )
]


def test_intersect_examples():
    zero, one = CycNum.zero(4), CycNum.one(4)
    assert intersect_lines(zero, one, zero, I4) == zero
    p = intersect_lines(zero, 1 + I4, one, 1 - 2 * I4)
    assert p == Fraction(2, 3) + Fraction(2, 3) * I4
    for n in (5, 8, 12):
        z = CycNum(n, [1, 2, -1, 3])
        assert intersect_lines(z, 1 + zeta(n), z, zeta(n, 2)) == z


def test_build_grid_examples():
    spec = preset_spec("square")
    one = make_instance(spec, [CycNum.zero(4)], [CycNum.one(4), I4])
    assert [g.position for g in build_grid(one)] == [CycNum.zero(4)]
    square = [CycNum(4, c) for c in ([0, 0], [1, 0], [0, 1], [1, 1])]
    inst = make_instance(spec, square, [CycNum.one(4), I4])
    assert {g.position for g in build_grid(inst)} == set(square)
    # a x b supports give a*b points in two directions
    F = [CycNum(4, [k, (3 * k) % 5]) for k in range(5)] + [CycNum(4, [7, 7])]
    inst = make_instance(spec, F, [CycNum.one(4), 1 + I4])
    a, b = (d.support_size for d in inst.data)
    assert len(build_grid(inst)) == a * b


def test_three_classes_square():
    inst = make_instance(preset_spec("square"), THREE_CLASS_SQUARE, [1 + I4, 1 - 2 * I4])
    grid = build_grid(inst)
    cls = decompose(grid, module_index(1 + I4, 1 - 2 * I4))
    assert cls.count == 3
    assert module_index(1 + I4, 1 - 2 * I4) == 3
    assert {frozenset(c) for c in cls.point_sets()} == brute_force_classes([g.position for g in grid])


def test_two_classes_ab():
    inst = make_instance(preset_spec("ammann_beenker"), TWO_CLASS_AB, [CycNum.one(8), zeta(8, 2)])
    grid = build_grid(inst)
    assert decompose(grid).count == 2
    assert module_index(CycNum.one(8), zeta(8, 2)) == 2


def test_module_index_examples():
    assert module_index(CycNum.one(4), I4) == 1
    for n in (5, 8, 12):
        assert module_index(CycNum.one(n), zeta(n)) == 1
    assert module_index(CycNum.one(8), zeta(8)) == 1


@pytest.mark.parametrize("n", [5, 8, 12])
def test_module_index_unit_shift(n):
    rng = random.Random(n)
    lam = real_generator(n)
    for _ in range(5):
        gamma = rng.randint(-4, 4) + rng.randint(-4, 4) * lam
        assert module_index(CycNum.one(n), gamma + zeta(n)) == 1


def test_all_integral_grid_is_one_class():
    spec = preset_spec("square")
    F = [CycNum(4, c) for c in ([0, 0], [2, 1], [1, 3])]
    inst = make_instance(spec, F, [CycNum.one(4), I4])
    assert decompose(build_grid(inst)).count == 1


def _random_instances(count, seed):
    rng = random.Random(seed)
    specs = ["square", "ammann_beenker", "tuebingen", "shield"]
    out = []
    while len(out) < count:
        name = rng.choice(specs)
        spec = preset_spec(name)
        pts = patch_points(name, 4)
        F = rng.sample(pts, rng.randint(2, 7))
        o1 = random_integer(spec.n, rng, 2)
        o2 = random_integer(spec.n, rng, 2)
        if o1.is_zero() or o2.is_zero():
            continue
        inst = try_instance(spec, F, [o1, o2])
        if inst is not None:
            out.append((inst, F))
    return out


def test_partition_matches_brute_force():
    for inst, F in _random_instances(25, 1):
        grid = build_grid(inst)
        if len(grid) > 60:
            continue
        o1, o2 = inst.directions
        idx = module_index(o1, o2)
        cls = decompose(grid, idx)
        assert {frozenset(c) for c in cls.point_sets()} == brute_force_classes([g.position for g in grid])
        assert cls.count <= idx
        assert cls.iterations == cls.count <= idx
        s = max(d.support_size for d in inst.data)
        assert len(grid) <= s * s
        assert set(F) <= {g.position for g in grid}


def test_grid_points_lie_in_module():
    for inst, _ in _random_instances(15, 2):
        o1, o2 = inst.directions
        for g in build_grid(inst):
            coords = module_coordinates(g.position - inst.data[0].lines()[0][1], o1, o2)
            assert all(c.denominator == 1 for c in coords)


def test_module_coordinates_reject_outsiders():
    # 1/2 is not in M_{1, zeta}= O_n
    coords = module_coordinates(CycNum.rational(8, Fraction(1, 2)), CycNum.one(8), zeta(8))
    assert any(c.denominator != 1 for c in coords)


def test_classification_json():
    inst = make_instance(preset_spec("square"), THREE_CLASS_SQUARE, [1 + I4, 1 - 2 * I4])
    doc = decompose(build_grid(inst), 3).to_json()
    assert doc["kind"] == "grid_classification" and len(doc["classes"]) == 3


def test_scaling_smoke(monkeypatch):
    calls = {"meet": 0, "test": 0}
    meet, test = grid_mod.intersect_lines, grid_mod.is_in_On

    def counted_meet(*a):
        calls["meet"] += 1
        return meet(*a)

    def counted_test(x):
        calls["test"] += 1
        return test(x)

    monkeypatch.setattr(grid_mod, "intersect_lines", counted_meet)
    monkeypatch.setattr(grid_mod, "is_in_On", counted_test)
    spec = preset_spec("square")
    work = {}
    rng = random.Random(7)
    for s in (10, 20, 40):
        perm = list(range(s))
        rng.shuffle(perm)
        F = [CycNum(4, [k, perm[k]]) for k in range(s)]
        inst = make_instance(spec, F, [1 + I4, 1 - 2 * I4])
        calls.update(meet=0, test=0)
        grid = build_grid(inst)
        cls = decompose(grid, 3)
        assert len(grid) <= s * s
        assert cls.iterations <= 3
        assert calls["meet"] <= s * s
        assert calls["test"] <= 3 * len(grid)
        work[s] = calls["meet"] + calls["test"]
    assert work[20] <= 4 * work[10] * 1.05
    assert work[40] <= 4 * work[20] * 1.05
