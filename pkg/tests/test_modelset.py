import itertools
from fractions import Fraction

import pytest

from modeltomo.cyclotomic import CycNum, phi, star, star_coordinates, zeta
from modeltomo.modelset import (
    ModelSetSpec,
    Patch,
    Window,
    generate_patch,
    genericity_check,
    membership,
    polygon_window,
    preset_spec,
    preset_window,
    rotate_patch,
    window_contains,
)


def test_preset_shapes():
    n, s, w = preset_window("square")
    assert (n, w.dim, s.dim) == (4, 0, 0)
    n, s, w = preset_window("ammann_beenker")
    assert (n, w.l) == (8, 8)
    n, s, w = preset_window("shield")
    assert (n, w.l) == (12, 12)
    n, s, w = preset_window("tuebingen")
    assert (n, w.l) == (5, 10)
    with pytest.raises(ValueError):
        preset_window("penrose5x")


@pytest.mark.parametrize("name", ["ammann_beenker", "tuebingen", "shield"])
def test_unit_edges(name):
    _, _, w = preset_window(name)
    v = w.outline
    edges = [abs(v[k] - v[k - 1]) for k in range(len(v))]
    expected = 1.0 if name != "tuebingen" else None
    if expected is not None:
        assert max(abs(e - expected) for e in edges) < 1e-12
    assert max(edges) - min(edges) < 1e-12


def test_window_contains_examples():
    for name in ("ammann_beenker", "tuebingen", "shield"):
        n, _, w = preset_window(name)
        zero = CycNum.zero(n)
        assert window_contains(w, (zero, zero))
        far = CycNum.rational(n, 100)
        assert not window_contains(w, (far, far))
    n, s, w = preset_window("ammann_beenker")
    assert star(s, zeta(8)) == (zeta(8, 3),)
    assert window_contains(w, star_coordinates(s, zeta(8)))


def test_boundary_is_excluded_from_open_window():
    n, s, w = preset_window("ammann_beenker")
    # the vertex in direction 1 of the edge with normal 1
    r = w.halfspaces[0].offset
    edge_point = (r, CycNum.zero(8))
    assert not window_contains(w, edge_point, strict=True)
    assert window_contains(w, edge_point, strict=False)


def test_membership_examples():
    for name in ("square", "triangle", "ammann_beenker", "tuebingen", "shield"):
        spec = preset_spec(name)
        assert membership(spec, CycNum.zero(spec.n))
        assert not membership(spec, CycNum.rational(spec.n, Fraction(1, 2)))
    spec = preset_spec("ammann_beenker")
    assert membership(spec, zeta(8))


def test_generate_tiny_radius():
    for name in ("square", "ammann_beenker", "tuebingen", "shield"):
        spec = preset_spec(name)
        assert generate_patch(spec, Fraction(1, 10)).points == (CycNum.zero(spec.n),)


def test_square_patch_radius_1_5():
    pts = set(generate_patch(preset_spec("square"), Fraction(3, 2)).points)
    expected = {CycNum(4, [a, b]) for a in (-1, 0, 1) for b in (-1, 0, 1)}
    assert pts == expected


@pytest.mark.parametrize("name,N", [("ammann_beenker", 8), ("square", 4), ("triangle", 6)])
def test_rotation_closure(name, N):
    pts = generate_patch(preset_spec(name), 5).points
    assert len(set(pts)) == len(pts)
    rotated = rotate_patch(pts, 1)
    assert set(rotated) == set(pts)
    assert set(rotate_patch(pts, N)) == set(pts)


def _disk_candidates(n, radius, bound):
    for c in itertools.product(range(-bound, bound + 1), repeat=phi(n)):
        z = CycNum(n, list(c))
        if abs(complex(z)) <= radius + 1e-9:
            yield z


@pytest.mark.parametrize("name", ["ammann_beenker", "tuebingen", "shield", "square"])
def test_membership_cross_check(name):
    spec = preset_spec(name)
    radius = 3 if spec.n in (4, 3) else 2
    pts = set(generate_patch(spec, radius).points)
    bound = 3 if phi(spec.n) == 4 else 4
    for z in pts:
        assert membership(spec, z)
    for z in _disk_candidates(spec.n, radius, bound):
        if abs(complex(z)) < radius - 1e-9:
            assert (z in pts) == membership(spec, z)


def test_patch_density_smoke():
    pts = generate_patch(preset_spec("ammann_beenker"), 10).points
    assert len(pts) >= 100


def test_patch_grows_with_radius():
    spec = preset_spec("shield")
    sizes = [len(generate_patch(spec, r)) for r in (2, 3, 4)]
    assert sizes == sorted(sizes) and sizes[0] < sizes[-1]


def test_genericity_examples():
    assert genericity_check(preset_spec("square"), 5)
    assert not genericity_check(preset_spec("tuebingen"), 4)
    assert genericity_check(preset_spec("ammann_beenker"), 5)
    tau = (CycNum.rational(12, Fraction(1, 97)), CycNum.rational(12, Fraction(1, 89)))
    assert genericity_check(preset_spec("shield", tau), 4)


def test_shifted_window_membership():
    n = 8
    tau = (CycNum.rational(n, Fraction(1, 3)), CycNum.rational(n, Fraction(-1, 5)))
    spec = preset_spec("ammann_beenker", tau)
    for z in generate_patch(spec, 3).points:
        assert membership(spec, z)
        p = tuple(a - t for a, t in zip(star_coordinates(spec.star, z), tau))
        assert window_contains(spec.window, p)


def test_physical_translation():
    base = preset_spec("ammann_beenker")
    t = CycNum(8, [Fraction(1, 2), 0, 0, 0])
    spec = ModelSetSpec(base.n, base.star, base.window, (), t)
    assert membership(spec, t)
    assert not membership(spec, CycNum.zero(8))


def test_spec_validation():
    n, s, w = preset_window("ammann_beenker")
    with pytest.raises(ValueError):
        ModelSetSpec(8, s, w, (zeta(8), zeta(8)))
    with pytest.raises(ValueError):
        ModelSetSpec(12, s, w)
    with pytest.raises(ValueError):
        polygon_window(8, [(CycNum.one(8), 1), (zeta(8, 2), 1)])  # unbounded


def test_json_round_trips():
    tau = (CycNum.rational(12, Fraction(1, 97)), CycNum.rational(12, Fraction(1, 89)))
    for spec in (preset_spec("shield", tau), preset_spec("square")):
        assert ModelSetSpec.from_json(spec.to_json()) == spec
    slim = polygon_window(8, [(1 + zeta(8, 3), 2), (-1 - zeta(8, 3), 2), (zeta(8, 2), 1), (-zeta(8, 2), 1)])
    again = Window.from_json(8, slim.to_json())
    assert again.halfspaces == slim.halfspaces
    spec = preset_spec("tuebingen")
    patch = generate_patch(spec, 3)
    doc = patch.to_json(spec)
    assert Patch.from_json(doc) == patch
    assert ModelSetSpec.from_json(doc["spec"]) == spec
