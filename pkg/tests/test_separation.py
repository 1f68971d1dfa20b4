import random
from fractions import Fraction

import numpy as np
import pytest

from modeltomo.cyclotomic import CycNum, sign_exact, star_coordinates
from modeltomo.modelset import preset_window
from modeltomo.separation import (
    ArrangementLine,
    arrangement_cells,
    build_arrangement,
    cell_representatives,
    maximal_separable_sets,
    sample_subsets,
    separate,
    size_constant,
    subset_at,
    translation_box,
)

from helpers import patch_points

WINDOWS = {"ammann_beenker": 8, "tuebingen": 5, "shield": 12}


def rational_line(n, a1, a2, c, tag=(0, 0)):
    q = lambda x: CycNum.rational(n, x)  # noqa: E731
    return ArrangementLine((q(a1), q(a2)), q(c), tag)


def four_lines():
    data = [(-1, 1, -1), (-1, 4, 3), (0, 1, 1), (-2, -3, -4)]
    return [rational_line(4, a1, a2, c, (k, 0)) for k, (a1, a2, c) in enumerate(data)]


def internal_points(name, q, rng, radius=3):
    n, s, _ = preset_window(name)
    pts = rng.sample(patch_points(name, radius), q)
    return [star_coordinates(s, z) for z in pts]


def as_float(P):
    return np.array([[c.approx_real() for c in p] for p in P], dtype=float).reshape(-1, 2)


# --- arrangement ----------------------------------------------------------------


def test_build_arrangement_examples():
    n, _, W = preset_window("ammann_beenker")
    assert build_arrangement(W, []) == []
    rng = random.Random(0)
    P = internal_points("ammann_beenker", 3, rng)
    assert len(build_arrangement(W, P)) == 24
    lines = build_arrangement(W, [P[0], P[0]])
    assert [(ln.normal, ln.offset) for ln in lines[:8]] == [(ln.normal, ln.offset) for ln in lines[8:]]


def test_small_arrangements():
    assert arrangement_cells([rational_line(4, 1, 0, 0)]) == {0: 0, 1: 1, 2: 2}
    two = [rational_line(4, 1, 0, 0), rational_line(4, 0, 1, 0, (1, 0))]
    assert arrangement_cells(two) == {0: 1, 1: 4, 2: 4}
    parallel = [rational_line(4, 1, 0, 0), rational_line(4, 2, 0, 1, (1, 0))]
    assert arrangement_cells(parallel) == {0: 0, 1: 2, 2: 3}
    same = [rational_line(4, 1, 1, 1), rational_line(4, -2, -2, -2, (1, 0))]
    assert arrangement_cells(same) == {0: 0, 1: 1, 2: 2}


def test_four_line_arrangement():
    assert arrangement_cells(four_lines()) == {0: 6, 1: 16, 2: 11}


def test_concurrent_lines():
    lines = [rational_line(4, 1, 0, 0), rational_line(4, 0, 1, 0, (1, 0)), rational_line(4, 1, 1, 0, (2, 0))]
    assert arrangement_cells(lines) == {0: 1, 1: 6, 2: 6}


def _assert_cell_signs(lines):
    for c in cell_representatives(lines):
        recomputed = tuple(
            sign_exact(ln.normal[0] * c.representative[0] + ln.normal[1] * c.representative[1] - ln.offset)
            for ln in lines
        )
        assert recomputed == c.sign_vector
        zeros = sum(1 for s in recomputed if s == 0)
        assert (c.dimension == 2) == (zeros == 0)


def test_cell_sign_consistency():
    _assert_cell_signs(four_lines())
    rng = random.Random(3)
    for name in WINDOWS:
        n, _, W = preset_window(name)
        _assert_cell_signs(build_arrangement(W, internal_points(name, 3, rng)))


def test_within_cell_constancy():
    rng = random.Random(5)
    nprng = np.random.default_rng(5)
    for name in WINDOWS:
        n, _, W = preset_window(name)
        P = internal_points(name, 4, rng)
        lines = build_arrangement(W, P)
        faces = {c.sign_vector for c in cell_representatives(lines) if c.dimension == 2}
        A = np.array([[ln.normal[0].approx_real(), ln.normal[1].approx_real()] for ln in lines])
        c = np.array([ln.offset.approx_real() for ln in lines])
        Pf = as_float(P)
        lo, hi = translation_box(W, Pf)
        T = nprng.uniform(lo, hi, size=(3000, 2))
        vals = T @ A.T - c[None, :]
        keep = np.all(np.abs(vals) > 1e-7, axis=1)
        Aw, bw = W.float_constraints()
        inside = np.all((Pf[None, :, :] - T[:, None, :]) @ Aw.T < bw, axis=2)
        seen = {}
        for sv, ins in zip(np.sign(vals[keep]).astype(int), inside[keep]):
            key = tuple(sv)
            assert key in faces
            seen.setdefault(key, set()).add(ins.tobytes())
        assert all(len(v) == 1 for v in seen.values())


# --- separation -------------------------------------------------------------------


def test_separate_examples():
    n, s, W = preset_window("ammann_beenker")
    zero = CycNum.zero(n)
    p = (zero, zero)
    assert separate(W, [p]).subsets() == {frozenset(), frozenset({0})}
    far = (CycNum.rational(n, 50), zero)
    assert separate(W, [p, far]).subsets() == {frozenset(), frozenset({0}), frozenset({1})}
    eps = CycNum.rational(n, Fraction(1, 10))
    cluster = [p, (eps, zero), (zero, eps)]
    fam = separate(W, cluster).subsets()
    assert frozenset({0, 1, 2}) in fam
    seen = sample_subsets(*W.float_constraints(), as_float(cluster), 20000, np.random.default_rng(0),
                          translation_box(W, as_float(cluster)))
    assert seen <= fam
    assert separate(W, []).subsets() == {frozenset()}


def test_size_constant():
    assert size_constant(8) == 129
    assert size_constant(12) == 289


@pytest.mark.parametrize("name", sorted(WINDOWS))
def test_soundness_completeness_size(name):
    n, _, W = preset_window(name)
    rng = random.Random(WINDOWS[name])
    nprng = np.random.default_rng(11)
    for q in (1, 4, 7):
        P = internal_points(name, q, rng)
        fam = separate(W, P)
        assert len(fam) <= size_constant(W.l) * q * q
        for idx, t in fam.members:
            assert subset_at(W, P, t) == idx
        Pf = as_float(P)
        seen = sample_subsets(*W.float_constraints(), Pf, 20000, nprng, translation_box(W, Pf))
        assert seen <= fam.subsets()


@pytest.mark.parametrize("name", sorted(WINDOWS))
def test_maximal_sets_match_full_family(name):
    n, _, W = preset_window(name)
    rng = random.Random(17)
    for q in (2, 5, 8):
        P = internal_points(name, q, rng)
        full = separate(W, P).subsets()
        maximal = {S for S in full if S and not any(S < T for T in full)}
        fam = maximal_separable_sets(W, P)
        assert fam.subsets() == maximal
        for idx, t in fam.members:
            assert subset_at(W, P, t) == idx


def test_degenerate_configuration():
    # tau = 0 for the decagon puts star images on boundaries of translates
    n, s, W = preset_window("tuebingen")
    pts = patch_points("tuebingen", 3)[:8]
    P = [star_coordinates(s, z) for z in pts]
    fam = separate(W, P)
    for idx, t in fam.members:
        assert subset_at(W, P, t) == idx
    maximal = {S for S in fam.subsets() if S and not any(S < T for T in fam.subsets())}
    assert maximal_separable_sets(W, P).subsets() == maximal


def test_family_json():
    n, s, W = preset_window("shield")
    P = internal_points("shield", 3, random.Random(1))
    doc = separate(W, P).to_json()
    assert all(set(m) == {"indices", "witness"} for m in doc)
    for m in doc:
        t = tuple(CycNum.from_list(n, c) for c in m["witness"])
        assert list(subset_at(W, P, t)) == m["indices"]


def test_window_fit_oracle_agrees_with_cells():
    from helpers import fits_open_window

    rng = random.Random(23)
    for name in WINDOWS:
        n, s, W = preset_window(name)
        pts = patch_points(name, 4)
        for _ in range(15):
            F = rng.sample(pts, rng.randint(1, 4))
            P = [star_coordinates(s, z - F[0]) for z in F]
            assert fits_open_window(W, P) == (frozenset(range(len(P))) in separate(W, P).subsets())
