"""Exact discrete tomography of planar cyclotomic model sets."""

from .cyclotomic import (
    CycNum,
    CycPoly,
    GaloisMap,
    StarMap,
    conjugate,
    cyclotomic_polynomial,
    embed,
    galois_apply,
    inverse,
    is_in_On,
    is_real,
    phi,
    sign_exact,
    split_real_imag_basis,
    star,
    star_coordinates,
    zeta,
)
from .grid import build_grid, decompose, intersect_lines, module_index
from .modelset import (
    ModelSetSpec,
    Patch,
    Window,
    generate_patch,
    genericity_check,
    membership,
    polygon_window,
    preset_spec,
    preset_window,
    window_contains,
)
from .separation import cell_representatives, maximal_separable_sets, separate
from .tomography import Status, consistency, reconstruct, uniqueness
from .xray import Direction, XRayInstance, compute_xray, line_key, make_instance, validate_instance

__version__ = "0.1.0"
