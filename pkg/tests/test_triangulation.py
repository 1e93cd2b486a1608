import random
from fractions import Fraction
from itertools import combinations

import pytest

from tropcay.errors import GroupBoundError
from tropcay.exactarith import solve_general
from tropcay.geometry import (
    PointConfiguration,
    cayley_config,
    normalized_volume,
    regular_subdivision,
    simplex_lattice_points,
)
from tropcay.triangulation import (
    SymmetryGroup,
    Triangulation,
    apply_symmetry,
    builtin_symmetry,
    certify_affine_action,
    flip_engine,
    flips,
    is_regular,
    is_unimodular,
    orbit_canonical_rep,
    placing_triangulation,
    validate_triangulation,
)


def square_config():
    return PointConfiguration(2, ((0, 0), (1, 0), (0, 1), (1, 1)), ("A", "B", "C", "D"))


def square_left():
    return Triangulation.make(square_config(), [(0, 1, 2), (1, 2, 3)])


def square_right():
    return Triangulation.make(square_config(), [(0, 1, 3), (0, 2, 3)])


def cubic_polygon():
    return simplex_lattice_points(2, 3)


def point_index(cfg, coords):
    return cfg.points.index(tuple(coords))


def triangulation_from_coords(cfg, triangles):
    cells = [tuple(point_index(cfg, p) for p in tri) for tri in triangles]
    return Triangulation.make(cfg, cells)


def rotated_pair():
    """Two hand-checked unimodular triangulations of the cubic polygon that
    differ by a rotation of the triangle."""
    cfg = cubic_polygon()
    left = triangulation_from_coords(cfg, [
        [(0, 3), (0, 2), (1, 2)],
        [(0, 1), (0, 2), (1, 2)],
        [(0, 1), (1, 1), (1, 2)],
        [(1, 1), (1, 2), (2, 1)],
        [(0, 0), (0, 1), (1, 0)],
        [(0, 1), (1, 0), (1, 1)],
        [(1, 0), (1, 1), (2, 1)],
        [(1, 0), (2, 0), (2, 1)],
        [(2, 0), (3, 0), (2, 1)],
    ])
    right = triangulation_from_coords(cfg, [
        [(0, 3), (0, 2), (1, 2)],
        [(0, 2), (1, 2), (1, 1)],
        [(0, 2), (1, 1), (1, 0)],
        [(0, 2), (0, 1), (1, 0)],
        [(0, 0), (0, 1), (1, 0)],
        [(1, 0), (1, 1), (2, 0)],
        [(1, 1), (1, 2), (2, 0)],
        [(2, 0), (2, 1), (1, 2)],
        [(2, 0), (3, 0), (2, 1)],
    ])
    return cfg, left, right


def nested_triangles():
    """The classic twisted 6-point triangulation that is not regular."""
    cfg = PointConfiguration(
        2,
        ((0, 0), (4, 0), (0, 4), (1, 1), (2, 1), (1, 2)),
        ("A", "B", "C", "a", "b", "c"),
    )
    t = Triangulation.make(cfg, [
        (0, 1, 4), (0, 3, 4), (1, 2, 5), (1, 4, 5), (0, 2, 3), (2, 3, 5), (3, 4, 5),
    ])
    return cfg, t


def test_unimodular_square_split():
    assert is_unimodular(square_left())
    assert is_unimodular(square_right())


def test_unimodular_fails_on_coarse_cell():
    cfg = simplex_lattice_points(2, 2)
    corners = tuple(i for i, p in enumerate(cfg.points) if sorted(p) in ([0, 0], [0, 2]))
    t = Triangulation.make(cfg, [corners])
    assert not is_unimodular(t)
    assert normalized_volume(cfg, corners) == 4


def test_placing_three_points():
    cfg = PointConfiguration(2, ((0, 0), (2, 0), (0, 3)), ("A", "B", "C"))
    t = placing_triangulation(cfg)
    assert t.cells == ((0, 1, 2),)


def test_placing_square_corner_order():
    t = placing_triangulation(square_config())
    assert len(t.cells) == 2
    assert validate_triangulation(t)


def test_placing_cubic_polygon_is_valid():
    t = placing_triangulation(cubic_polygon())
    assert sum(normalized_volume(t.configuration, c) for c in t.cells) == 9
    assert validate_triangulation(t)


def test_placing_cayley_volume_conservation():
    cfg = cayley_config(simplex_lattice_points(3, 2), simplex_lattice_points(3, 2))
    t = placing_triangulation(cfg)
    assert sum(normalized_volume(cfg, c) for c in t.cells) == 32
    assert validate_triangulation(t)


def test_placing_respects_order_override():
    cfg = square_config()
    t1 = placing_triangulation(cfg, order=[0, 1, 2, 3])
    t2 = placing_triangulation(cfg, order=[3, 1, 2, 0])
    assert validate_triangulation(t1) and validate_triangulation(t2)


def test_flips_square_single_flip_other_diagonal():
    t = square_left()
    result = flips(t)
    assert len(result) == 1
    flip, other = result[0]
    assert other.cells == square_right().cells
    back = flips(other)
    assert len(back) == 1
    assert back[0][1].cells == t.cells
    assert back[0][0] == flip.reversed()


def test_flips_single_triangle_has_none():
    cfg = PointConfiguration(2, ((0, 0), (1, 0), (0, 1)), ("A", "B", "C"))
    t = placing_triangulation(cfg)
    assert flips(t) == []


def test_flip_insertion_and_removal_of_interior_point():
    cfg = PointConfiguration(2, ((0, 0), (2, 0), (0, 2), (1, 1), (2, 2)), ("A", "B", "C", "D", "E"))
    coarse = Triangulation.make(cfg, [(0, 1, 2), (1, 2, 4)])
    result = flips(coarse)
    insertions = [(f, t2) for f, t2 in result if len(f.plus) == 1]
    assert insertions, "expected an insertion flip for the unused interior point"
    for f, t2 in insertions:
        assert validate_triangulation(t2)
        reverse = [(g, t3) for g, t3 in flips(t2) if g == f.reversed()]
        assert len(reverse) == 1
        assert reverse[0][1].cells == coarse.cells


def test_flips_neighbors_are_valid_and_involutive():
    t = placing_triangulation(cubic_polygon())
    for flip, nb in flips(t):
        assert validate_triangulation(nb, pairwise=False)
        back = [t2 for g, t2 in flips(nb) if g == flip.reversed()]
        assert len(back) == 1 and back[0].cells == t.cells


def test_placing_triangulation_is_regular_with_roundtrip():
    for cfg in (square_config(), cubic_polygon()):
        t = placing_triangulation(cfg)
        w = is_regular(t)
        assert w is not None
        sub = regular_subdivision(cfg, w)
        assert sub.cells == t.cells


def test_both_square_diagonals_are_regular():
    for t in (square_left(), square_right()):
        w = is_regular(t)
        assert w is not None
        assert regular_subdivision(t.configuration, w).cells == t.cells


def test_nested_triangles_not_regular():
    cfg, t = nested_triangles()
    assert validate_triangulation(t)
    assert is_regular(t) is None
    assert is_regular(t, mode="local") is None
    assert is_regular(t, use_float=False) is None


def test_nested_triangles_infeasibility_certificate_by_brute_force():
    # Independent oracle: exhaustively search the dual system
    # {y >= 0, sum y = 1, y^T A = 0} over all supports.
    cfg, t = nested_triangles()
    engine = flip_engine(cfg)
    rows = engine.regularity_rows(engine.to_masks(t.cells), mode="local")
    m = len(rows)
    n = len(rows[0])
    certificate = None
    for size in range(1, min(m, n + 1) + 1):
        for support in combinations(range(m), size):
            cols = [[Fraction(rows[i][j]) for i in support] for j in range(n)]
            cols.append([Fraction(1)] * size)
            y = solve_general(cols, [Fraction(0)] * n + [Fraction(1)])
            if y is None or any(v < 0 for v in y):
                continue
            full = [Fraction(0)] * m
            for k, i in enumerate(support):
                full[i] = y[k]
            if all(sum(full[i] * rows[i][j] for i in range(m)) == 0 for j in range(n)):
                certificate = full
                break
        if certificate:
            break
    assert certificate is not None


def test_local_and_global_regularity_agree():
    rng = random.Random(3)
    cfg = cubic_polygon()
    seen = [placing_triangulation(cfg)]
    for _ in range(12):
        t = seen[rng.randrange(len(seen))]
        nbs = flips(t)
        if nbs:
            seen.append(nbs[rng.randrange(len(nbs))][1])
    cfg2, twisted = nested_triangles()
    cases = seen + [twisted]
    for t in cases:
        wg = is_regular(t, mode="global")
        wl = is_regular(t, mode="local")
        assert (wg is None) == (wl is None)
        for w in (wg, wl):
            if w is not None:
                assert regular_subdivision(t.configuration, w).cells == t.cells


def test_builtin_symmetry_orders():
    cfg22 = cayley_config(simplex_lattice_points(3, 2), simplex_lattice_points(3, 2))
    assert len(builtin_symmetry("cayley-2d3-2d3", cfg22)) == 48
    assert len(builtin_symmetry("simplex-3d2", cubic_polygon())) == 6
    assert len(builtin_symmetry("trivial", square_config())) == 1


def test_builtin_symmetry_rejects_wrong_configuration():
    with pytest.raises(ValueError):
        builtin_symmetry("simplex-3d2", square_config())


def test_certify_affine_action_rejects_non_affine_permutation():
    cfg = cubic_polygon()
    perm = list(range(10))
    perm[0], perm[1] = perm[1], perm[0]  # swap (0,0) and (0,1) only
    with pytest.raises(ValueError):
        certify_affine_action(cfg, tuple(perm))


def test_group_bound_guard():
    cfg = cubic_polygon()
    gens = builtin_symmetry("simplex-3d2", cfg).generators
    with pytest.raises(GroupBoundError):
        SymmetryGroup.from_generators(cfg, gens, bound=3)


def test_apply_symmetry_identity_and_diagonal_swap():
    t = square_left()
    # (x, y) -> (1 - x, y) exchanges the two diagonals of the unit square.
    mirror = (1, 0, 3, 2)
    identity = tuple(range(4))
    assert apply_symmetry(t, identity).cells == t.cells
    swapped = apply_symmetry(t, mirror)
    assert swapped.cells == square_right().cells
    assert is_unimodular(swapped)


def test_apply_symmetry_preserves_unimodularity():
    cfg = cubic_polygon()
    grp = builtin_symmetry("simplex-3d2", cfg)
    t = placing_triangulation(cfg)
    assert is_unimodular(t)
    for g in grp.elements:
        assert is_unimodular(apply_symmetry(t, g))


def test_orbit_canonical_rep_trivial_group():
    t = square_left()
    grp = builtin_symmetry("trivial", square_config())
    assert orbit_canonical_rep(t, grp).cells == t.cells


def test_orbit_canonical_rep_identifies_orbit_members():
    cfg = square_config()
    grp = SymmetryGroup.from_generators(cfg, [(1, 0, 3, 2)])
    r1 = orbit_canonical_rep(square_left(), grp)
    r2 = orbit_canonical_rep(square_right(), grp)
    assert r1.cells == r2.cells


def test_orbit_rep_invariant_under_group_action():
    cfg = cubic_polygon()
    grp = builtin_symmetry("simplex-3d2", cfg)
    t = placing_triangulation(cfg)
    rep = orbit_canonical_rep(t, grp)
    for g in grp.elements:
        assert orbit_canonical_rep(apply_symmetry(t, g), grp).cells == rep.cells


def test_rotated_pair_same_orbit_and_unimodular():
    cfg, left, right = rotated_pair()
    assert is_unimodular(left) and is_unimodular(right)
    assert validate_triangulation(left) and validate_triangulation(right)
    assert is_regular(left) is not None and is_regular(right) is not None
    grp = builtin_symmetry("simplex-3d2", cfg)
    assert orbit_canonical_rep(left, grp).cells == orbit_canonical_rep(right, grp).cells


def test_rotated_pair_dual_curves_are_elliptic_cycle_four():
    from tropcay.graphs import canonical_form
    from tropcay.tropical import cycle_length, dual_curve_planar, genus

    cfg, left, right = rotated_pair()
    gl, gr = dual_curve_planar(left), dual_curve_planar(right)
    assert genus(gl) == 1 and genus(gr) == 1
    assert cycle_length(gl) == 4 and cycle_length(gr) == 4
    assert canonical_form(gl) == canonical_form(gr)


def test_symmetry_group_stores_certificates():
    cfg = cubic_polygon()
    grp = builtin_symmetry("simplex-3d2", cfg)
    assert len(grp.certificates) == len(grp.generators)
    for (matrix, offset), perm in zip(grp.certificates, grp.generators):
        pts = cfg.points
        r = len(matrix)
        for i, p in enumerate(pts):
            image = tuple(
                sum(p[j] * matrix[j][k] for j in range(r)) + offset[k] for k in range(r)
            )
            assert image == pts[perm[i]]


def test_validate_rejects_overlapping_cells():
    cfg = square_config()
    bad = Triangulation.make(cfg, [(0, 1, 2), (0, 1, 3)])
    assert not validate_triangulation(bad)


def test_validate_rejects_incomplete_cover():
    cfg = cubic_polygon()
    t = placing_triangulation(cfg)
    partial = Triangulation.make(cfg, t.cells[:-1])
    assert not validate_triangulation(partial)
