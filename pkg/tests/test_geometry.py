import random
from fractions import Fraction
from math import comb

import pytest

from tropcay.errors import DegenerateConfigurationError
from tropcay.geometry import (
    PointConfiguration,
    WeightVector,
    affine_reduce,
    block_labels,
    cayley_config,
    normalized_volume,
    placing_cells,
    regular_subdivision,
    simplex_lattice_points,
)


def square_config():
    return PointConfiguration(2, ((0, 0), (1, 0), (0, 1), (1, 1)), ("A", "B", "C", "D"))


def test_simplex_lattice_points_tetrahedron_vertices():
    cfg = simplex_lattice_points(3, 1)
    assert cfg.points == ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))


def test_simplex_lattice_points_2delta3_count():
    cfg = simplex_lattice_points(3, 2)
    assert len(cfg) == 10


def test_simplex_lattice_points_cubic_polygon():
    cfg = simplex_lattice_points(2, 3)
    assert len(cfg) == 10
    interior = [p for p in cfg.points if p[0] > 0 and p[1] > 0 and sum(p) < 3]
    assert interior == [(1, 1)]


@pytest.mark.parametrize("dim,dilation", [(1, 1), (2, 2), (3, 2), (4, 3), (2, 5)])
def test_simplex_lattice_points_binomial_count(dim, dilation):
    cfg = simplex_lattice_points(dim, dilation)
    assert len(cfg) == comb(dim + dilation, dim)


def test_simplex_lattice_points_graded_lex_order():
    cfg = simplex_lattice_points(2, 3)
    keys = [(sum(p), p) for p in cfg.points]
    assert keys == sorted(keys)


def test_block_labels_extension_scheme():
    labels = block_labels(28)
    assert labels[0] == "A" and labels[25] == "Z"
    assert labels[26] == "A1" and labels[27] == "B1"
    assert len(set(labels)) == 28


def test_cayley_of_two_quadric_tetrahedra():
    cfg = cayley_config(simplex_lattice_points(3, 2), simplex_lattice_points(3, 2))
    assert len(cfg) == 20
    assert cfg.ambient_dim == 5
    assert cfg.affine_dim() == 4
    assert cfg.labels[:3] == ("A", "B", "C")
    assert cfg.labels[10:13] == ("a", "b", "c")
    vertices = [
        p for p in cfg.points
        if sorted(p[2:]) in ([0, 0, 0], [0, 0, 2])
    ]
    assert len(vertices) == 8


def test_cayley_mixed_degrees():
    cfg = cayley_config(simplex_lattice_points(3, 2), simplex_lattice_points(3, 1))
    assert len(cfg) == 14
    assert cfg.cayley_sizes == (10, 4)


def test_cayley_of_segments_is_square():
    seg = simplex_lattice_points(1, 1)
    cfg = cayley_config(seg, seg)
    assert len(cfg) == 4
    assert cfg.affine_dim() == 2


def test_affine_reduce_diagonal_segment():
    cfg = PointConfiguration(2, ((0, 0), (1, 1)), ("A", "B"))
    red, transform = affine_reduce(cfg)
    assert red.ambient_dim == 1
    assert red.points == ((0,), (1,))
    assert transform.lift((1,)) == (1, 1)


def test_affine_reduce_cayley_rank_four():
    cfg = cayley_config(simplex_lattice_points(3, 2), simplex_lattice_points(3, 2))
    red, _ = affine_reduce(cfg)
    assert red.ambient_dim == 4
    assert len(red.points) == 20


def test_affine_reduce_full_dimensional_is_identity():
    cfg = square_config()
    red, transform = affine_reduce(cfg)
    assert transform.is_identity
    assert red.points == cfg.points


def test_affine_reduce_single_point_raises():
    cfg = PointConfiguration(2, ((0, 0),), ("A",))
    with pytest.raises(DegenerateConfigurationError):
        affine_reduce(cfg)


def test_normalized_volume_unit_simplex():
    cfg = simplex_lattice_points(2, 1)
    assert normalized_volume(cfg) == 1
    assert normalized_volume(cfg, (0, 1, 2)) == 1


def test_normalized_volume_cayley_quadrics_is_32():
    cfg = cayley_config(simplex_lattice_points(3, 2), simplex_lattice_points(3, 2))
    assert normalized_volume(cfg) == 32


def test_normalized_volume_4delta3_is_64():
    assert normalized_volume(simplex_lattice_points(3, 4)) == 64


def test_normalized_volume_3delta2_is_9():
    assert normalized_volume(simplex_lattice_points(2, 3)) == 9


def test_normalized_volume_lower_dimensional_cell_is_zero():
    cfg = square_config()
    assert normalized_volume(cfg, (0, 1)) == 0


def test_normalized_volume_respects_configuration_lattice():
    # Cell of the coarse corners inside the 2*Delta_2 configuration: volume 4.
    cfg = simplex_lattice_points(2, 2)
    corners = tuple(i for i, p in enumerate(cfg.points) if sorted(p) in ([0, 0], [0, 2]))
    assert len(corners) == 3
    assert normalized_volume(cfg, corners) == 4


def test_placing_cells_triangle():
    cells = placing_cells([(0, 0), (1, 0), (0, 1)])
    assert cells == [(0, 1, 2)]


def test_placing_cells_square_corner_order():
    cells = placing_cells([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(cells) == 2
    assert all(len(c) == 3 for c in cells)


def test_regular_subdivision_flat_lift_is_trivial():
    cfg = square_config()
    sub = regular_subdivision(cfg, WeightVector.of([0, 0, 0, 0]))
    assert sub.cells == ((0, 1, 2, 3),)


def test_regular_subdivision_lifted_corner_splits_square():
    cfg = square_config()
    sub = regular_subdivision(cfg, WeightVector.of([1, 0, 0, 0]))
    assert sub.cells == ((0, 1, 2), (1, 2, 3))


def test_regular_subdivision_translation_invariance():
    cfg = simplex_lattice_points(2, 2)
    rng = random.Random(5)
    w = [Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(len(cfg))]
    base = regular_subdivision(cfg, WeightVector.of(w))
    shifted = regular_subdivision(cfg, WeightVector.of([x + Fraction(7, 3) for x in w]))
    assert base.cells == shifted.cells


def test_regular_subdivision_certificate_property():
    # Every lower-hull cell excludes outside points strictly: re-verify by
    # solving for each cell functional independently.
    from tropcay.exactarith import solve_rational

    cfg = simplex_lattice_points(2, 2)
    rng = random.Random(11)
    for _ in range(10):
        w = [Fraction(rng.randint(0, 9)) for _ in range(len(cfg))]
        sub = regular_subdivision(cfg, WeightVector.of(w))
        volumes = []
        for cell in sub.cells:
            if len(cell) == 3:
                volumes.append(normalized_volume(cfg, cell))
            support = list(cell)[:3]
            rows = [list(cfg.points[i]) + [1] for i in support]
            sol = solve_rational(rows, [w[i] for i in support])
            assert sol is not None
            for q in range(len(cfg)):
                val = sol[0] * cfg.points[q][0] + sol[1] * cfg.points[q][1] + sol[2]
                if q in cell:
                    assert val == w[q]
                else:
                    assert val < w[q]
        if all(len(c) == 3 for c in sub.cells):
            assert sum(volumes) == normalized_volume(cfg)


def test_regular_subdivision_of_segment_with_kink():
    cfg = PointConfiguration(1, ((0,), (1,), (2,)), ("A", "B", "C"))
    sub = regular_subdivision(cfg, WeightVector.of([0, 0, 1]))
    assert sub.cells == ((0, 1), (1, 2))
    sub2 = regular_subdivision(cfg, WeightVector.of([0, 1, 0]))
    assert sub2.cells == ((0, 2),)
