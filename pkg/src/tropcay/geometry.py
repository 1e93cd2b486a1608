"""Lattice point configurations, Cayley construction, and regular subdivisions.

Coordinates are integer lattice points; all derived data (affine reduction,
volumes, lower hulls) is computed exactly.  A configuration may sit on a
proper affine sublattice of its ambient space (the Cayley configuration is
4-dimensional inside R^5); volumes and subdivisions are always taken
relative to the affine lattice actually spanned by the points.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd

from .errors import DegenerateConfigurationError
from .exactarith import (
    coords_in_row_basis,
    det_int,
    kernel_vector_int,
    lattice_row_basis,
    parse_rational,
    solve_general,
    solve_rational,
)


def block_labels(count: int, lowercase: bool = False) -> tuple[str, ...]:
    """Labels A..Z, then A1, B1, ... (lowercase variant for second factors)."""
    base = string.ascii_lowercase if lowercase else string.ascii_uppercase
    out = []
    for i in range(count):
        if i < 26:
            out.append(base[i])
        else:
            out.append(base[i % 26] + str(i // 26))
    return tuple(out)


@dataclass(frozen=True)
class PointConfiguration:
    """Labeled integer lattice points spanning a polytope."""

    ambient_dim: int
    points: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    cayley_sizes: tuple[int, int] | None = None

    def __post_init__(self):
        if len(self.points) == 0:
            raise DegenerateConfigurationError("configuration needs at least one point")
        for p in self.points:
            if len(p) != self.ambient_dim:
                raise ValueError(f"point {p} does not have ambient dimension {self.ambient_dim}")
            if not all(isinstance(x, int) for x in p):
                raise ValueError(f"point {p} has non-integer coordinates")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")
        if len(self.labels) != len(self.points):
            raise ValueError("labels must be in bijection with points")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        if self.cayley_sizes is not None:
            n1, n2 = self.cayley_sizes
            if n1 + n2 != len(self.points):
                raise ValueError("cayley factor sizes do not sum to the point count")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_cayley(self) -> bool:
        return self.cayley_sizes is not None

    def index_of_label(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None

    def affine_dim(self) -> int:
        if len(self.points) < 2:
            return 0
        return len(_reduction(self)[1].basis)

    def key(self) -> tuple:
        """Hashable identity used for caching derived structures."""
        return (self.ambient_dim, self.points, self.labels, self.cayley_sizes)


@dataclass(frozen=True)
class WeightVector:
    """One rational lifting height per configuration point."""

    heights: tuple[Fraction, ...]

    @classmethod
    def of(cls, values) -> "WeightVector":
        return cls(tuple(parse_rational(v) for v in values))

    def __len__(self) -> int:
        return len(self.heights)


@dataclass(frozen=True)
class Subdivision:
    """Maximal cells (sorted point-index tuples) of a polyhedral subdivision."""

    configuration: PointConfiguration
    cells: tuple[tuple[int, ...], ...]

    def is_triangulation(self) -> bool:
        want = self.configuration.affine_dim() + 1
        return all(len(c) == want for c in self.cells)


@dataclass(frozen=True)
class AffineTransform:
    """Record of an affine lattice reduction: new = coords of (p - origin) in basis."""

    origin: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def is_identity(self) -> bool:
        n = len(self.origin)
        if any(x != 0 for x in self.origin) or len(self.basis) != n:
            return False
        return all(
            all(row[j] == (1 if j == i else 0) for j in range(n))
            for i, row in enumerate(self.basis)
        )

    def lift(self, reduced_point) -> tuple[int, ...]:
        """Map reduced coordinates back to the original ambient space."""
        out = list(self.origin)
        for c, row in zip(reduced_point, self.basis):
            for j, v in enumerate(row):
                out[j] += c * v
        return tuple(out)


def simplex_lattice_points(dim: int, dilation: int) -> PointConfiguration:
    """All integer points x >= 0 with sum(x) <= dilation, in graded-lex order.

    Graded lexicographic: sorted by coordinate sum first, then by the
    coordinate tuple itself.  This fixed order is what the letter labels
    (A, B, ...) refer to throughout the package.
    """
    if dim < 1 or dilation < 1:
        raise ValueError("dim and dilation must be at least 1")
    pts = []

    def rec(prefix, remaining):
        if len(prefix) == dim:
            pts.append(tuple(prefix))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v)

    rec([], dilation)
    pts.sort(key=lambda p: (sum(p), p))
    assert len(pts) == comb(dilation + dim, dim)
    return PointConfiguration(dim, tuple(pts), block_labels(len(pts)))


def cayley_config(p1: PointConfiguration, p2: PointConfiguration) -> PointConfiguration:
    """Cayley configuration: p -> (1,0,p) for p1, q -> (0,1,q) for p2.

    First-factor points get uppercase labels, second-factor lowercase, each
    block in its input order.
    """
    if p1.ambient_dim != p2.ambient_dim:
        raise ValueError("factors must share an ambient dimension")
    n = p1.ambient_dim
    pts = [(1, 0) + p for p in p1.points] + [(0, 1) + q for q in p2.points]
    labels = block_labels(len(p1.points)) + block_labels(len(p2.points), lowercase=True)
    return PointConfiguration(2 + n, tuple(pts), labels, cayley_sizes=(len(p1.points), len(p2.points)))


def _compute_reduction(config: PointConfiguration) -> tuple[PointConfiguration, AffineTransform]:
    if len(config.points) < 2:
        raise DegenerateConfigurationError("affine reduction needs at least two points")
    origin = config.points[0]
    diffs = [[p[j] - origin[j] for j in range(config.ambient_dim)] for p in config.points[1:]]
    basis = lattice_row_basis(diffs)
    if not basis:
        raise DegenerateConfigurationError("points have no affine extent")

    # If the difference lattice is all of Z^d, keep coordinates untouched.
    if len(basis) == config.ambient_dim:
        unit = [[1 if j == i else 0 for j in range(config.ambient_dim)] for i in range(config.ambient_dim)]
        if all(coords_in_row_basis(basis, row) is not None for row in unit):
            transform = AffineTransform(
                (0,) * config.ambient_dim,
                tuple(tuple(r) for r in unit),
            )
            return config, transform

    new_points = []
    for p in config.points:
        diff = [p[j] - origin[j] for j in range(config.ambient_dim)]
        coords = coords_in_row_basis(basis, diff)
        assert coords is not None, "point escaped its own difference lattice"
        new_points.append(tuple(coords))
    reduced = PointConfiguration(
        len(basis), tuple(new_points), config.labels, config.cayley_sizes
    )
    return reduced, AffineTransform(origin, tuple(tuple(r) for r in basis))


@lru_cache(maxsize=256)
def _reduction_cached(key):
    ambient_dim, points, labels, cayley_sizes = key
    config = PointConfiguration(ambient_dim, points, labels, cayley_sizes)
    return _compute_reduction(config)


def _reduction(config: PointConfiguration) -> tuple[PointConfiguration, AffineTransform]:
    return _reduction_cached(config.key())


def affine_reduce(config: PointConfiguration) -> tuple[PointConfiguration, AffineTransform]:
    """Full-dimensional coordinates in the affine lattice spanned by the points.

    Lattice volume is preserved: the new coordinates are taken with respect
    to a Z-basis (Hermite-style) of the difference lattice.  The transform
    record maps reduced coordinates back to the original ambient space; cell
    index tuples are unaffected by the reduction.
    """
    return _reduction(config)


def reduced_points(config: PointConfiguration) -> tuple[tuple[int, ...], ...]:
    return _reduction(config)[0].points


def _simplex_volume(pts, cell) -> int:
    base = pts[cell[0]]
    rows = [[pts[i][j] - base[j] for j in range(len(base))] for i in cell[1:]]
    return abs(det_int(rows))


def normalized_volume(config: PointConfiguration, cell=None) -> int:
    """Lattice-normalized volume of a cell (or of the whole configuration).

    The volume is relative to the affine lattice spanned by the whole
    configuration.  Cells spanning fewer dimensions get volume 0.  Cells
    with more points than a simplex are measured through their placing
    triangulation.
    """
    reduced, _ = _reduction(config)
    pts = reduced.points
    rank = reduced.ambient_dim
    indices = tuple(range(len(pts))) if cell is None else tuple(cell)
    if len(set(indices)) != len(indices):
        raise ValueError("cell has repeated point indices")
    if len(indices) <= rank:
        return 0
    if len(indices) == rank + 1:
        return _simplex_volume(pts, indices)
    cells = placing_cells([pts[i] for i in indices])
    if cells is None:  # sub-configuration spans a lower dimension
        return 0
    if any(len(c) != rank + 1 for c in cells):
        return 0
    return sum(_simplex_volume(pts, tuple(indices[i] for i in c)) for c in cells)


def _functional_through(rows):
    """Primitive integer functional vanishing on all given (coord..., 1) rows."""
    ncols = len(rows[0])
    cols = [tuple(r[j] for r in rows) for j in range(ncols)]
    return kernel_vector_int(cols)


def placing_cells(points, order=None):
    """Placing triangulation of a list of points (exact beneath-beyond).

    Points are inserted in the given order; each either extends the hull
    (cone over strictly visible boundary facets, or over every cell when it
    leaves the current affine span) or is skipped.  Returns the maximal
    cells as sorted index tuples over ``points``, or ``None`` when all
    points coincide affinely (nothing to triangulate).

    Coordinates may be integers or rationals; only the affine structure is
    used, so this works inside coordinate charts as well.
    """
    n = len(points)
    if n == 0:
        return None
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of all point indices")

    dim_ambient = len(points[0])
    basis: list[list[Fraction]] = []
    chart: dict[int, tuple[Fraction, ...]] = {}
    first = order[0]
    origin = [Fraction(x) for x in points[first]]
    chart[first] = ()
    cells: set[frozenset[int]] = {frozenset([first])}

    for idx in order[1:]:
        diff = [Fraction(points[idx][j]) - origin[j] for j in range(dim_ambient)]
        coords = None
        if basis:
            a_rows = [[basis[k][j] for k in range(len(basis))] for j in range(dim_ambient)]
            coords = solve_general(a_rows, diff)
        elif all(d == 0 for d in diff):
            coords = []
        if coords is None:
            # Point extends the affine span: cone it over every current cell.
            basis.append(diff)
            chart = {i: c + (Fraction(0),) for i, c in chart.items()}
            chart[idx] = (Fraction(0),) * (len(basis) - 1) + (Fraction(1),)
            cells = {c | {idx} for c in cells}
            continue
        chart[idx] = tuple(coords)
        rank = len(basis)
        if rank == 0:
            continue  # duplicate of the origin cannot occur (points distinct)
        # Boundary facets: used by exactly one cell; remember that cell's apex.
        facet_owner: dict[frozenset[int], list[int]] = {}
        for cell in cells:
            for v in cell:
                f = cell - {v}
                facet_owner.setdefault(f, []).append(v)
        added = set()
        for facet, apexes in facet_owner.items():
            if len(apexes) != 1:
                continue
            rows = [tuple(chart[i]) + (Fraction(1),) for i in sorted(facet)]
            func = _functional_through(rows)
            assert func is not None
            apex_val = sum(f * c for f, c in zip(func, chart[apexes[0]] + (Fraction(1),)))
            new_val = sum(f * c for f, c in zip(func, chart[idx] + (Fraction(1),)))
            assert apex_val != 0
            if new_val != 0 and (new_val > 0) != (apex_val > 0):
                added.add(facet | {idx})
        cells |= added

    if not basis:
        return None
    want = len(basis) + 1
    assert all(len(c) == want for c in cells)
    return sorted(tuple(sorted(c)) for c in cells)


def regular_subdivision(config: PointConfiguration, w: WeightVector) -> Subdivision:
    """Regular subdivision induced by lifting heights: project the lower hull.

    A maximal cell is the full set of points lying on a lower-facet
    functional of the lifted configuration; points lifted strictly above a
    lower facet are excluded from its cell.  Exhaustive search over
    spanning subsets, exact arithmetic throughout.
    """
    if len(w) != len(config.points):
        raise ValueError("weight vector length must match the point count")
    reduced, _ = _reduction(config)
    pts = reduced.points
    n = len(pts)
    rank = reduced.ambient_dim

    mult = 1
    for h in w.heights:
        mult = mult * h.denominator // gcd(mult, h.denominator)
    heights = [int(h * mult) for h in w.heights]

    found: list[set[int]] = []
    cells: set[tuple[int, ...]] = set()
    for subset in combinations(range(n), rank + 1):
        sset = set(subset)
        if any(sset <= c for c in found):
            continue
        rows = [list(pts[i]) + [1] for i in subset]
        rhs = [heights[i] for i in subset]
        sol = solve_rational(rows, rhs)
        if sol is None:
            continue  # affinely dependent subset
        # Scale the functional to integers: ell(p) = (a.p + c) / den
        denom = 1
        for v in sol:
            denom = denom * v.denominator // gcd(denom, v.denominator)
        a = [int(v * denom) for v in sol[:-1]]
        c0 = int(sol[-1] * denom)
        lower = True
        eq = []
        for q in range(n):
            val = sum(ai * pq for ai, pq in zip(a, pts[q])) + c0
            hq = heights[q] * denom
            if val > hq:
                lower = False
                break
            if val == hq:
                eq.append(q)
        if lower:
            cell = tuple(eq)
            if cell not in cells:
                cells.add(cell)
                found.append(set(cell))
    return Subdivision(config, tuple(sorted(cells)))
