"""Triangulations: predicates, placing construction, bistellar flips, symmetry.

The public types work with sorted index tuples.  A per-configuration
``FlipEngine`` carries the exact geometric caches (cell volumes, circuit
dependencies, barycentric coordinates) and a fast bitmask representation
of triangulations; the enumeration module drives the engine directly,
while the functions here wrap it for one-off use.

Regularity is decided exactly.  Two equivalent strict systems are
available: the reference formulation with one inequality per (cell,
outside point) pair, and a smaller local one with one inequality per
interior wall plus conditions for unused points.  Both are certified by
exact arithmetic; tests cross-check them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateConfigurationError, GroupBoundError
from .exactarith import (
    det_int,
    kernel_vector_int,
    nullspace_basis,
    rank_int,
    solve_rational,
)
from .geometry import (
    PointConfiguration,
    Subdivision,
    WeightVector,
    _reduction,
    normalized_volume,
    placing_cells,
    regular_subdivision,
    simplex_lattice_points,
)
from .lp import strict_homogeneous_feasible


@dataclass(frozen=True)
class Triangulation:
    """A set of maximal simplex cells (sorted index tuples) over a configuration."""

    configuration: PointConfiguration
    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, configuration: PointConfiguration, cells) -> "Triangulation":
        normalized = tuple(sorted(tuple(sorted(c)) for c in cells))
        return cls(configuration, normalized)

    def __post_init__(self):
        n = len(self.configuration.points)
        want = self.configuration.affine_dim() + 1
        for cell in self.cells:
            if len(set(cell)) != len(cell):
                raise ValueError(f"cell {cell} repeats a point")
            if any(i < 0 or i >= n for i in cell):
                raise ValueError(f"cell {cell} refers to a missing point")
            if len(cell) != want:
                raise ValueError(
                    f"cell {cell} has {len(cell)} points, expected {want} for a simplex"
                )
        engine = flip_engine(self.configuration)
        for cell in self.cells:
            if engine.volume(engine.mask_of(cell)) == 0:
                raise ValueError(f"cell {cell} is affinely dependent")

    def used_points(self) -> tuple[int, ...]:
        used = set()
        for c in self.cells:
            used.update(c)
        return tuple(sorted(used))

    def is_full(self) -> bool:
        return len(self.used_points()) == len(self.configuration.points)

    def as_subdivision(self) -> Subdivision:
        return Subdivision(self.configuration, self.cells)


@dataclass(frozen=True)
class Flip:
    """A bistellar flip along a circuit, oriented from the present side."""

    plus: tuple[int, ...]   # circuit points whose opposite simplices are present
    minus: tuple[int, ...]  # circuit points of the replacement side

    def reversed(self) -> "Flip":
        return Flip(self.minus, self.plus)


class FlipEngine:
    """Exact flip/regularity machinery for one configuration.

    Triangulations are handled as sorted tuples of cell bitmasks (bit i is
    point i).  The induced total order on triangulations (lexicographic on
    the sorted mask sequence, i.e. colexicographic on cells) is the
    documented order used for canonical orbit representatives.
    """

    def __init__(self, config: PointConfiguration):
        self.config = config
        reduced, _ = _reduction(config)
        self.points = reduced.points
        self.n = len(self.points)
        self.rank = reduced.ambient_dim
        self.cell_size = self.rank + 1
        self.all_mask = (1 << self.n) - 1
        self._volume: dict[int, int] = {}
        self._dependence: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        self._bary: dict[tuple[int, int], tuple[tuple[int, ...], int]] = {}
        self._row: dict[tuple[int, int], tuple[int, ...]] = {}

    # -- mask plumbing -------------------------------------------------

    @staticmethod
    def bits(mask: int) -> tuple[int, ...]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    def mask_of(self, cell) -> int:
        m = 0
        for i in cell:
            m |= 1 << i
        return m

    def to_masks(self, cells) -> tuple[int, ...]:
        return tuple(sorted(self.mask_of(c) for c in cells))

    def to_cells(self, masks) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.bits(m) for m in masks))

    def triangulation(self, masks) -> Triangulation:
        return Triangulation.make(self.config, self.to_cells(masks))

    # -- exact geometry caches ----------------------------------------

    def volume(self, cellmask: int) -> int:
        v = self._volume.get(cellmask)
        if v is None:
            idx = self.bits(cellmask)
            base = self.points[idx[0]]
            rows = [[self.points[i][j] - base[j] for j in range(self.rank)] for i in idx[1:]]
            v = abs(det_int(rows))
            self._volume[cellmask] = v
        return v

    def dependence(self, mask: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Indices and coefficients of the unique affine dependence on a
        (rank+2)-point subset, as aligned tuples."""
        cached = self._dependence.get(mask)
        if cached is None:
            idx = self.bits(mask)
            cols = [self.points[i] + (1,) for i in idx]
            coeffs = kernel_vector_int(cols)
            assert coeffs is not None
            cached = (idx, coeffs)
            self._dependence[mask] = cached
        return cached

    def barycentric(self, cellmask: int, p: int) -> tuple[tuple[int, ...], int]:
        """Affine coordinates of point p in the given cell: (numerators, den>0)."""
        key = (cellmask, p)
        cached = self._bary.get(key)
        if cached is None:
            idx = self.bits(cellmask)
            base = self.points[idx[0]]
            a_rows = [
                [self.points[i][j] - base[j] for i in idx[1:]]
                for j in range(self.rank)
            ]
            rhs = [self.points[p][j] - base[j] for j in range(self.rank)]
            sol = solve_rational(a_rows, rhs)
            assert sol is not None, "triangulation cell is degenerate"
            den = 1
            for v in sol:
                den = den * v.denominator // gcd(den, v.denominator)
            nums = [int(v * den) for v in sol]
            mu0 = den - sum(nums)
            cached = (tuple([mu0] + nums), den)
            self._bary[key] = cached
        return cached

    # -- predicates ----------------------------------------------------

    def is_unimodular(self, masks) -> bool:
        return all(self.volume(m) == 1 for m in masks)

    def is_full(self, masks) -> bool:
        used = 0
        for m in masks:
            used |= m
        return used == self.all_mask

    def constraint_row(self, cellmask: int, p: int) -> tuple[int, ...]:
        """Integer row of: lifted p strictly above the span of the lifted cell."""
        key = (cellmask, p)
        cached = self._row.get(key)
        if cached is None:
            nums, den = self.barycentric(cellmask, p)
            row = [0] * self.n
            for i, num in zip(self.bits(cellmask), nums):
                row[i] -= num
            row[p] += den
            cached = tuple(row)
            self._row[key] = cached
        return cached

    def walls(self, masks):
        """Map interior facet mask -> (cell, cell); raises on non-complexes."""
        owners: dict[int, list[int]] = {}
        for cm in masks:
            rest = cm
            while rest:
                low = rest & -rest
                owners.setdefault(cm ^ low, []).append(cm)
                rest ^= low
        out = {}
        for fm, cs in owners.items():
            if len(cs) == 2:
                out[fm] = (cs[0], cs[1])
            elif len(cs) > 2:
                raise ValueError("facet shared by more than two cells: not a triangulation")
        return out

    def unused_points(self, masks) -> list[int]:
        used = 0
        for m in masks:
            used |= m
        return [i for i in range(self.n) if not (used >> i) & 1]

    def regularity_rows(self, masks, mode: str = "global") -> list[tuple[int, ...]]:
        rows = set()
        if mode == "global":
            for cm in masks:
                for p in range(self.n):
                    if not (cm >> p) & 1:
                        rows.add(self.constraint_row(cm, p))
        elif mode == "local":
            for fm, (sigma, tau) in self.walls(masks).items():
                apex_bit = tau & ~fm
                rows.add(self.constraint_row(sigma, apex_bit.bit_length() - 1))
            for p in self.unused_points(masks):
                for cm in masks:
                    nums, _den = self.barycentric(cm, p)
                    if all(v >= 0 for v in nums):
                        rows.add(self.constraint_row(cm, p))
        else:
            raise ValueError(f"unknown regularity mode {mode!r}")
        return sorted(rows)

    def is_regular(self, masks, mode: str = "global", use_float: bool = True):
        """Witness heights inducing exactly this triangulation, or ``None``."""
        rows = self.regularity_rows(masks, mode)
        feasible, witness = strict_homogeneous_feasible(rows, use_float=use_float)
        if not feasible:
            return None
        if not witness:
            witness = (Fraction(0),) * self.n
        return WeightVector(tuple(witness))

    # -- flips -----------------------------------------------------------

    def neighbors(self, masks):
        """All bistellar flips from this triangulation: (Flip, masks) pairs."""
        cellset = set(masks)
        results = []
        seen = set()

        def try_circuit(plus_mask, minus_mask):
            key = (plus_mask, minus_mask)
            if key in seen:
                return
            seen.add(key)
            circuit = plus_mask | minus_mask
            link = None
            stars = []
            rest = plus_mask
            while rest:
                low = rest & -rest
                rest ^= low
                s = circuit ^ low
                star = [cm for cm in masks if cm & s == s]
                ls = frozenset(cm & ~s for cm in star)
                if not ls or (link is not None and ls != link):
                    return
                if link is None:
                    if any(l & circuit for l in ls):
                        return
                    link = ls
                stars.append((s, star))
            removed = set()
            for _s, star in stars:
                removed.update(star)
            added = set()
            rest = minus_mask
            while rest:
                low = rest & -rest
                rest ^= low
                s = circuit ^ low
                for l in link:
                    added.add(s | l)
            new_masks = tuple(sorted((cellset - removed) | added))
            flip = Flip(self.bits(plus_mask), self.bits(minus_mask))
            results.append((flip, new_masks))

        for fm, (sigma, tau) in self.walls(masks).items():
            union = sigma | tau
            idx, coeffs = self.dependence(union)
            apex_bit = sigma & ~fm
            apex = apex_bit.bit_length() - 1
            c_apex = coeffs[idx.index(apex)]
            assert c_apex != 0
            if c_apex < 0:
                coeffs = tuple(-c for c in coeffs)
            plus_mask = 0
            minus_mask = 0
            for i, c in zip(idx, coeffs):
                if c > 0:
                    plus_mask |= 1 << i
                elif c < 0:
                    minus_mask |= 1 << i
            if minus_mask == 0:
                continue  # dependence with one-sided signs cannot occur on a wall
            try_circuit(plus_mask, minus_mask)

        for p in self.unused_points(masks):
            pbit = 1 << p
            for cm in masks:
                nums, _den = self.barycentric(cm, p)
                if any(v < 0 for v in nums):
                    continue
                minus_mask = 0
                for i, num in zip(self.bits(cm), nums):
                    if num > 0:
                        minus_mask |= 1 << i
                try_circuit(pbit, minus_mask)

        return results

    # -- symmetry ---------------------------------------------------------

    def relabel_tables(self, perm) -> list[list[int]]:
        """Chunked lookup tables mapping a cell mask through a point permutation."""
        chunks = (self.n + 7) // 8
        tables = []
        for c in range(chunks):
            table = [0] * 256
            for byte in range(256):
                m = 0
                b = byte
                while b:
                    low = b & -b
                    i = c * 8 + (low.bit_length() - 1)
                    if i < self.n:
                        m |= 1 << perm[i]
                    b ^= low
                table[byte] = m
            tables.append(table)
        return tables


class RelabelContext:
    """Cached group action on cell masks, used for canonical representatives.

    The representative of an orbit is the minimum relabeling in the
    engine's documented (colexicographic) order.  A cheap prefilter keeps
    only the group elements whose minimum relabeled cell already ties the
    best, so full sorting happens for a handful of candidates.
    """

    def __init__(self, engine: FlipEngine, elements):
        self.engine = engine
        self.elements = [tuple(g) for g in elements]
        self._tables = [engine.relabel_tables(g) for g in self.elements]
        self._cache: list[dict[int, int]] = [dict() for _ in self.elements]
        self._orbit_min: dict[int, tuple[int, tuple[int, ...]]] = {}

    def relabel_mask(self, gi: int, mask: int) -> int:
        cache = self._cache[gi]
        out = cache.get(mask)
        if out is None:
            tables = self._tables[gi]
            acc = 0
            m = mask
            c = 0
            while m:
                acc |= tables[c][m & 0xFF]
                m >>= 8
                c += 1
            cache[mask] = acc
            out = acc
        return out

    def relabel(self, gi: int, masks) -> tuple[int, ...]:
        return tuple(sorted(self.relabel_mask(gi, m) for m in masks))

    def orbit_min(self, mask: int) -> tuple[int, tuple[int, ...]]:
        """Smallest relabeling of one cell and the elements achieving it."""
        cached = self._orbit_min.get(mask)
        if cached is None:
            best = None
            achievers: list[int] = []
            for gi in range(len(self.elements)):
                v = self.relabel_mask(gi, mask)
                if best is None or v < best:
                    best = v
                    achievers = [gi]
                elif v == best:
                    achievers.append(gi)
            cached = (best, tuple(achievers))
            self._orbit_min[mask] = cached
        return cached

    def canonical(self, masks) -> tuple[int, ...]:
        # The first cell of the canonical form is the smallest orbit-min over
        # all cells; only elements realizing it can yield the minimum tuple.
        best_first = None
        candidates: list[int] = []
        for m in masks:
            v, achievers = self.orbit_min(m)
            if best_first is None or v < best_first:
                best_first = v
                candidates = list(achievers)
            elif v == best_first:
                candidates.extend(achievers)
        best = None
        for gi in set(candidates):
            cand = self.relabel(gi, masks)
            if best is None or cand < best:
                best = cand
        return best


_ENGINES: dict[tuple, FlipEngine] = {}


def flip_engine(config: PointConfiguration) -> FlipEngine:
    key = config.key()
    engine = _ENGINES.get(key)
    if engine is None:
        if len(_ENGINES) > 64:
            _ENGINES.clear()
        engine = FlipEngine(config)
        _ENGINES[key] = engine
    return engine


# -- public operations ----------------------------------------------------


def is_unimodular(t: Triangulation) -> bool:
    """True iff every maximal cell has normalized lattice volume 1."""
    engine = flip_engine(t.configuration)
    return engine.is_unimodular(engine.to_masks(t.cells))


def is_regular(t: Triangulation, mode: str = "global", use_float: bool = True):
    """A witness WeightVector with regular_subdivision(config, w) == t, or None.

    ``mode="global"`` uses one strict inequality per (cell, outside point);
    ``mode="local"`` uses interior-wall folds plus unused-point conditions.
    Both are exact; the local system is smaller and faster.
    """
    engine = flip_engine(t.configuration)
    return engine.is_regular(engine.to_masks(t.cells), mode=mode, use_float=use_float)


def placing_triangulation(config: PointConfiguration, order=None) -> Triangulation:
    """Triangulation built by placing points one at a time (always regular)."""
    reduced, _ = _reduction(config)
    cells = placing_cells(reduced.points, order)
    if cells is None:
        raise DegenerateConfigurationError("configuration has no affine extent")
    return Triangulation.make(config, cells)


def flips(t: Triangulation):
    """All supported bistellar flips as (Flip, neighbor Triangulation) pairs."""
    engine = flip_engine(t.configuration)
    out = []
    for flip, masks in engine.neighbors(engine.to_masks(t.cells)):
        out.append((flip, engine.triangulation(masks)))
    return out


@dataclass(frozen=True)
class SymmetryGroup:
    """Point permutations extending to affine lattice automorphisms.

    ``certificates`` holds, per generator, the exact affine map (integer
    matrix in reduced coordinates, row-vector convention, and offset) that
    was solved for during validation.
    """

    configuration: PointConfiguration
    generators: tuple[tuple[int, ...], ...]
    elements: tuple[tuple[int, ...], ...]
    certificates: tuple[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]], ...] = ()

    @classmethod
    def from_generators(cls, config: PointConfiguration, generators, bound: int = 10000):
        gens = tuple(tuple(g) for g in generators)
        n = len(config.points)
        certificates = []
        for g in gens:
            if sorted(g) != list(range(n)):
                raise ValueError("generator is not a permutation of the point indices")
            certificates.append(certify_affine_action(config, g))
        identity = tuple(range(n))
        elements = {identity}
        frontier = [identity]
        while frontier:
            current = frontier.pop()
            for g in gens:
                nxt = tuple(g[current[i]] for i in range(n))
                if nxt not in elements:
                    if len(elements) >= bound:
                        raise GroupBoundError(
                            f"group expansion exceeded the configured bound {bound}"
                        )
                    elements.add(nxt)
                    frontier.append(nxt)
        return cls(config, gens, tuple(sorted(elements)), tuple(certificates))

    def __len__(self) -> int:
        return len(self.elements)


def certify_affine_action(config: PointConfiguration, perm) -> tuple:
    """Solve exactly for the affine map realizing a point permutation.

    Returns (matrix, offset) in reduced coordinates and raises ``ValueError``
    if the permutation is not induced by an affine automorphism of the
    affine lattice (integer matrix with determinant +-1).
    """
    reduced, _ = _reduction(config)
    pts = reduced.points
    r = reduced.ambient_dim
    base_idx = [0]
    for i in range(1, len(pts)):
        rows = [
            [pts[j][k] - pts[base_idx[0]][k] for k in range(r)]
            for j in base_idx[1:] + [i]
        ]
        if rank_int(rows) == len(base_idx):
            base_idx.append(i)
        if len(base_idx) == r + 1:
            break
    if len(base_idx) != r + 1:
        raise DegenerateConfigurationError("cannot certify maps on a degenerate configuration")
    o = pts[base_idx[0]]
    o_img = pts[perm[base_idx[0]]]
    d_rows = [[pts[i][k] - o[k] for k in range(r)] for i in base_idx[1:]]
    e_rows = [[pts[perm[i]][k] - o_img[k] for k in range(r)] for i in base_idx[1:]]
    # Solve D M = E column by column (row-vector convention: x' = x M + t).
    cols = []
    for c in range(r):
        col = solve_rational(d_rows, [e[c] for e in e_rows])
        assert col is not None
        cols.append(col)
    matrix = [[cols[c][k] for c in range(r)] for k in range(r)]
    if any(v.denominator != 1 for row in matrix for v in row):
        raise ValueError("permutation is not an affine lattice map (non-integer matrix)")
    int_matrix = [[int(v) for v in row] for row in matrix]
    if abs(det_int(int_matrix)) != 1:
        raise ValueError("permutation does not preserve the lattice (determinant != +-1)")
    offset = [
        o_img[k] - sum(o[j] * int_matrix[j][k] for j in range(r))
        for k in range(r)
    ]
    for i, p in enumerate(pts):
        image = tuple(
            sum(p[j] * int_matrix[j][k] for j in range(r)) + offset[k] for k in range(r)
        )
        if image != pts[perm[i]]:
            raise ValueError(f"permutation is not affine: point {i} maps inconsistently")
    return tuple(tuple(row) for row in int_matrix), tuple(offset)


def apply_symmetry(t: Triangulation, perm) -> Triangulation:
    """Relabel every cell through a group element."""
    return Triangulation.make(
        t.configuration, [tuple(perm[i] for i in cell) for cell in t.cells]
    )


def orbit_canonical_rep(t: Triangulation, grp: SymmetryGroup) -> Triangulation:
    """The minimal relabeling of t over the group, in the documented order.

    The order is colexicographic: cells are encoded as bitmasks (bit i is
    point i), each triangulation as its ascending mask sequence, and
    sequences are compared lexicographically.
    """
    engine = flip_engine(t.configuration)
    masks = engine.to_masks(t.cells)
    context = RelabelContext(engine, grp.elements)
    return engine.triangulation(context.canonical(masks))


def builtin_symmetry(kind: str, config: PointConfiguration) -> SymmetryGroup:
    """Preset symmetry groups, validated against the given configuration.

    Kinds: ``trivial``; ``simplex-3d2`` (S3 on the cubic polygon, order 6);
    ``cayley-2d3-2d3`` (S4 x Z2 on the quadric Cayley configuration,
    order 48).
    """
    n = len(config.points)
    if kind == "trivial":
        return SymmetryGroup.from_generators(config, [tuple(range(n))])
    if kind in ("simplex-3d2", "s3"):
        expected = simplex_lattice_points(2, 3)
        if config.points != expected.points:
            raise ValueError("configuration does not match the 3*Delta_2 preset")
        maps = [
            lambda p: (p[1], p[0]),
            lambda p: (3 - p[0] - p[1], p[0]),
        ]
        gens = [_perm_from_map(config, f) for f in maps]
        return SymmetryGroup.from_generators(config, gens)
    if kind in ("cayley-2d3-2d3", "s4xz2"):
        factor = simplex_lattice_points(3, 2)
        expected = [(1, 0) + p for p in factor.points] + [(0, 1) + p for p in factor.points]
        if list(config.points) != expected:
            raise ValueError("configuration does not match the Cayley C(2D3,2D3) preset")

        def swap12(p):
            return (p[0], p[1], p[3], p[2], p[4])

        def cycle4(p):
            x, y, z = p[2], p[3], p[4]
            return (p[0], p[1], 2 - x - y - z, x, y)

        def swap_blocks(p):
            return (p[1], p[0], p[2], p[3], p[4])

        gens = [_perm_from_map(config, f) for f in (swap12, cycle4, swap_blocks)]
        return SymmetryGroup.from_generators(config, gens)
    raise ValueError(f"unknown symmetry preset {kind!r}")


def _perm_from_map(config: PointConfiguration, point_map):
    index = {p: i for i, p in enumerate(config.points)}
    perm = []
    for p in config.points:
        q = point_map(p)
        if q not in index:
            raise ValueError("map does not permute the configuration points")
        perm.append(index[q])
    return tuple(perm)


def validate_triangulation(t: Triangulation, pairwise: bool = True) -> bool:
    """Exact validity check: volumes sum to the polytope volume, every cell
    is full-dimensional, facets are shared by at most two cells, and (when
    ``pairwise``) any two cells meet in a common face.
    """
    engine = flip_engine(t.configuration)
    masks = engine.to_masks(t.cells)
    if len(set(masks)) != len(masks):
        return False
    if any(engine.volume(m) == 0 for m in masks):
        return False
    if sum(engine.volume(m) for m in masks) != normalized_volume(t.configuration):
        return False
    try:
        engine.walls(masks)
    except ValueError:
        return False
    if not pairwise:
        return True
    pts = engine.points
    cells = [engine.bits(m) for m in masks]
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            shared = sorted(set(cells[i]) & set(cells[j]))
            conditions = [pts[f] + (1,) for f in shared]
            if conditions:
                basis = nullspace_basis(conditions)
            else:
                dim = engine.rank + 1
                basis = [
                    tuple(Fraction(1 if k == idx else 0) for k in range(dim))
                    for idx in range(dim)
                ]
            rows = []
            for v in cells[i]:
                if v in shared:
                    continue
                vec = pts[v] + (1,)
                rows.append(tuple(-sum(b[k] * vec[k] for k in range(len(vec))) for b in basis))
            for v in cells[j]:
                if v in shared:
                    continue
                vec = pts[v] + (1,)
                rows.append(tuple(sum(b[k] * vec[k] for k in range(len(vec))) for b in basis))
            int_rows = [_clear_row(r) for r in rows]
            feasible, _ = strict_homogeneous_feasible(int_rows)
            if not feasible:
                return False
    return True


def _clear_row(row) -> tuple[int, ...]:
    den = 1
    for v in row:
        f = Fraction(v)
        den = den * f.denominator // gcd(den, f.denominator)
    return tuple(int(Fraction(v) * den) for v in row)
