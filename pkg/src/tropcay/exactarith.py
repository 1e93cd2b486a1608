"""Exact rational arithmetic and exact integer linear algebra.

Rational values are plain ``fractions.Fraction`` objects, which already
guarantee lowest terms and a positive denominator.  This module adds the
pieces the geometry code needs on top of that: string (de)serialization,
a small rational matrix type, fraction-free (Bareiss) determinants, exact
linear solving, integer kernels, and lattice (Hermite-style) row bases.

Everything here is pure and exact; no floating point is ever used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Rational = Fraction


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "p/q" or "p" (also accepts ints and Fractions unchanged)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(value: Fraction | int) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class DimensionError(ValueError):
    """Raised when matrix/vector shapes do not line up."""


@dataclass(frozen=True)
class RationalMatrix:
    """A dense, immutable matrix of exact rationals (row-major)."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if not data:
            return cls(0, 0, ())
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise DimensionError("matrix rows have unequal lengths")
        return cls(len(data), ncols, data)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]


def determinant(m: RationalMatrix) -> Fraction:
    """Exact determinant of a square rational matrix.

    Rows are scaled to integers, then eliminated fraction-free (Bareiss),
    which keeps intermediate values small for integer inputs.
    """
    if m.rows != m.cols:
        raise DimensionError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    if m.rows == 0:
        return Fraction(1)
    scale = Fraction(1)
    int_rows = []
    for row in m.entries:
        mult = 1
        for x in row:
            mult = mult * x.denominator // gcd(mult, x.denominator)
        scale /= mult
        int_rows.append([int(x * mult) for x in row])
    return scale * det_int(int_rows)


def det_int(rows: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("det_int needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1] if n > 0 else 1


def solve_rational(a_rows, b_col) -> list[Fraction] | None:
    """Solve a square system A x = b exactly; ``None`` if A is singular."""
    n = len(a_rows)
    aug = [[Fraction(x) for x in row] + [Fraction(b_col[i])] for i, row in enumerate(a_rows)]
    if any(len(r) != n + 1 for r in aug):
        raise DimensionError("solve_rational needs a square matrix")
    for k in range(n):
        piv = None
        for i in range(k, n):
            if aug[i][k] != 0:
                piv = i
                break
        if piv is None:
            return None
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        for i in range(k + 1, n):
            f = aug[i][k] / pk
            if f:
                for j in range(k, n + 1):
                    aug[i][j] -= f * aug[k][j]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = aug[k][n] - sum(aug[k][j] * x[j] for j in range(k + 1, n))
        x[k] = s / aug[k][k]
    return x


def solve_general(a_rows, b_col) -> list[Fraction] | None:
    """One exact solution of a (possibly rectangular) system A x = b.

    Free variables are set to 0.  Returns ``None`` when inconsistent.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b_col[i])] for i, row in enumerate(a_rows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pk = aug[r][c]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c] / pk
                for j in range(c, n + 1):
                    aug[i][j] -= f * aug[r][j]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in pivots:
        x[c] = aug[i][n] / aug[i][c]
    return x


def rank_int(rows) -> int:
    """Rank of an integer (or rational) matrix, computed exactly."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, n):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == m:
            break
    return r


def _primitive(vec: list[Fraction]) -> tuple[int, ...]:
    """Clear denominators and divide by content; first nonzero entry > 0."""
    mult = 1
    for x in vec:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    ints = [int(x * mult) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


def kernel_vector_int(cols: list[tuple[int, ...]]) -> tuple[int, ...] | None:
    """A primitive integer vector v with sum_i v_i * cols[i] = 0.

    Requires the kernel to be exactly one-dimensional; returns ``None``
    if the columns are linearly independent, raises if the kernel has
    dimension two or more (callers rely on uniqueness).
    """
    ncols = len(cols)
    nrows = len(cols[0]) if ncols else 0
    a = [[Fraction(cols[j][i]) for j in range(ncols)] for i in range(nrows)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, ncols):
                    a[i][j] -= f * a[r][j]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    if len(free) > 1:
        raise ValueError("kernel is not one-dimensional")
    f = free[0]
    v = [Fraction(0)] * ncols
    v[f] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -a[i][f] / a[i][c]
    return _primitive(v)


def nullspace_basis(rows) -> list[tuple[Fraction, ...]]:
    """Basis of {x : A x = 0} for a rational matrix given by rows."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(x) for x in row] for row in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pk = a[r][c]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c] / pk
                for j in range(c, n):
                    a[i][j] -= f * a[r][j]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in pivots:
            v[c] = -a[i][free] / a[i][c]
        basis.append(tuple(v))
    return basis


def lattice_row_basis(vectors) -> list[list[int]]:
    """Echelon basis of the integer lattice generated by the given rows.

    Hermite-style reduction: the returned rows are a Z-basis of the
    row lattice, in echelon form with positive pivots.
    """
    basis: list[list[int]] = []  # kept sorted by pivot column
    pivcol: list[int] = []
    for vec in vectors:
        v = list(vec)
        k = 0
        while True:
            lead = next((j for j, x in enumerate(v) if x != 0), None)
            if lead is None:
                break
            while k < len(basis) and pivcol[k] < lead:
                k += 1
            if k == len(basis) or pivcol[k] > lead:
                if v[lead] < 0:
                    v = [-x for x in v]
                basis.insert(k, v)
                pivcol.insert(k, lead)
                break
            # combine with the existing row at the same pivot column
            b = basis[k]
            p = b[lead]
            q = v[lead]
            g, s, t = _xgcd(p, q)
            new_b = [s * b[j] + t * v[j] for j in range(len(v))]
            v = [(p // g) * v[j] - (q // g) * b[j] for j in range(len(v))]
            basis[k] = new_b
    return basis


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def coords_in_row_basis(basis: list[list[int]], vec) -> list[int] | None:
    """Integer coordinates of ``vec`` in an echelon lattice row basis.

    Returns ``None`` if ``vec`` is not in the lattice spanned by the basis.
    """
    v = list(vec)
    coords = [0] * len(basis)
    for k, b in enumerate(basis):
        lead = next(j for j, x in enumerate(b) if x != 0)
        if v[lead] % b[lead] != 0:
            return None
        c = v[lead] // b[lead]
        coords[k] = c
        if c:
            v = [v[j] - c * b[j] for j in range(len(v))]
    if any(x != 0 for x in v):
        return None
    return coords
