"""Exact dense linear algebra over the rationals, plus integer Smith normal form.

Everything is desk scale: matrices are tuples of tuples of Fraction, and the
algorithms are textbook Gaussian / Euclidean elimination carried out exactly.
Smith normal form uses Python's arbitrary-precision integers, so entry growth
is harmless.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class Matrix:
    """Immutable dense matrix with Fraction entries and an explicit shape.

    The explicit shape matters because boundary matrices of empty degrees
    are routinely 0 x k or k x 0.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        self.rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            found = widths.pop()
            if ncols is not None and ncols != found:
                raise ValueError("declared ncols=%d but rows have %d" % (ncols, found))
            self.ncols = found
        else:
            if ncols is None:
                raise ValueError("an empty matrix needs an explicit column count")
            self.ncols = int(ncols)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns, nrows):
        columns = list(columns)
        if not columns:
            return cls.zeros(nrows, 0)
        if nrows == 0:
            return cls([], len(columns))
        return cls([[col[i] for col in columns] for i in range(nrows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return "Matrix(%d x %d)" % (self.nrows, self.ncols)

    def is_zero(self):
        return all(x == 0 for row in self.rows for x in row)

    def transpose(self):
        return Matrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.ncols,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return Matrix([[c * x for x in row] for row in self.rows], self.ncols)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        cols = other.ncols
        return Matrix(
            [
                [
                    sum((self.rows[i][k] * other.rows[k][j] for k in range(self.ncols)), Fraction(0))
                    for j in range(cols)
                ]
                for i in range(self.nrows)
            ],
            cols,
        )

    def matvec(self, vec):
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum((row[k] * vec[k] for k in range(self.ncols)), Fraction(0))
            for row in self.rows
        )

    def column(self, j):
        return tuple(row[j] for row in self.rows)


def vstack(matrices, ncols=None):
    mats = [m for m in matrices]
    if not mats:
        raise ValueError("nothing to stack")
    width = mats[0].ncols if ncols is None else ncols
    rows = []
    for m in mats:
        if m.ncols != width:
            raise ValueError("column mismatch in vstack")
        rows.extend(m.rows)
    return Matrix(rows, width)


def hstack(matrices):
    mats = [m for m in matrices]
    if not mats:
        raise ValueError("nothing to stack")
    height = mats[0].nrows
    rows = []
    for i in range(height):
        row = []
        for m in mats:
            if m.nrows != height:
                raise ValueError("row mismatch in hstack")
            row.extend(m.rows[i])
        rows.append(row)
    return Matrix(rows, sum(m.ncols for m in mats))


def rref(matrix):
    """Reduced row echelon form. Returns (Matrix, pivot column tuple)."""
    rows = [list(r) for r in matrix.rows]
    nrows, ncols = matrix.nrows, matrix.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return Matrix(rows, ncols), tuple(pivots)


def rank(matrix):
    return len(rref(matrix)[1])


def nullspace(matrix):
    """Basis of the right kernel, one vector per free column, deterministic order."""
    red, pivots = rref(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(matrix.ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * matrix.ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red.rows[r][fc]
        basis.append(tuple(vec))
    return basis


def solve(matrix, rhs):
    """One exact solution of matrix @ x = rhs, or None when inconsistent."""
    if len(rhs) != matrix.nrows:
        raise ValueError("rhs length mismatch")
    aug = Matrix(
        [list(row) + [rhs[i]] for i, row in enumerate(matrix.rows)],
        matrix.ncols + 1,
    ) if matrix.nrows else Matrix([], matrix.ncols + 1)
    red, pivots = rref(aug)
    if matrix.ncols in pivots:
        return None
    x = [Fraction(0)] * matrix.ncols
    for r, pc in enumerate(pivots):
        x[pc] = red.rows[r][matrix.ncols]
    return tuple(x)


def row_space(matrix):
    """Canonical (RREF) basis of the row space, as a Matrix with one row per basis vector."""
    red, pivots = rref(matrix)
    return Matrix([red.rows[i] for i in range(len(pivots))], matrix.ncols)


def reduce_mod_rows(vec, basis):
    """Reduce vec modulo the row space of an RREF basis matrix."""
    v = list(Fraction(x) for x in vec)
    _, pivots = rref(basis)
    for r, pc in enumerate(pivots):
        if v[pc] != 0:
            f = v[pc]
            v = [x - f * y for x, y in zip(v, basis.rows[r])]
    return tuple(v)


def quotient_reps(space_rows, sub_rows):
    """Canonical representatives of rowspace(space) / rowspace(sub).

    Both arguments are matrices whose rows span the spaces; the subspace must
    be contained in the ambient one (not checked here). Representatives are
    the RREF rows of the reductions, so they are deterministic.
    """
    sub_basis = row_space(sub_rows)
    reduced = []
    for row in row_space(space_rows).rows:
        r = reduce_mod_rows(row, sub_basis)
        if any(x != 0 for x in r):
            reduced.append(r)
    if not reduced:
        return []
    return list(row_space(Matrix(reduced, space_rows.ncols)).rows)


def _first_nonzero(a, top, left):
    best = None
    for i in range(top, len(a)):
        for j in range(left, len(a[0])):
            if a[i][j] != 0:
                if best is None or abs(a[i][j]) < abs(a[best[0]][best[1]]):
                    best = (i, j)
    return best


def invariant_factors(rows):
    """Nonzero diagonal of the Smith normal form of an integer matrix.

    Returned sorted so that each entry divides the next. The length of the
    result is the rank; entries > 1 are the torsion coefficients when the
    matrix presents a quotient of free abelian groups.
    """
    a = [[int(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        pos = _first_nonzero(a, t, t)
        if pos is None:
            break
        i0, j0 = pos
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        while True:
            # clear the pivot column
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if any(a[i][t] for i in range(t + 1, m)):
                # remainder smaller than pivot; swap it up and repeat
                for i in range(t + 1, m):
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        break
                continue
            # clear the pivot row
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
            if any(a[t][j] for j in range(t + 1, n)):
                for j in range(t + 1, n):
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        break
                continue
            # force divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
        t += 1
    # pairwise divisibility fix
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            x, y = diag[i], diag[i + 1]
            if y % x:
                g = gcd(x, y)
                diag[i], diag[i + 1] = g, x * y // g
                changed = True
    return [d for d in diag if d != 0]
