"""Lie-algebra-valued polynomial 1-forms as connections on trivial bundles,
the recursive face-extension algorithm, curvature and Chern-Weil forms, an
abelian Chern-number calculator, and the numeric extra-degeneracy operator.

Everything except extra_degeneracy_value is exact. The face extension works
in orthant coordinates: the faces {t_i = 0}, i = 1..n, of the positive
orthant are exactly the canonical-coordinate faces of the simplex, and the
extension of a face datum constantly in the missing coordinate is literally
the same polynomial. A horn with missing index k != 0 is first moved onto
the coordinate faces by the vertex transposition (0 k).

The abelian Chern model keeps a formal unit tau (standing for 2*pi) in the
scalars: transition lifts may wind along an edge by integer multiples of
tau, so connection forms carry QTau coefficients and the degree is read off
as the tau-part of the total curvature integral, an exact integer check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CompatibilityError, DomainError, ParameterError, StructureError
from .forms import (
    PolyForm,
    QTau,
    TAU,
    coface_matrix,
    compose_matrices,
    vertex_permutation_matrix,
)
from .linalg import Matrix, solve


# -- matrix Lie algebras -----------------------------------------------------


class MatrixLieAlgebra:
    """Matrices over Q with the commutator bracket; basis fixed at creation.

    Antisymmetry and the Jacobi identity are asserted once on basis triples.
    """

    def __init__(self, name, basis):
        self.name = name
        self.basis = tuple(
            tuple(tuple(Fraction(v) for v in row) for row in b) for b in basis
        )
        sizes = {len(b) for b in self.basis} | {len(r) for b in self.basis for r in b}
        if len(sizes) != 1:
            raise ParameterError("basis matrices must be square of one size")
        self.size = sizes.pop()
        self._check_bracket()

    def _mat_mul(self, a, b):
        d = self.size
        return tuple(
            tuple(sum((a[i][k] * b[k][j] for k in range(d)), Fraction(0)) for j in range(d))
            for i in range(d)
        )

    def bracket(self, a, b):
        ab = self._mat_mul(a, b)
        ba = self._mat_mul(b, a)
        return tuple(
            tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(ab, ba)
        )

    def _add(self, a, b):
        return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def _check_bracket(self):
        zero = tuple(tuple(Fraction(0) for _ in range(self.size)) for _ in range(self.size))
        for a in self.basis:
            for b in self.basis:
                if self._add(self.bracket(a, b), self.bracket(b, a)) != zero:
                    raise StructureError("bracket fails antisymmetry")
        for a in self.basis:
            for b in self.basis:
                for c in self.basis:
                    jac = self._add(
                        self._add(
                            self.bracket(a, self.bracket(b, c)),
                            self.bracket(b, self.bracket(c, a)),
                        ),
                        self.bracket(c, self.bracket(a, b)),
                    )
                    if jac != zero:
                        raise StructureError("bracket fails the Jacobi identity")

    def contains(self, matrix):
        """Membership of a rational matrix in the span of the basis."""
        cols = [
            [b[i][j] for i in range(self.size) for j in range(self.size)]
            for b in self.basis
        ]
        vec = [matrix[i][j] for i in range(self.size) for j in range(self.size)]
        return solve(Matrix.from_columns(cols, self.size ** 2), vec) is not None


def abelian_line():
    return MatrixLieAlgebra("abelian-1d", [(((1,)),)])


def sl2():
    return MatrixLieAlgebra(
        "2x2 traceless",
        [((0, 1), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, -1))],
    )


def gl(n):
    basis = []
    for i in range(n):
        for j in range(n):
            basis.append(
                tuple(
                    tuple(1 if (r, c) == (i, j) else 0 for c in range(n))
                    for r in range(n)
                )
            )
    return MatrixLieAlgebra("%dx%d full" % (n, n), basis)


# -- Lie-algebra-valued forms -------------------------------------------------


class LieValuedForm:
    """Square matrix of PolyForms of one degree on one simplex."""

    def __init__(self, algebra, n, p, entries):
        self.algebra = algebra
        self.n = int(n)
        self.p = int(p)
        d = algebra.size
        self.entries = tuple(tuple(entries[i][j] for j in range(d)) for i in range(d))
        for row in self.entries:
            for f in row:
                if (f.n, f.p) != (self.n, self.p):
                    raise ParameterError("entry of the wrong form type")

    @classmethod
    def zero(cls, algebra, n, p):
        d = algebra.size
        z = PolyForm.zero(n, p)
        return cls(algebra, n, p, [[z] * d for _ in range(d)])

    @classmethod
    def from_basis(cls, algebra, n, p, coefficients):
        """Sum of basis matrices weighted by PolyForm coefficients."""
        d = algebra.size
        rows = [[PolyForm.zero(n, p) for _ in range(d)] for _ in range(d)]
        for form, mat in zip(coefficients, algebra.basis):
            for i in range(d):
                for j in range(d):
                    if mat[i][j]:
                        rows[i][j] = rows[i][j] + form.scale(mat[i][j])
        return cls(algebra, n, p, rows)

    def entrywise(self, fn, p=None, n=None):
        return LieValuedForm(
            self.algebra,
            self.n if n is None else n,
            self.p if p is None else p,
            [[fn(f) for f in row] for row in self.entries],
        )

    def __add__(self, other):
        return LieValuedForm(
            self.algebra, self.n, self.p,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return self.entrywise(lambda f: f.scale(c))

    def __eq__(self, other):
        return (
            isinstance(other, LieValuedForm)
            and (self.n, self.p) == (other.n, other.p)
            and self.entries == other.entries
        )

    def is_zero(self):
        return all(f.is_zero() for row in self.entries for f in row)

    def d(self):
        return self.entrywise(lambda f: f.d(), p=self.p + 1)

    def wedge(self, other):
        d = self.algebra.size
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = PolyForm.zero(self.n, self.p + other.p)
                for k in range(d):
                    acc = acc + self.entries[i][k].wedge(other.entries[k][j])
                row.append(acc)
            rows.append(row)
        return LieValuedForm(self.algebra, self.n, self.p + other.p, rows)

    def trace(self):
        acc = PolyForm.zero(self.n, self.p)
        for i in range(self.algebra.size):
            acc = acc + self.entries[i][i]
        return acc

    def pullback(self, matrix):
        m = len(matrix[0]) - 1
        return self.entrywise(lambda f: f.pullback(matrix), n=m)

    def in_algebra(self):
        """Do all monomial coefficient matrices lie in the algebra's span?"""
        keys = set()
        for row in self.entries:
            for f in row:
                keys.update(f.terms)
        d = self.algebra.size
        for key in keys:
            mat = tuple(
                tuple(self.entries[i][j].terms.get(key, Fraction(0)) for j in range(d))
                for i in range(d)
            )
            if not self.algebra.contains(mat):
                return False
        return True


def curvature(connection):
    """F = dA + A ^ A on a trivial bundle; input must be a 1-form."""
    if connection.p != 1:
        raise ParameterError("a connection is a Lie-valued 1-form")
    return connection.d() + connection.wedge(connection)


def bianchi_defect(connection, f=None):
    """dF - (F ^ A - A ^ F); identically zero for a curvature."""
    f = curvature(connection) if f is None else f
    return f.d() - (f.wedge(connection) - connection.wedge(f))


def chern_weil_form(f, k):
    """Trace of the k-th wedge power of the curvature, a closed 2k-form."""
    if k < 1:
        raise ParameterError("power must be >= 1")
    if 2 * k > f.n:
        return PolyForm.zero(f.n, 2 * k)
    power = f
    for _ in range(k - 1):
        power = power.wedge(f)
    return power.trace()


# -- orthant polynomial operations -------------------------------------------


def orthant_restrict(form, i):
    """Restriction to the face {t_i = 0}: kill t_i and dt_i, reindex down.

    Agrees with the pullback along the i-th coface for i >= 1."""
    if not 1 <= i <= form.n:
        raise ParameterError("face index out of range")
    out = []
    for (exps, idx), coeff in form.terms.items():
        if exps[i - 1] > 0 or i in idx:
            continue
        new_exps = exps[: i - 1] + exps[i:]
        new_idx = tuple(v if v < i else v - 1 for v in idx)
        out.append(((new_exps, new_idx), coeff))
    return PolyForm(form.n - 1, form.p, out)


def orthant_inject(form, i, n):
    """Constant extension in t_i of a form on the face {t_i = 0} of n variables."""
    if not 1 <= i <= n or form.n != n - 1:
        raise ParameterError("injection index out of range")
    out = []
    for (exps, idx), coeff in form.terms.items():
        new_exps = exps[: i - 1] + (0,) + exps[i - 1:]
        new_idx = tuple(v if v < i else v + 1 for v in idx)
        out.append(((new_exps, new_idx), coeff))
    return PolyForm(n, form.p, out)


def _is_lie(x):
    return isinstance(x, LieValuedForm)


def _restrict_any(form, i):
    if _is_lie(form):
        return form.entrywise(lambda f: orthant_restrict(f, i), n=form.n - 1)
    return orthant_restrict(form, i)


def _inject_any(form, i, n):
    if _is_lie(form):
        return form.entrywise(lambda f: orthant_inject(f, i, n), n=n)
    return orthant_inject(form, i, n)


def _zero_like(sample, n):
    if _is_lie(sample):
        return LieValuedForm.zero(sample.algebra, n, sample.p)
    return PolyForm.zero(n, sample.p)


def _double_restrict(form, i, j):
    """Restriction to {t_i = t_j = 0}, i < j; j is removed first so the
    index i stays put."""
    return _restrict_any(_restrict_any(form, j), i)


def _first_discrepancy(a, b):
    if _is_lie(a):
        for i, row in enumerate(a.entries):
            for j, f in enumerate(row):
                g = b.entries[i][j]
                if f != g:
                    keys = set(f.terms) | set(g.terms)
                    key = sorted(k for k in keys if f.terms.get(k) != g.terms.get(k))[0]
                    return ((i, j), key)
        return None
    if a != b:
        keys = set(a.terms) | set(b.terms)
        return sorted(k for k in keys if a.terms.get(k) != b.terms.get(k))[0]
    return None


def face_extend(n, data):
    """Extend compatible face data to the whole orthant segment.

    data maps face indices i in 1..n (a subset) to forms on the face
    {t_i = 0}, each in n-1 canonical variables. The output restricts to
    every datum exactly; for polynomial inputs it is polynomial, by the
    recursion: extend the last face's residual constantly in its own
    coordinate, subtract, continue with the remaining faces.
    """
    if not data:
        raise ParameterError("no face data")
    for i in data:
        if not 1 <= i <= n:
            raise ParameterError("face index %r out of range" % (i,))
        if data[i].n != n - 1:
            raise ParameterError("datum on face %d has wrong arity" % i)
    keys = sorted(data, reverse=True)
    for a_pos in range(len(keys)):
        for b_pos in range(a_pos + 1, len(keys)):
            j, i = keys[a_pos], keys[b_pos]  # i < j
            rij = _double_restrict(_inject_any(data[i], i, n), i, j)
            rji = _double_restrict(_inject_any(data[j], j, n), i, j)
            if rij != rji:
                raise CompatibilityError(
                    "face data disagree on the intersection of faces %d and %d" % (i, j),
                    witness=(i, j, _first_discrepancy(rij, rji)),
                )
    sample = data[keys[0]]
    result = _zero_like(sample, n)
    for i in keys:
        residual = data[i] - _restrict_any(result, i)
        result = result + _inject_any(residual, i, n)
    for i in keys:
        if _restrict_any(result, i) != data[i]:
            raise StructureError("extension failed to restrict to face %d" % i)
    return result


def _pullback_any(form, matrix):
    if _is_lie(form):
        return form.pullback(matrix)
    return form.pullback(matrix)


def _transpose(matrix):
    rows = len(matrix)
    cols = len(matrix[0])
    return tuple(tuple(matrix[i][j] for i in range(rows)) for j in range(cols))


def horn_connection_fill(n, k, data):
    """Fill a horn of connection data: forms on the faces d_i, i != k, of the
    n-simplex, compatible on intersections, extended to the whole simplex.

    For k != 0 the vertex transposition (0 k) carries the given faces onto
    the coordinate faces {t_i = 0}, i = 1..n, where face_extend applies; the
    result is carried back and every restriction re-verified exactly.
    """
    if not 0 <= k <= n:
        raise ParameterError("missing-face index out of range")
    expected = [i for i in range(n + 1) if i != k]
    if sorted(data) != expected:
        raise ParameterError("horn data must cover exactly the faces other than %d" % k)
    if k == 0:
        filler = face_extend(n, dict(data))
    else:
        perm = list(range(n + 1))
        perm[0], perm[k] = perm[k], perm[0]
        p_mat = vertex_permutation_matrix(n, perm)
        moved = {}
        for i in expected:
            j = perm[i]
            pm = compose_matrices(p_mat, coface_matrix(n, i))
            q_rows = tuple(row for r, row in enumerate(pm) if r != j)
            q_inv = _transpose(q_rows)
            moved[j] = _pullback_any(data[i], q_inv)
        filler = _pullback_any(face_extend(n, moved), p_mat)
    for i in expected:
        restricted = _pullback_any(filler, coface_matrix(n, i))
        if restricted != data[i]:
            raise StructureError("filler fails to restrict to face %d" % i)
    return filler


# -- abelian Chern numbers -----------------------------------------------------


_REVERSAL = ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))


@dataclass
class EdgeGluing:
    """One interior edge of a closed surface.

    plus/minus name (triangle id, face index) for the two sides; flip says
    whether the two face parametrizations run oppositely. The transition
    from the minus frame to the plus frame has additive lift
    p(t) + winding * tau * t along the plus parametrization."""

    plus: tuple
    minus: tuple
    flip: bool
    p: PolyForm          # 0-form on Delta^1
    winding: int


class U1BundleData:
    """Closed oriented simplicial surface with a per-triangle connection form
    and per-edge transition data for the abelian Chern number."""

    def __init__(self, triangles, orientations, forms, gluings):
        self.triangles = tuple(triangles)
        self.orientations = dict(orientations)
        self.forms = dict(forms)
        self.gluings = list(gluings)
        for t in self.triangles:
            if self.orientations.get(t) not in (1, -1):
                raise StructureError("triangle %r needs an orientation sign" % (t,))
            f = self.forms.get(t)
            if f is None or (f.n, f.p) != (2, 1):
                raise StructureError("triangle %r needs a 1-form on Delta^2" % (t,))
        seen = {}
        for g in self.gluings:
            for side in (g.plus, g.minus):
                t, i = side
                if t not in self.orientations or not 0 <= i <= 2:
                    raise StructureError("gluing names unknown side %r" % (side,))
                if side in seen:
                    raise StructureError("face %r glued twice" % (side,))
                seen[side] = True
            if (g.p.n, g.p.p) != (1, 0):
                raise StructureError("transition needs a 0-form on the edge")
        for t in self.triangles:
            for i in range(3):
                if (t, i) not in seen:
                    raise StructureError("face (%r, %d) is unglued; surface not closed" % (t, i))

    def orientation_consistent(self):
        for g in self.gluings:
            (tp, ip), (tm, im) = g.plus, g.minus
            s_flip = -1 if g.flip else 1
            if self.orientations[tp] * (-1) ** ip * s_flip + self.orientations[tm] * (-1) ** im != 0:
                return False
        return True

    def reversed_orientation(self):
        return U1BundleData(
            self.triangles,
            {t: -o for t, o in self.orientations.items()},
            self.forms,
            self.gluings,
        )


def _edge_jump_form(g):
    """d of the transition lift: dp + winding * tau * dt_1 on the edge."""
    wind = PolyForm(1, 1, [(((0,), (1,)), TAU * g.winding)]) if g.winding else PolyForm.zero(1, 1)
    return g.p.d() + wind


def check_u1_invariants(bundle):
    """Edge compatibility of the connection with the transition lifts.

    Returns the witness edge on failure, None when all edges match."""
    for g in bundle.gluings:
        (tp, ip), (tm, im) = g.plus, g.minus
        pb_plus = bundle.forms[tp].pullback(coface_matrix(2, ip))
        pb_minus = bundle.forms[tm].pullback(coface_matrix(2, im))
        if g.flip:
            pb_minus = pb_minus.pullback(_REVERSAL)
        if pb_plus - pb_minus != _edge_jump_form(g):
            return g
    return None


def _vertex_classes(bundle):
    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for t in bundle.triangles:
        for c in range(3):
            parent[(t, c)] = (t, c)
    for g in bundle.gluings:
        (tp, ip), (tm, im) = g.plus, g.minus
        ends_p = sorted(set(range(3)) - {ip})
        ends_m = sorted(set(range(3)) - {im})
        for lam in (0, 1):
            lam_m = 1 - lam if g.flip else lam
            a, b = find((tp, ends_p[lam])), find((tm, ends_m[lam_m]))
            if a != b:
                parent[a] = b
    classes = {}
    for corner in parent:
        classes.setdefault(find(corner), []).append(corner)
    return classes


@dataclass
class ChernReport:
    degree: Fraction
    total_integral: QTau
    edge_sum: QTau
    vertex_sums: dict       # vertex class representative -> QTau
    integral_vertex_sums: bool


def u1_chern_number(bundle):
    """Degree of the abelian bundle: the tau-part of the total curvature
    integral, cross-checked against the per-edge jump sum, with per-vertex
    winding sums reported.

    Raises CompatibilityError with the witness edge when the transition
    invariant fails, and reports a non-integral verdict rather than rounding
    when the rational part of the total does not cancel."""
    bad = check_u1_invariants(bundle)
    if bad is not None:
        raise CompatibilityError("connection and transition disagree on an edge", witness=bad)
    if not bundle.orientation_consistent():
        raise StructureError("triangle orientations are not globally consistent")
    total = QTau(0, 0)
    for t in bundle.triangles:
        val = bundle.forms[t].d().integrate()
        total = total + val * bundle.orientations[t]
    edge_sum = QTau(0, 0)
    vertex_sums = {}
    classes = _vertex_classes(bundle)
    rep_of = {c: rep for rep, members in classes.items() for c in members}
    for g in bundle.gluings:
        (tp, ip), _ = g.plus, g.minus
        s_e = bundle.orientations[tp] * (-1) ** ip
        jump = _edge_jump_form(g).integrate()
        edge_sum = edge_sum + jump * s_e
        ends_p = sorted(set(range(3)) - {ip})
        p_at = g.p.coefficients_at((Fraction(1),)).get((), Fraction(0))
        p_at0 = g.p.coefficients_at((Fraction(0),)).get((), Fraction(0))
        lift_head = _as_qtau_value(p_at) + TAU * g.winding
        lift_tail = _as_qtau_value(p_at0)
        head_rep = rep_of[(tp, ends_p[1])]
        tail_rep = rep_of[(tp, ends_p[0])]
        vertex_sums[head_rep] = vertex_sums.get(head_rep, QTau(0, 0)) + lift_head * s_e
        vertex_sums[tail_rep] = vertex_sums.get(tail_rep, QTau(0, 0)) - lift_tail * s_e
    if total != edge_sum:
        raise StructureError("Stokes bookkeeping failed: total %r vs edge sum %r" % (total, edge_sum))
    integral = all(z.q == 0 and z.m.denominator == 1 for z in vertex_sums.values())
    if total.q != 0:
        raise StructureError("total curvature has a nonzero rational part %r" % (total.q,))
    return ChernReport(total.m, total, edge_sum, vertex_sums, integral)


def _as_qtau_value(v):
    return v if isinstance(v, QTau) else QTau(Fraction(v), 0)


# -- the numeric extra degeneracy ---------------------------------------------


def collapse_projection(point):
    """The projection of the lower half simplex onto the base:
    (t_0, ..., t_{n+1}) -> (t_1, ..., t_{n+1}) / (1 - t_0).

    point is given in canonical coordinates (t_1, ..., t_{n+1}); undefined
    at the apex t_0 = 1."""
    t0 = 1.0 - math.fsum(point)
    if t0 >= 1.0:
        raise DomainError("projection undefined at the apex t_0 = 1")
    return tuple(t / (1.0 - t0) for t in point)


def bump_factor(t0):
    """The smooth cutoff e^4 * e^{-(1/2 - t_0)^{-2}} on t_0 < 1/2, 0 beyond."""
    if t0 >= 0.5:
        return 0.0
    return math.exp(4.0 - (0.5 - t0) ** -2)


def extra_degeneracy_value(w_eval, n, point):
    """Evaluate the extra-degeneracy image of a 1-form at a point of the
    (n+1)-simplex, in floating point.

    w_eval(u) returns the n coefficients of the form against dt_1..dt_n in
    canonical coordinates of the base simplex; entries may be floats or
    numpy arrays (matrix-valued forms). The value is the coefficient tuple
    against dt_1..dt_{n+1} upstairs: zero on the half t_0 >= 1/2, and the
    bump-scaled pullback along the collapse projection on t_0 < 1/2.

    Evaluation exactly at the apex t_0 = 1 is refused: the projection in
    the defining formula is undefined there.
    """
    if len(point) != n + 1:
        raise ParameterError("point must have n+1 canonical coordinates")
    t0 = 1.0 - math.fsum(point)
    if t0 >= 1.0:
        raise DomainError("the defining projection is undefined at t_0 = 1")
    if t0 >= 0.5:
        zero = 0.0 * w_eval(tuple(0.0 for _ in range(n)))[0] if n else 0.0
        return tuple(zero for _ in range(n + 1))
    scale = bump_factor(t0)
    denom = 1.0 - t0
    u = tuple(point[j] / denom for j in range(1, n + 1))
    w = w_eval(u)
    # f*(du_j) = dt_{j+1}/(1-t_0) + t_{j+1}/(1-t_0)^2 dt_0, dt_0 = -sum dt_i
    correction = sum(w[j - 1] * (point[j] / denom ** 2) for j in range(1, n + 1))
    coeffs = []
    for i in range(1, n + 2):
        base = w[i - 2] / denom if i >= 2 else 0.0
        coeffs.append(scale * (base - correction))
    return tuple(coeffs)


def polyform_evaluator(form):
    """Adapter: a degree-1 PolyForm on Delta^n as a float coefficient callable."""
    if form.p != 1:
        raise ParameterError("expected a 1-form")
    n = form.n

    def evaluate(u):
        vals = form.coefficients_at(tuple(float(t) for t in u))
        return tuple(float(vals.get((j,), 0.0)) for j in range(1, n + 1))

    return evaluate
