"""Polynomial differential forms in barycentric coordinates.

A PolyForm lives on the standard n-simplex. Its canonical representation
eliminates t_0 and dt_0 through

    t_0 = 1 - t_1 - ... - t_n,      dt_0 = -(dt_1 + ... + dt_n),

leaving rational-coefficient polynomials in t_1..t_n against strictly
increasing wedge monomials dt_{i_1} ^ ... ^ dt_{i_p}.

Integration over the simplex is exact through the monomial rule

    int_{Delta^n} t_1^{a_1} ... t_n^{a_n} dt_1 ... dt_n
        = (prod a_j!) / (n + sum a_j)!

with the standard coordinate orientation of (t_1, ..., t_n). Faces carry
the sign (-1)^i of the boundary operator, which is exactly what makes the
Stokes identity (and hence the integration comparison map) hold with no
correction factors.

Coefficients are Fraction by default; the QTau scalar (q + m*tau, tau a
formal unit standing for 2*pi) is accepted everywhere the operations stay
linear in the coefficient, which is all this module needs.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import CompatibilityError, ParameterError

_ZERO = Fraction(0)


class QTau:
    """Exact scalar q + m*tau with rational q, m; tau is a formal unit.

    Products of two tau-carrying scalars are refused: nothing in the package
    needs tau^2 and allowing it would silently change the ring.
    """

    __slots__ = ("q", "m")

    def __init__(self, q=0, m=0):
        self.q = Fraction(q)
        self.m = Fraction(m)

    def __add__(self, other):
        other = _as_qtau(other)
        return QTau(self.q + other.q, self.m + other.m)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_qtau(other)
        return QTau(self.q - other.q, self.m - other.m)

    def __rsub__(self, other):
        return _as_qtau(other) - self

    def __neg__(self):
        return QTau(-self.q, -self.m)

    def __mul__(self, other):
        if isinstance(other, QTau):
            if self.m != 0 and other.m != 0:
                raise ArithmeticError("tau * tau is outside the scalar ring")
            return QTau(self.q * other.q, self.q * other.m + self.m * other.q)
        return QTau(self.q * other, self.m * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QTau):
            if other.m != 0:
                raise ArithmeticError("division by a tau-carrying scalar")
            other = other.q
        return QTau(self.q / other, self.m / other)

    def __eq__(self, other):
        other = _as_qtau(other)
        return self.q == other.q and self.m == other.m

    def __hash__(self):
        return hash((self.q, self.m))

    def __repr__(self):
        return "QTau(%s, %s)" % (self.q, self.m)


def _as_qtau(value):
    if isinstance(value, QTau):
        return value
    return QTau(Fraction(value), 0)


TAU = QTau(0, 1)


def _sorted_with_sign(indices):
    """Sort a wedge index tuple; return (sign, sorted tuple) or None on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def _multinomial(total, parts):
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


class PolyForm:
    """Canonical polynomial differential form on the standard n-simplex."""

    __slots__ = ("n", "p", "terms")

    def __init__(self, n, p, terms=()):
        self.n = int(n)
        self.p = int(p)
        acc = {}
        for (exps, idx), coeff in (terms.items() if isinstance(terms, dict) else terms):
            if coeff == 0:
                continue
            key = (tuple(exps), tuple(idx))
            if len(key[0]) != self.n or len(key[1]) != self.p:
                raise ParameterError("term arity does not match the form's type")
            if any(key[1][i] >= key[1][i + 1] for i in range(len(key[1]) - 1)) or any(
                not 1 <= i <= self.n for i in key[1]
            ):
                raise ParameterError("wedge indices must be strictly increasing in 1..n")
            prev = acc.get(key)
            acc[key] = coeff if prev is None else prev + coeff
        self.terms = {k: c for k, c in acc.items() if c != 0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n, p):
        return cls(n, p)

    @classmethod
    def constant(cls, n, c):
        return cls(n, 0, [(((0,) * n, ()), c)])

    @classmethod
    def from_raw(cls, n, p, raw_terms):
        """Build a form from terms that may still mention t_0 and dt_0.

        Each raw term is (coeff, exps, indices) with exps of length n+1
        (slot 0 is the t_0 exponent) and indices over 0..n, in any order.
        Degrees p > n canonicalize to the zero form; that is valid output,
        not an error.
        """
        if p > n:
            return cls.zero(n, p)
        out = []
        for coeff, exps, indices in raw_terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n + 1 or any(e < 0 for e in exps):
                raise ParameterError("raw exponent tuple must have length n+1, entries >= 0")
            if len(indices) != p:
                raise ParameterError("raw index tuple must have length p")
            # expand dt_0 -> -(dt_1 + ... + dt_n), branching per occurrence
            branches = [(coeff, [])]
            for i in indices:
                if i == 0:
                    branches = [
                        (c * Fraction(-1), chosen + [j])
                        for c, chosen in branches
                        for j in range(1, n + 1)
                    ]
                else:
                    branches = [(c, chosen + [int(i)]) for c, chosen in branches]
            for c, chosen in branches:
                norm = _sorted_with_sign(chosen)
                if norm is None:
                    continue
                sign, idx = norm
                out.extend(
                    ((e, idx), c * sign * w) for e, w in _expand_t0(exps, n)
                )
        return cls(n, p, out)

    @classmethod
    def coordinate(cls, n, i):
        """The barycentric coordinate t_i as a 0-form."""
        exps = [0] * (n + 1)
        exps[i] = 1
        return cls.from_raw(n, 0, [(Fraction(1), tuple(exps), ())])

    @classmethod
    def dcoordinate(cls, n, i):
        """The 1-form dt_i."""
        return cls.from_raw(n, 1, [(Fraction(1), (0,) * (n + 1), (i,))])

    # -- structure ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def poly_degree(self):
        """Largest total coefficient degree among the terms (0 for the zero form)."""
        return max((sum(e) for (e, _) in self.terms), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, PolyForm)
            and (self.n, self.p) == (other.n, other.p)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.p, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        return "PolyForm(n=%d, p=%d, %d terms)" % (self.n, self.p, len(self.terms))

    def __add__(self, other):
        if (self.n, self.p) != (other.n, other.p):
            raise ParameterError("cannot add forms of different type")
        return PolyForm(self.n, self.p, list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return PolyForm(self.n, self.p, {k: v * c for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    # -- calculus ---------------------------------------------------------

    def d(self):
        """Exterior derivative, termwise product rule on the monomials."""
        out = []
        for (exps, idx), coeff in self.terms.items():
            for j in range(1, self.n + 1):
                a = exps[j - 1]
                if a == 0 or j in idx:
                    continue
                pos = sum(1 for i in idx if i < j)
                sign = -1 if pos % 2 else 1
                new_exps = exps[: j - 1] + (a - 1,) + exps[j:]
                new_idx = tuple(sorted(idx + (j,)))
                out.append(((new_exps, new_idx), coeff * (a * sign)))
        return PolyForm(self.n, self.p + 1, out)

    def wedge(self, other):
        if self.n != other.n:
            raise ParameterError("wedge needs forms on the same simplex")
        out = []
        for (e1, i1), c1 in self.terms.items():
            for (e2, i2), c2 in other.terms.items():
                if set(i1) & set(i2):
                    continue
                inversions = sum(1 for a in i1 for b in i2 if a > b)
                sign = -1 if inversions % 2 else 1
                exps = tuple(x + y for x, y in zip(e1, e2))
                idx = tuple(sorted(i1 + i2))
                out.append(((exps, idx), (c1 * c2) * sign))
        return PolyForm(self.n, self.p + other.p, out)

    def integrate(self):
        """Exact integral over the standard simplex; requires top degree."""
        if self.p != self.n:
            raise ParameterError("integration needs degree p equal to the dimension n")
        if self.n == 0:
            total = _ZERO
            for (_, _idx), coeff in self.terms.items():
                total = total + coeff
            return total
        total = _ZERO
        for (exps, _idx), coeff in self.terms.items():
            num = 1
            for a in exps:
                num *= math.factorial(a)
            den = math.factorial(self.n + sum(exps))
            total = total + coeff * Fraction(num, den)
        return total

    def coefficients_at(self, point):
        """Evaluate coefficient polynomials at a point in canonical coordinates.

        Returns a dict mapping wedge index tuples to values. The point may be
        rational or floating; arithmetic follows the inputs.
        """
        if len(point) != self.n:
            raise ParameterError("point arity mismatch")
        out = {}
        for (exps, idx), coeff in self.terms.items():
            v = coeff
            for t, a in zip(point, exps):
                if a:
                    v = v * t ** a
            out[idx] = out.get(idx, 0) + v
        return out

    def pullback(self, matrix):
        """Pullback along an affine-barycentric map given as a column-stochastic
        matrix with nonnegative rational entries: rows index target barycentric
        coordinates, columns source ones."""
        rows = [tuple(Fraction(v) for v in r) for r in matrix]
        if len(rows) != self.n + 1:
            raise ParameterError("matrix must have n+1 rows for the target coordinates")
        width = {len(r) for r in rows}
        if len(width) != 1:
            raise ParameterError("ragged matrix")
        m = width.pop() - 1
        for j in range(m + 1):
            col = [rows[i][j] for i in range(self.n + 1)]
            if sum(col) != 1:
                raise ParameterError("column %d of the substitution does not sum to 1" % j)
            if any(v < 0 for v in col):
                raise ParameterError("column %d has a negative entry" % j)
        # canonical substitution data on the source: t_i = const_i + sum lin_i[j] s_j
        const = [rows[i][0] for i in range(1, self.n + 1)]
        lin = [
            [rows[i][j] - rows[i][0] for j in range(1, m + 1)]
            for i in range(1, self.n + 1)
        ]
        out = []
        for (exps, idx), coeff in self.terms.items():
            poly = {(0,) * m: Fraction(1)}
            for i in range(1, self.n + 1):
                for _ in range(exps[i - 1]):
                    poly = _poly_mul_affine(poly, const[i - 1], lin[i - 1], m)
            wedge_terms = {(): Fraction(1)}
            dead = False
            for i in idx:
                new = {}
                for prev_idx, c in wedge_terms.items():
                    for j in range(1, m + 1):
                        lv = lin[i - 1][j - 1]
                        if lv == 0 or j in prev_idx:
                            continue
                        norm = _sorted_with_sign(prev_idx + (j,))
                        if norm is None:
                            continue
                        sign, srt = norm
                        new[srt] = new.get(srt, _ZERO) + c * lv * sign
                wedge_terms = {k: v for k, v in new.items() if v != 0}
                if not wedge_terms:
                    dead = True
                    break
            if dead:
                continue
            for pexps, pc in poly.items():
                for widx, wc in wedge_terms.items():
                    out.append(((pexps, widx), coeff * (pc * wc)))
        return PolyForm(m, self.p, out)


def _expand_t0(exps, n):
    """Expand t_0^a0 * t^rest via the barycentric relation; yields (exps', weight)."""
    a0 = exps[0]
    rest = exps[1:]
    if a0 == 0:
        yield rest, 1
        return
    for j in range(a0 + 1):
        c_j = math.comb(a0, j) * (-1) ** j
        for parts in _compositions(j, n):
            w = c_j * _multinomial(j, parts)
            yield tuple(r + q for r, q in zip(rest, parts)), w


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _poly_mul_affine(poly, const, lin, m):
    """Multiply a polynomial dict by (const + sum lin[j] s_j)."""
    out = {}
    for exps, c in poly.items():
        if const != 0:
            out[exps] = out.get(exps, _ZERO) + c * const
        for j in range(m):
            if lin[j] == 0:
                continue
            e2 = exps[:j] + (exps[j] + 1,) + exps[j + 1:]
            out[e2] = out.get(e2, _ZERO) + c * lin[j]
    return {k: v for k, v in out.items() if v != 0}


# -- barycentric maps ----------------------------------------------------


def coface_matrix(n, i):
    """Matrix of the face embedding delta_i : Delta^{n-1} -> Delta^n."""
    if not 0 <= i <= n or n < 1:
        raise ParameterError("coface index out of range")
    rows = [[Fraction(0)] * n for _ in range(n + 1)]
    for j in range(n):
        target = j if j < i else j + 1
        rows[target][j] = Fraction(1)
    return tuple(tuple(r) for r in rows)


def collapse_matrix(n, j):
    """Matrix of the collapse sigma_j : Delta^{n+1} -> Delta^n merging t_j, t_{j+1}."""
    if not 0 <= j <= n:
        raise ParameterError("collapse index out of range")
    rows = [[Fraction(0)] * (n + 2) for _ in range(n + 1)]
    for k in range(n + 2):
        target = k if k <= j else k - 1
        rows[target][k] = Fraction(1)
    return tuple(tuple(r) for r in rows)


def vertex_permutation_matrix(n, perm):
    """Barycentric matrix of the affine map permuting the vertices of Delta^n."""
    if sorted(perm) != list(range(n + 1)):
        raise ParameterError("not a permutation of 0..n")
    rows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for src, dst in enumerate(perm):
        rows[dst][src] = Fraction(1)
    return tuple(tuple(r) for r in rows)


def compose_matrices(outer, inner):
    """Matrix of outer composed after inner, both column-stochastic."""
    rows_o = [list(r) for r in outer]
    rows_i = [list(r) for r in inner]
    cols_i = len(rows_i[0])
    mid = len(rows_i)
    if len(rows_o[0]) != mid:
        raise ParameterError("shape mismatch in composition")
    return tuple(
        tuple(
            sum((rows_o[t][k] * rows_i[k][s] for k in range(mid)), Fraction(0))
            for s in range(cols_i)
        )
        for t in range(len(rows_o))
    )


# -- cochains --------------------------------------------------------------


class Cochain:
    """Rational value on each nondegenerate p-simplex; 0 on degenerates."""

    __slots__ = ("x", "p", "values")

    def __init__(self, x, p, values=()):
        self.x = x
        self.p = int(p)
        base = {s: _ZERO for s in x.nondegenerate(p)} if p <= x.dim_cap else {}
        for s, v in (values.items() if isinstance(values, dict) else values):
            if s not in base:
                raise ParameterError("value on unknown or degenerate simplex %r" % (s,))
            base[s] = base[s] + v
        self.values = base

    def value(self, simplex):
        return self.values.get(simplex, _ZERO)

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.p == other.p
            and self.values == other.values
        )

    def __add__(self, other):
        return Cochain(self.x, self.p, [(s, self.values[s] + other.values[s]) for s in self.values])

    def __sub__(self, other):
        return Cochain(self.x, self.p, [(s, self.values[s] - other.values[s]) for s in self.values])

    def coboundary(self):
        """Simplicial coboundary: alternating sum over faces, 0 on degenerate faces."""
        out = []
        p = self.p
        for s in self.x.nondegenerate(p + 1):
            total = _ZERO
            for i in range(p + 2):
                f = self.x.d(p + 1, i, s)
                if not self.x.is_degenerate(p, f):
                    v = self.values.get(f, _ZERO)
                    total = total + (-v if i % 2 else v)
            out.append((s, total))
        return Cochain(self.x, p + 1, out)

    @classmethod
    def elementary(cls, x, p, simplex, value=Fraction(1)):
        return cls(x, p, [(simplex, value)])


# -- form fields ------------------------------------------------------------


class FormField:
    """Face-compatible family of PolyForms over the nondegenerate simplices.

    The form on a degenerate simplex is determined by pulling the form on
    its nondegenerate base back along the collapse map, so only forms on
    nondegenerate simplices are stored.
    """

    def __init__(self, x, degree, forms):
        self.x = x
        self.p = int(degree)
        self.forms = {}
        for n in x.dims():
            for s in x.nondegenerate(n):
                form = forms.get((n, s))
                if form is None:
                    form = PolyForm.zero(n, self.p)
                if form.n != n or form.p != self.p:
                    raise ParameterError("form on %r has the wrong type" % (s,))
                self.forms[(n, s)] = form

    def form_on(self, n, s):
        """The form on an arbitrary simplex, degenerate ones via collapse pullback."""
        if not self.x.is_degenerate(n, s):
            return self.forms[(n, s)]
        j, base = self.x.witness[(n, s)]
        return self.form_on(n - 1, base).pullback(collapse_matrix(n - 1, j))

    def validate(self):
        """Face-compatibility witnesses: (n, simplex, face index) triples."""
        bad = []
        for n in range(1, self.x.dim_cap + 1):
            for s in self.x.nondegenerate(n):
                here = self.forms[(n, s)]
                for i in range(n + 1):
                    restricted = here.pullback(coface_matrix(n, i))
                    expected = self.form_on(n - 1, self.x.d(n, i, s))
                    if restricted != expected:
                        bad.append((n, s, i))
        return bad

    def d(self):
        return FormField(self.x, self.p + 1, {k: f.d() for k, f in self.forms.items()})

    def wedge(self, other):
        if other.x is not self.x:
            raise ParameterError("wedge needs fields over the same base")
        return FormField(
            self.x,
            self.p + other.p,
            {k: f.wedge(other.forms[k]) for k, f in self.forms.items()},
        )

    def __add__(self, other):
        return FormField(self.x, self.p, {k: f + other.forms[k] for k, f in self.forms.items()})

    def __sub__(self, other):
        return FormField(self.x, self.p, {k: f - other.forms[k] for k, f in self.forms.items()})

    def scale(self, c):
        return FormField(self.x, self.p, {k: f.scale(c) for k, f in self.forms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, FormField)
            and self.x is other.x
            and self.p == other.p
            and self.forms == other.forms
        )


def derham_map(field, check=True):
    """Integrate a degree-p field over the p-simplices: the comparison cochain.

    This is a cochain map: derham_map(d omega) equals the simplicial
    coboundary of derham_map(omega), which is the Stokes identity.
    """
    if check:
        bad = field.validate()
        if bad:
            raise CompatibilityError("field is not face-compatible", witness=bad[0])
    x = field.x
    if field.p > x.dim_cap:
        raise ParameterError("degree above the cap")
    return Cochain(
        x,
        field.p,
        [(s, field.forms[(field.p, s)].integrate()) for s in x.nondegenerate(field.p)],
    )


def elementary_whitney(m, subset):
    """Whitney form of the vertex subset J on Delta^m:
    p! * sum_k (-1)^k t_{j_k} dt_{j_0} ^ ... (omit k) ... ^ dt_{j_p}."""
    J = tuple(subset)
    p = len(J) - 1
    raw = []
    fact = math.factorial(p)
    for k in range(p + 1):
        exps = [0] * (m + 1)
        exps[J[k]] = 1
        idx = J[:k] + J[k + 1:]
        raw.append((Fraction(fact * (-1) ** k), tuple(exps), idx))
    return PolyForm.from_raw(m, p, raw)


def whitney(cochain):
    """Elementary-form right inverse of the comparison map.

    On each nondegenerate m-simplex the field is the cochain-weighted sum of
    elementary Whitney forms over all (p+1)-vertex subsets; the weight is the
    cochain value on the corresponding iterated face (0 when degenerate).
    """
    x = cochain.x
    p = cochain.p
    forms = {}
    for m in x.dims():
        for s in x.nondegenerate(m):
            if m < p:
                continue
            total = PolyForm.zero(m, p)
            for J in itertools.combinations(range(m + 1), p + 1):
                face, dim = s, m
                for i in range(m, -1, -1):
                    if i not in J:
                        face = x.d(dim, i, face)
                        dim -= 1
                if x.is_degenerate(p, face):
                    continue
                v = cochain.value(face)
                if v != 0:
                    total = total + elementary_whitney(m, J).scale(v)
            forms[(m, s)] = total
    return FormField(x, p, forms)
