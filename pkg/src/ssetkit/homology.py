"""Chain complexes, integral and rational (co)homology, cup products,
and the Mayer-Vietoris long exact sequence with mechanical exactness checks.

Normalized chains (degenerate simplices quotiented away) are the default;
the unnormalized complex is available for cross-checking. Betti numbers come
from exact rational ranks, torsion from integer Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterError, StructureError
from .linalg import Matrix, invariant_factors, nullspace, quotient_reps, rank, row_space, solve
from .simplicial import restrict, sub_intersection


class ChainComplex:
    """Graded free module with boundary matrices, over int or rat."""

    def __init__(self, ring, basis, boundary):
        if ring not in ("int", "rat"):
            raise ParameterError("ring must be 'int' or 'rat'")
        self.ring = ring
        self.basis = {n: tuple(b) for n, b in basis.items()}
        self.top = max(self.basis) if self.basis else 0
        self.boundary = dict(boundary)
        for n in range(1, self.top + 1):
            m = self.boundary.get(n)
            expected = (len(self.basis.get(n - 1, ())), len(self.basis.get(n, ())))
            if m is None or (m.nrows, m.ncols) != expected:
                raise StructureError("boundary matrix missing or misshaped in degree %d" % n)
        self._check_square_zero()

    def _check_square_zero(self):
        for n in range(2, self.top + 1):
            prod = self.boundary[n - 1] @ self.boundary[n]
            if not prod.is_zero():
                raise StructureError("boundary squared nonzero in degree %d" % n)

    def dim(self, n):
        return len(self.basis.get(n, ()))

    def boundary_or_zero(self, n):
        if 1 <= n <= self.top:
            return self.boundary[n]
        if n == self.top + 1:
            return Matrix.zeros(self.dim(self.top), 0)
        return Matrix.zeros(self.dim(n - 1) if n >= 1 else 0, self.dim(n))

    def euler_characteristic(self):
        return sum((-1) ** n * self.dim(n) for n in range(self.top + 1))


def chain_complex(x, ring="int", normalized=True):
    """Chain complex of a simplicial set; boundary is the alternating face sum.

    With normalized=True the basis is the nondegenerate simplices and faces
    landing on degenerate simplices are dropped.
    """
    bad = x.validate()
    if bad:
        raise StructureError("simplicial set fails %d identities" % len(bad))
    if normalized:
        basis = {n: x.nondegenerate(n) for n in x.dims()}
    else:
        basis = {n: x.simplices[n] for n in x.dims()}
    index = {n: {s: i for i, s in enumerate(basis[n])} for n in x.dims()}
    boundary = {}
    for n in range(1, x.dim_cap + 1):
        rows = [[0] * len(basis[n]) for _ in range(len(basis[n - 1]))]
        for j, s in enumerate(basis[n]):
            for i in range(n + 1):
                f = x.d(n, i, s)
                if normalized and x.is_degenerate(n - 1, f):
                    continue
                rows[index[n - 1][f]][j] += (-1) ** i
        boundary[n] = Matrix(rows, len(basis[n]))
    return ChainComplex(ring, basis, boundary)


@dataclass
class HomologySummary:
    betti: tuple
    torsion: dict

    def __str__(self):
        parts = ["betti %s" % (self.betti,)]
        for n in sorted(self.torsion):
            if self.torsion[n]:
                parts.append("H_%d torsion %s" % (n, self.torsion[n]))
        return "; ".join(parts)


def homology(complex_):
    """Betti numbers via rational ranks, torsion via Smith normal form."""
    betti = []
    torsion = {}
    for n in range(complex_.top + 1):
        r_in = rank(complex_.boundary_or_zero(n + 1))
        r_out = rank(complex_.boundary_or_zero(n))
        betti.append(complex_.dim(n) - r_in - r_out)
        if complex_.ring == "int":
            mat = complex_.boundary_or_zero(n + 1)
            ints = [[int(v) for v in row] for row in mat.rows]
            torsion[n] = tuple(d for d in invariant_factors(ints) if d > 1)
    if complex_.ring == "rat":
        torsion = {}
    return HomologySummary(tuple(betti), torsion)


def torsion_coefficients(complex_, n):
    if complex_.ring != "int":
        raise ParameterError("torsion requested over the rationals")
    mat = complex_.boundary_or_zero(n + 1)
    ints = [[int(v) for v in row] for row in mat.rows]
    return tuple(d for d in invariant_factors(ints) if d > 1)


# -- rational cohomology ------------------------------------------------


class CochainSpaces:
    """Per-degree cocycle/coboundary data of a simplicial set over Q."""

    def __init__(self, x):
        self.x = x
        self.complex = chain_complex(x, ring="rat")
        self.basis = self.complex.basis
        self.index = {n: {s: i for i, s in enumerate(self.basis[n])} for n in x.dims()}
        self._reps = {}

    def delta(self, p):
        """Coboundary matrix C^p -> C^{p+1} (transpose of boundary)."""
        return self.complex.boundary_or_zero(p + 1).transpose()

    def cocycle_rows(self, p):
        rows = nullspace(self.delta(p))
        return Matrix(list(rows), self.complex.dim(p))

    def coboundary_rows(self, p):
        if p == 0:
            return Matrix([], self.complex.dim(0))
        return self.delta(p - 1).transpose()

    def reps(self, p):
        """Canonical cohomology class representatives (RREF, reduced mod coboundaries)."""
        if p not in self._reps:
            if p > self.x.dim_cap or self.complex.dim(p) == 0:
                self._reps[p] = []
            else:
                self._reps[p] = quotient_reps(self.cocycle_rows(p), self.coboundary_rows(p))
        return self._reps[p]

    def betti(self, p):
        return len(self.reps(p))

    def is_cocycle(self, p, vec):
        return all(v == 0 for v in self.delta(p).matvec(vec))

    def express(self, p, vec):
        """Coordinates of a cocycle's class in the canonical representative basis."""
        if not self.is_cocycle(p, vec):
            raise ParameterError("vector is not a cocycle in degree %d" % p)
        reps = self.reps(p)
        cols = [tuple(r) for r in reps] + [tuple(r) for r in row_space(self.coboundary_rows(p)).rows]
        mat = Matrix.from_columns(cols, self.complex.dim(p))
        sol = solve(mat, vec)
        if sol is None:
            raise StructureError("cocycle not in span of class representatives")
        return tuple(sol[: len(reps)])

    def value_at(self, p, vec, simplex):
        """Value of a degree-p cochain vector on any simplex (0 on degenerates)."""
        if self.x.is_degenerate(p, simplex):
            return Fraction(0)
        return vec[self.index[p][simplex]]

    def cup(self, p, avec, q, bvec):
        """Alexander-Whitney cup product of cochain vectors, front face times back face."""
        n = p + q
        if n > self.x.dim_cap:
            raise ParameterError("cup product degree exceeds the cap")
        out = []
        for s in self.basis[n]:
            front, m = s, n
            for _ in range(q):
                front = self.x.d(m, m, front)
                m -= 1
            back, m = s, n
            for _ in range(p):
                back = self.x.d(m, 0, back)
                m -= 1
            va = self.value_at(p, avec, front) if not self.x.is_degenerate(p, front) else Fraction(0)
            vb = self.value_at(q, bvec, back) if not self.x.is_degenerate(q, back) else Fraction(0)
            out.append(va * vb)
        return tuple(out)


@dataclass
class CohomologyRing:
    """Cohomology basis per degree plus the cup product table on basis classes."""

    x: object
    spaces: CochainSpaces
    reps: dict
    table: dict = field(default_factory=dict)

    def betti(self):
        return tuple(len(self.reps.get(p, [])) for p in self.x.dims())

    def product(self, p, i, q, j):
        """Class coordinates of reps[p][i] cup reps[q][j] in degree p+q."""
        return self.table[(p, i, q, j)]


def cohomology_ring(x):
    """Rational cohomology with the full multiplication table of basis classes."""
    spaces = CochainSpaces(x)
    reps = {p: spaces.reps(p) for p in x.dims()}
    ring = CohomologyRing(x, spaces, reps)
    cap = x.dim_cap
    for p in x.dims():
        for i, a in enumerate(reps[p]):
            for q in x.dims():
                if p + q > cap:
                    continue
                for j, b in enumerate(reps[q]):
                    prod = spaces.cup(p, a, q, b)
                    ring.table[(p, i, q, j)] = spaces.express(p + q, prod)
    return ring


def unit_class_coords(ring):
    """Coordinates of the constant-1 cocycle in degree 0."""
    ones = tuple(Fraction(1) for _ in ring.spaces.basis[0])
    return ring.spaces.express(0, ones)


def induced_map(f, p, target_spaces=None, source_spaces=None):
    """Matrix of f^*: H^p(target) -> H^p(source) in the canonical bases."""
    ts = target_spaces if target_spaces is not None else CochainSpaces(f.target)
    ss = source_spaces if source_spaces is not None else CochainSpaces(f.source)
    rows = []
    for rep in ts.reps(p):
        pulled = []
        for s in ss.basis[p]:
            img = f(p, s)
            pulled.append(ts.value_at(p, rep, img))
        rows.append(ss.express(p, tuple(pulled)))
    m = Matrix(list(rows), len(ss.reps(p))) if rows else Matrix([], len(ss.reps(p)))
    return m.transpose()  # columns indexed by target classes


# -- Mayer-Vietoris ------------------------------------------------------


@dataclass
class MayerVietoris:
    """All groups and maps of the cohomology Mayer-Vietoris sequence, plus
    an exactness certificate computed by exact rank bookkeeping."""

    betti_x: tuple
    betti_a: tuple
    betti_b: tuple
    betti_ab: tuple
    alpha: dict     # p -> Matrix H^p(X) -> H^p(A) (+) H^p(B)
    beta: dict      # p -> Matrix H^p(A) (+) H^p(B) -> H^p(A cap B)
    connecting: dict  # p -> Matrix H^p(A cap B) -> H^{p+1}(X)
    nodes: list     # (node label, degree, composite_zero, rank_in, nullity_out, exact)

    def exact(self):
        return all(entry[5] for entry in self.nodes)


def mayer_vietoris(x, sub_a, sub_b):
    """Mayer-Vietoris sequence for a cover of x by two closed subcomplexes."""
    for n in x.dims():
        for s in x.nondegenerate(n):
            if s not in sub_a.get(n, ()) and s not in sub_b.get(n, ()):
                raise ParameterError(
                    "cover condition fails: simplex %r of dimension %d in neither part" % (s, n)
                )
    xa = restrict(x, sub_a)
    xb = restrict(x, sub_b)
    xab = restrict(x, sub_intersection(sub_a, sub_b))
    sp_x = CochainSpaces(x)
    sp_a = CochainSpaces(xa)
    sp_b = CochainSpaces(xb)
    sp_ab = CochainSpaces(xab)
    cap = x.dim_cap

    def restrict_vec(sp_from, sp_to, p, vec):
        return tuple(
            sp_from.value_at(p, vec, s) if sp_from.x.has(p, s) and s in sp_from.index[p] else Fraction(0)
            for s in sp_to.basis[p]
        )

    alpha = {}
    beta = {}
    connecting = {}
    for p in range(cap + 1):
        cols = []
        for rep in sp_x.reps(p):
            ca = sp_a.express(p, restrict_vec(sp_x, sp_a, p, rep))
            cb = sp_b.express(p, restrict_vec(sp_x, sp_b, p, rep))
            cols.append(tuple(ca) + tuple(cb))
        alpha[p] = Matrix.from_columns(cols, sp_a.betti(p) + sp_b.betti(p))

        cols = []
        for rep in sp_a.reps(p):
            cols.append(sp_ab.express(p, restrict_vec(sp_a, sp_ab, p, rep)))
        for rep in sp_b.reps(p):
            cols.append(tuple(-v for v in sp_ab.express(p, restrict_vec(sp_b, sp_ab, p, rep))))
        beta[p] = Matrix.from_columns(cols, sp_ab.betti(p))

    for p in range(cap):
        cols = []
        for rep in sp_ab.reps(p):
            # lift to A by zero-extension, take its coboundary, glue with 0 on B
            u = tuple(
                sp_ab.value_at(p, rep, s) if xab.has(p, s) and s in sp_ab.index[p] else Fraction(0)
                for s in sp_a.basis[p]
            )
            du = sp_a.delta(p).matvec(u)
            for s in sp_ab.basis[p + 1]:
                if du[sp_a.index[p + 1][s]] != 0:
                    raise StructureError("connecting cochain fails to vanish on the intersection")
            z = []
            for s in sp_x.basis[p + 1]:
                if s in sp_a.index[p + 1]:
                    z.append(du[sp_a.index[p + 1][s]])
                else:
                    z.append(Fraction(0))
            cols.append(sp_x.express(p + 1, tuple(z)))
        connecting[p] = Matrix.from_columns(cols, sp_x.betti(p + 1))

    nodes = []

    def check(label, p, incoming, outgoing):
        composite = outgoing @ incoming
        zero = composite.is_zero()
        r_in = rank(incoming)
        nullity = outgoing.ncols - rank(outgoing)
        nodes.append((label, p, zero, r_in, nullity, zero and r_in == nullity))

    for p in range(cap + 1):
        incoming = connecting[p - 1] if p >= 1 else Matrix.zeros(sp_x.betti(0), 0)
        check("H(X)", p, incoming, alpha[p])
        check("H(A)+H(B)", p, alpha[p], beta[p])
        outgoing = connecting[p] if p < cap else Matrix.zeros(0, sp_ab.betti(cap))
        check("H(AnB)", p, beta[p], outgoing)

    betti = lambda sp: tuple(sp.betti(p) for p in range(cap + 1))
    return MayerVietoris(
        betti(sp_x), betti(sp_a), betti(sp_b), betti(sp_ab),
        alpha, beta, connecting, nodes,
    )
