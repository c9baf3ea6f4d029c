"""Independent oracles for the test suite.

These deliberately avoid the package's own algorithms: Smith normal form
and ranks come from sympy, integrals from scipy quadrature or sympy
symbolic integration, and counting problems from direct dynamic programs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form


def snf_diagonal(rows, nrows, ncols):
    """Nonzero Smith normal form diagonal of an integer matrix, via sympy."""
    if nrows == 0 or ncols == 0:
        return []
    m = sympy.Matrix(nrows, ncols, lambda i, j: rows.get((i, j), 0))
    s = smith_normal_form(m, domain=sympy.ZZ)
    return sorted(abs(s[i, i]) for i in range(min(nrows, ncols)) if s[i, i] != 0)


def rational_rank(rows, nrows, ncols):
    if nrows == 0 or ncols == 0:
        return 0
    m = sympy.Matrix(nrows, ncols, lambda i, j: sympy.Rational(rows.get((i, j), 0)))
    return m.rank()


def betti_from_matrices(dims, boundaries):
    """Betti numbers from boundary matrices alone: dim - rank_in - rank_out."""
    out = []
    top = len(dims) - 1
    for n in range(top + 1):
        r_out = rational_rank(*boundaries[n]) if n >= 1 else 0
        r_in = rational_rank(*boundaries[n + 1]) if n + 1 <= top else 0
        out.append(dims[n] - r_in - r_out)
    return tuple(out)


def simplex_monomial_integral_symbolic(exps):
    """Exact integral of t_1^a_1 ... t_n^a_n over the standard simplex, by
    iterated symbolic integration."""
    n = len(exps)
    ts = sympy.symbols("t1:%d" % (n + 1), positive=True)
    expr = sympy.Integer(1)
    for t, a in zip(ts, exps):
        expr *= t ** a
    for i in range(n - 1, -1, -1):
        upper = 1 - sum(ts[:i])
        expr = sympy.integrate(expr, (ts[i], 0, upper))
    r = sympy.Rational(expr)
    return Fraction(r.p, r.q)


def triangle_quadrature(f, tol=1e-12):
    """Adaptive numerical quadrature of f(t1, t2) over the standard triangle."""
    from scipy import integrate

    val, err = integrate.dblquad(
        lambda t2, t1: f(t1, t2), 0.0, 1.0, lambda t1: 0.0, lambda t1: 1.0 - t1,
        epsabs=tol, epsrel=tol,
    )
    return val, err


def strict_chain_count(p, q, length):
    """Number of strictly increasing chains of the given length in the grid
    poset [p] x [q]; these index the nondegenerate simplices of the product
    of standard simplices."""
    points = [(a, b) for a in range(p + 1) for b in range(q + 1)]

    def less(u, v):
        return u != v and u[0] <= v[0] and u[1] <= v[1]

    count = 0
    for chain in itertools.combinations(points, length):
        ordered = sorted(chain)
        if all(less(ordered[i], ordered[i + 1]) for i in range(len(ordered) - 1)):
            count += 1
    return count
