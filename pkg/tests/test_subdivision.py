"""The subdivision operator, its chain homotopy, and diameter shrinking."""

import random
from fractions import Fraction

import pytest

from ssetkit.errors import ParameterError
from ssetkit.randomsuite import random_affine_simplex, subdivision_suite
from ssetkit.subdivision import (
    AffineChain,
    AffineSimplex,
    boundary,
    cone,
    homotopy,
    iterate_subdivision,
    iterated_diameter,
    standard_affine_simplex,
    subdivide,
)


def seg(a=0, b=1):
    return AffineSimplex([(a,), (b,)])


def test_boundary_of_segment():
    c = boundary(AffineChain.of(seg()))
    assert c.terms == {AffineSimplex([(1,)]): Fraction(1), AffineSimplex([(0,)]): Fraction(-1)}


def test_boundary_squared_zero():
    tri = AffineSimplex([(0, 0), (1, 0), (0, 1)])
    assert boundary(boundary(AffineChain.of(tri))).is_zero()


def test_boundary_linearity():
    c = AffineChain([(seg(0, 1), Fraction(2)), (seg(1, 2), Fraction(1))])
    b = boundary(c)
    assert b.terms[AffineSimplex([(2,)])] == 1
    assert b.terms[AffineSimplex([(0,)])] == -2
    assert b.terms[AffineSimplex([(1,)])] == 1  # 2 - 1 from the two segments


def test_subdivide_segment_midpoint():
    s = subdivide(AffineChain.of(seg()))
    mid = (Fraction(1, 2),)
    assert s.terms == {
        AffineSimplex([mid, (1,)]): Fraction(1),
        AffineSimplex([mid, (0,)]): Fraction(-1),
    }


def test_subdivide_triangle_six_pieces():
    tri = AffineSimplex([(0, 0), (1, 0), (0, 1)])
    s = subdivide(AffineChain.of(tri))
    assert len(s.terms) == 6
    assert all(abs(c) == 1 for c in s.terms.values())


def test_homotopy_base_cases():
    v = AffineSimplex([(0,)])
    assert homotopy(AffineChain.of(v)).is_zero()
    t = homotopy(AffineChain.of(seg()))
    # one 2-simplex through the midpoint whose boundary telescopes to S - id
    assert t.dimension == 2
    lhs = boundary(t)
    rhs = subdivide(AffineChain.of(seg())) - AffineChain.of(seg())
    assert lhs == rhs


def test_identities_random_exact():
    rng = random.Random(17)
    for n in range(1, 5):
        for _ in range(10):
            c = AffineChain.of(random_affine_simplex(rng, n))
            assert (boundary(subdivide(c)) - subdivide(boundary(c))).is_zero()
            assert boundary(homotopy(c)) + homotopy(boundary(c)) == subdivide(c) - c


def test_augmentation_preserved():
    # S is the identity on 0-chains, so pushing any chain down to points by
    # the boundary and comparing coefficient sums sees no difference.
    rng = random.Random(3)
    for _ in range(20):
        s = random_affine_simplex(rng, rng.randint(1, 3))
        chain = AffineChain.of(s, Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        zero_chain = chain
        while zero_chain.dimension and zero_chain.dimension > 0:
            zero_chain = boundary(zero_chain)
        assert subdivide(zero_chain) == zero_chain
    for _ in range(20):
        s = random_affine_simplex(rng, 1)
        c = AffineChain.of(s, Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        assert boundary(subdivide(c)) == boundary(c)


def test_diameter_unit_segment():
    assert iterated_diameter(seg(), 1) == Fraction(1, 4)


def test_diameter_identity_iteration():
    tri = standard_affine_simplex(2)
    assert iterated_diameter(tri, 0) == tri.diameter_squared()


def test_diameter_contraction_bound_dims_1_to_3():
    for n in (1, 2, 3):
        s = standard_affine_simplex(n)
        for m in (1, 2):
            got = iterated_diameter(s, m)
            bound = Fraction(n, n + 1) ** (2 * m) * s.diameter_squared()
            assert got <= bound


def test_six_pieces_diameter_enumeration():
    tri = standard_affine_simplex(2)
    chain = iterate_subdivision(tri, 1)
    assert len(chain.terms) == 6
    worst = max(s.diameter_squared() for s in chain.terms)
    assert worst <= Fraction(4, 9) * tri.diameter_squared()


def test_negative_iteration_refused():
    with pytest.raises(ParameterError):
        iterated_diameter(seg(), -1)


def test_suite_runner_reports_pass():
    rng = random.Random(0)
    rows = subdivision_suite(rng, trials=5)
    assert all(passed for _, passed, _ in rows)


def test_cone_boundary_formula():
    rng = random.Random(5)
    for _ in range(10):
        s = random_affine_simplex(rng, 2)
        c = AffineChain.of(s)
        b = (Fraction(1, 3), Fraction(1, 7))
        lhs = boundary(cone(b, c))
        rhs = c - cone(b, boundary(c))
        assert lhs == rhs
