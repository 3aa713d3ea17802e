"""Exact rational linear algebra and polynomial utilities."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zpoly.exact import (MPoly, QMat, RowBasis, UPoly, char_poly,
                         classify_roots, cyclotomic, euler_phi, gauss_rank,
                         interpolate_grid, poly_cauchy, power_sum,
                         solve_linear)


def test_qmat_algebra():
    a = QMat([[1, 2], [3, 4]])
    b = QMat([[0, 1], [1, 0]])
    assert a * b == QMat([[2, 1], [4, 3]])
    assert a + b - b == a
    assert a.scale(Fraction(1, 2)) == QMat([[Fraction(1, 2), 1],
                                            [Fraction(3, 2), 2]])
    assert a.matvec([1, 1]) == (3, 7)
    assert a.vecmat([1, 1]) == (4, 6)
    assert a.transpose().transpose() == a
    assert a.trace() == 5
    assert a.power(0) == QMat.identity(2)
    assert a.power(3) == a * a * a


def test_gauss_rank():
    assert gauss_rank([[1, 2], [2, 4]]) == 1
    assert gauss_rank([[1, 0], [0, 1]]) == 2
    assert gauss_rank([[0, 0]]) == 0


def test_row_basis_coords():
    basis = RowBasis(3)
    assert basis.insert([1, 0, 0])
    assert basis.insert([1, 1, 0])
    assert not basis.insert([2, 1, 0])
    assert basis.contains([5, 3, 0])
    assert not basis.contains([0, 0, 1])
    coords = basis.coords([3, 2, 0])
    assert coords is not None
    # reconstruct: 3*e1 + 2*(e1+e2) would be wrong; check the combination
    vecs = [(1, 0, 0), (1, 1, 0)]
    recon = [sum(c * v[i] for c, v in zip(coords, vecs)) for i in range(3)]
    assert recon == [3, 2, 0]


def test_solve_linear():
    # x + y = 3, x - y = 1  ->  x = 2, y = 1
    sol = solve_linear([[1, 1, 3], [1, -1, 1]])
    assert sol == (2, 1)
    assert solve_linear([[1, 1, 0], [1, 1, 1]]) is None


def test_upoly_divmod():
    x = UPoly.x()
    p = (x - UPoly.const(1)) * (x + UPoly.const(2))
    q, r = p.divmod(x - UPoly.const(1))
    assert r.is_zero() and q == x + UPoly.const(2)
    assert p.divides_exactly(x - UPoly.const(1)) == x + UPoly.const(2)
    assert p.divides_exactly(x - UPoly.const(3)) is None
    assert p.eval(1) == 0 and p.eval(3) == 10


def test_char_poly_companion():
    # companion matrix of X^2 - X - 1 (Fibonacci)
    m = QMat([[0, 1], [1, 1]])
    p = char_poly(m)
    x = UPoly.x()
    assert p == x * x - x - UPoly.const(1)


def test_char_poly_diagonal():
    m = QMat([[2, 0], [0, 3]])
    x = UPoly.x()
    assert char_poly(m) == (x - UPoly.const(2)) * (x - UPoly.const(3))


def test_euler_phi_and_cyclotomic():
    assert [euler_phi(n) for n in range(1, 9)] == [1, 1, 2, 2, 4, 2, 6, 4]
    x = UPoly.x()
    assert cyclotomic(1) == x - UPoly.const(1)
    assert cyclotomic(2) == x + UPoly.const(1)
    assert cyclotomic(4) == x * x + UPoly.const(1)
    # product of cyclotomics over divisors of 6 is X^6 - 1
    prod = UPoly.const(1)
    for d in (1, 2, 3, 6):
        prod = prod * cyclotomic(d)
    want = [-1, 0, 0, 0, 0, 0, 1]
    assert prod == UPoly(want)


def test_classify_roots():
    x = UPoly.x()
    one = UPoly.const(1)
    assert classify_roots(x * (x - one), "zero_one")
    assert classify_roots(x * x, "zero_one")
    assert not classify_roots(x + one, "zero_one")          # root -1
    assert classify_roots(x + one, "zero_union_unity")      # -1 is a unity root
    assert classify_roots((x * x + one) * x, "zero_union_unity")  # roots 0, +-i
    assert not classify_roots(x - UPoly.const(2), "zero_union_unity")
    assert not classify_roots(x * x - UPoly.const(2), "zero_union_unity")


def test_mpoly_eval_and_degree():
    x0 = MPoly.var(2, 0)
    x1 = MPoly.var(2, 1)
    p = x0 * x1 + x0.scale(3) - MPoly.const(2, 7)
    assert p.eval((2, 5)) == 2 * 5 + 6 - 7
    assert p.total_degree() == 2
    assert MPoly(2).total_degree() == -1


def _random_mpoly(rng, arity, deg):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        mono = tuple(rng.randint(0, deg) for _ in range(arity))
        terms[mono] = rng.randint(-9, 9)
    return MPoly(arity, terms)


def test_interpolation_round_trip_100_random():
    rng = random.Random(7)
    for _ in range(100):
        arity = rng.randint(1, 3)
        deg = rng.randint(0, 3)
        p = _random_mpoly(rng, arity, deg)
        q = interpolate_grid(arity, deg, 5, p.eval)
        assert q == p


def test_power_sum_closed_forms():
    # sum_{i=0}^{n} i^p
    for p in range(5):
        sp = power_sum(p)
        for n in range(8):
            assert sp.eval(n) == sum(i ** p for i in range(n + 1))


def test_poly_cauchy_vs_brute_100_random():
    """(p *c q)(X) = sum_{Y=0}^{X} p(Y) q(X - Y) in the convolved variable."""
    rng = random.Random(11)
    for _ in range(100):
        arity = rng.randint(1, 2)
        var = rng.randint(0, arity - 1)
        p = _random_mpoly(rng, arity, 2)
        q = _random_mpoly(rng, arity, 2)
        r = poly_cauchy(p, q, var)
        for _probe in range(4):
            point = [rng.randint(0, 8) for _ in range(arity)]
            want = 0
            for y in range(point[var] + 1):
                pp = list(point)
                pp[var] = y
                qq = list(point)
                qq[var] = point[var] - y
                want += p.eval(pp) * q.eval(qq)
            assert r.eval(point) == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4),
       st.lists(st.integers(-5, 5), min_size=1, max_size=4))
def test_upoly_ring_laws(a, b):
    p, q = UPoly(a), UPoly(b)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) - q == p
    for x in (-2, 0, 3):
        assert (p * q).eval(x) == p.eval(x) * q.eval(x)
