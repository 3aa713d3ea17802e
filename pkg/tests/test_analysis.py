"""Growth degree, equivalence modulo growth, and ultimate-polynomial
diagnostics."""

import pytest

from conftest import words_up_to
from zpoly.cplc import PumpingPattern, constant_cplc, indicator_cplc, zero_cplc
from zpoly.lang import Alphabet, compile_regex
from zpoly.analysis import (BudgetExhausted, CertifiedInfeasible, SearchBudget,
                            equiv_mod_k, growth_degree, normalize_pattern,
                            pattern_polynomial, ultimate_poly_check)

AB = Alphabet(["a", "b"])
A1 = Alphabet(["a"])


# ---------------------------------------------------------------------------
# growth degree


def test_growth_of_zero():
    v = growth_degree(zero_cplc(AB))
    assert v.degree == -1 and not v.budget_exhausted


def test_growth_of_hidden_zero(wa):
    v = growth_degree(wa.sub(wa))
    assert v.degree == -1 and not v.budget_exhausted


FIVE_INDICATORS = ["a(a|b)*", "(a|b)*b", "(a|b)*a(a|b)*", "ab|ba", "b*"]


@pytest.mark.parametrize("regex", FIVE_INDICATORS)
def test_growth_of_indicators_is_zero(regex):
    f = indicator_cplc(compile_regex(regex, AB))
    v = growth_degree(f)
    assert v.degree == 0 and not v.budget_exhausted


def test_growth_of_count_a(wa):
    v = growth_degree(wa)
    assert v.degree == 1 and not v.budget_exhausted
    assert v.witness is not None and v.witness_poly.total_degree() == 1


def test_growth_of_signed_length(signed):
    v = growth_degree(signed)
    assert v.degree == 1 and not v.budget_exhausted


def test_growth_of_product_counts(product_counts):
    v = growth_degree(product_counts)
    assert v.degree == 2 and not v.budget_exhausted
    assert v.witness.size == 2


def test_growth_of_itimesj_needs_two_pumps(itimesj):
    v = growth_degree(itimesj)
    assert v.degree == 2 and not v.budget_exhausted
    assert v.witness.size == 2
    # no single-pump family reaches degree 2
    budget = SearchBudget()
    from zpoly.analysis import _exhaustive_patterns
    from zpoly import series
    rep = series.minimize(itimesj.to_linrep())
    for p in _exhaustive_patterns(AB, 1, budget):
        norm = normalize_pattern(itimesj, p)
        assert pattern_polynomial(itimesj, norm, rep=rep).total_degree() <= 1


def test_growth_witness_realizes(product_counts):
    v = growth_degree(product_counts)
    for point in [(4, 5), (7, 7)]:
        assert product_counts.eval(v.witness.realize(point)) == \
            v.witness_poly.eval(point)


# ---------------------------------------------------------------------------
# pattern polynomials and normalization


def test_pattern_polynomial_signed_length(signed):
    # along even pump steps the signed length is linear
    p = PumpingPattern(((), ()), (("a", "a"),))
    poly = pattern_polynomial(signed, p)
    assert poly.total_degree() == 1
    for n in range(3, 8):
        assert poly.eval((n,)) == signed.eval(("a",) * (2 * n))


def test_normalize_pattern_makes_pumps_idempotent(signed):
    p = PumpingPattern(((), ()), (("a",),))
    norm = normalize_pattern(signed, p)
    assert norm.pumps[0] == ("a", "a")
    again = normalize_pattern(signed, norm)
    assert again == norm


def test_ultimate_poly_check_step_sensitivity(signed):
    p = PumpingPattern(((), ()), (("a",),))
    r1, = ultimate_poly_check(signed, [p], step=1)
    assert not r1.is_polynomial and r1.poly is None
    r2, = ultimate_poly_check(signed, [p], step=2)
    assert r2.is_polynomial and r2.poly.total_degree() == 1


def test_ultimate_poly_check_plain_count(wa):
    p = PumpingPattern(((), ("b",)), (("a",),))
    r, = ultimate_poly_check(wa, [p], step=1)
    assert r.is_polynomial and r.poly.total_degree() == 1


# ---------------------------------------------------------------------------
# equivalence modulo growth


def test_equiv_mod_exact(wa):
    assert equiv_mod_k(wa, wa.scale(2).sub(wa), -1)
    assert not equiv_mod_k(wa, wa.scale(2), -1)


def test_equiv_mod_bounded(wa):
    g = wa.add(indicator_cplc(compile_regex("a(a|b)*", AB)))
    assert equiv_mod_k(wa, g, 0)       # difference is an indicator
    assert not equiv_mod_k(wa.scale(2), zero_cplc(AB), 0)  # linear difference
    assert equiv_mod_k(wa.scale(2), zero_cplc(AB), 1)


def test_equiv_mod_product(product_counts, wa):
    assert not equiv_mod_k(product_counts, zero_cplc(AB), 1)
    assert equiv_mod_k(product_counts, product_counts.add(wa), 1)


# ---------------------------------------------------------------------------
# certified mode


def test_certified_mode_small_monoid():
    """w -> |w| + 1 over a unary alphabet has a 3-element product monoid,
    small enough for the complete enumeration."""
    f = indicator_cplc(compile_regex("a*", A1)).cauchy(
        indicator_cplc(compile_regex("a*", A1)))
    v = growth_degree(f, SearchBudget(), mode="certified")
    assert v.degree == 1 and not v.budget_exhausted and v.mode == "certified"


def test_certified_mode_infeasible(product_counts):
    budget = SearchBudget(certified_cap=1000)
    with pytest.raises(CertifiedInfeasible):
        growth_degree(product_counts, budget, mode="certified")


def test_unknown_mode_rejected(wa):
    with pytest.raises(ValueError):
        growth_degree(wa, mode="heuristic")
