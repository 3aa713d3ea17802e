"""Shared fixtures and independent brute-force oracles.

The oracles here recompute series operations directly from their
definitions (split enumeration, pointwise products, truncated star sums)
so the library's algebra is checked against something that cannot share
its bugs.
"""

import itertools

import pytest

from zpoly.lang import Alphabet, compile_regex
from zpoly.cplc import indicator_cplc, constant_cplc


# ---------------------------------------------------------------------------
# word enumeration


def words_up_to(letters, n, include_empty=True):
    out = [()] if include_empty else []
    for k in range(1, n + 1):
        out.extend(itertools.product(letters, repeat=k))
    return out


# ---------------------------------------------------------------------------
# brute-force series oracles (work on any callable word -> number)


def brute_cauchy(f, g, word):
    word = tuple(word)
    return sum(f(word[:i]) * g(word[i:]) for i in range(len(word) + 1))


def brute_hadamard(f, g, word):
    return f(word) * g(word)


def brute_star(f, word):
    """Sum over all factorizations into nonempty pieces; requires f(eps)=0."""
    word = tuple(word)
    if not word:
        return 1
    total = 0
    n = len(word)
    for cuts in itertools.product([0, 1], repeat=n - 1):
        pieces = []
        start = 0
        for i, c in enumerate(cuts, start=1):
            if c:
                pieces.append(word[start:i])
                start = i
        pieces.append(word[start:])
        prod = 1
        for p in pieces:
            prod *= f(p)
        total += prod
    return total


# ---------------------------------------------------------------------------
# standard example functions


@pytest.fixture(scope="session")
def ab():
    return Alphabet(["a", "b"])


@pytest.fixture(scope="session")
def unary():
    return Alphabet(["a"])


def signed_length(unary_alphabet):
    """(-1)^{|w|} |w| as a Cauchy combination over {a}."""
    odd = compile_regex("a(aa)*", unary_alphabet)
    even = compile_regex("(aa)*", unary_alphabet)
    ind = indicator_cplc
    c = (ind(odd).cauchy(ind(odd))
         .add(ind(even).cauchy(ind(even)))
         .sub(ind(even).cauchy(ind(odd)))
         .sub(ind(odd).cauchy(ind(even))))
    return c.add(ind(odd)).sub(ind(even))


@pytest.fixture(scope="session")
def signed(unary):
    return signed_length(unary)


def count_a(alphabet):
    """|w|_a = 1_{A*a} (x) 1_{A*}."""
    body = "|".join(str(x) for x in alphabet)
    return indicator_cplc(compile_regex("(%s)*a" % body, alphabet)).cauchy(
        indicator_cplc(compile_regex("(%s)*" % body, alphabet)))


@pytest.fixture(scope="session")
def wa(ab):
    return count_a(ab)


def _wa_times_wb(ab):
    # |w|_a * |w|_b = #{(x, y) : a at x, b at y}
    #              = 1_{A*a} (x) 1_{A*b} (x) 1_{A*}   (x before y)
    #              + 1_{A*b} (x) 1_{A*a} (x) 1_{A*}   (y before x)
    ind = indicator_cplc
    xa = compile_regex("(a|b)*a", ab)
    xb = compile_regex("(a|b)*b", ab)
    rest = compile_regex("(a|b)*", ab)
    return (ind(xa).cauchy(ind(xb)).cauchy(ind(rest))
            .add(ind(xb).cauchy(ind(xa)).cauchy(ind(rest))))


@pytest.fixture(scope="session")
def product_counts(ab):
    return _wa_times_wb(ab)


@pytest.fixture(scope="session")
def itimesj(ab):
    """f(a^i b^j) = i*j, zero off a*b*."""
    ind = indicator_cplc
    return (ind(compile_regex("a*a", ab))
            .cauchy(ind(compile_regex("a*b*b", ab)))
            .cauchy(ind(compile_regex("b*", ab))))
