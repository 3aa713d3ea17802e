"""Growth analysis: pattern polynomials, growth degree, equivalence modulo
polynomial growth, and ultimate-polynomial diagnostics.

The growth degree of a function given as a level-k Cauchy combination is
found from below by evaluating the function on pumping families
alpha_0 w_1^{X_1} ... w_k^{X_k} alpha_k and interpolating the resulting
polynomials exactly.  The syntactic level is an upper bound on the degree,
so a witness of degree equal to the level settles the question; otherwise
the verdict carries a budget_exhausted flag.  Certified mode enumerates
pump words and connectors up to a completeness bound derived from the
factorization-forest depth; it is feasible only for tiny monoids.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from . import forests, series
from .cplc import Cplc, PumpingPattern, product_monoid
from .exact import MPoly, interpolate_grid
from .lang import monoid_aperiodic


class BudgetExhausted(RuntimeError):
    """An equivalence question could not be settled within the budget."""


class CertifiedInfeasible(RuntimeError):
    """The certified enumeration exceeds the configured hard cap."""


class PatternVerificationError(RuntimeError):
    """Interpolation failed to stabilize (the family is not ultimately
    polynomial at the probed offsets)."""


@dataclass
class SearchBudget:
    pump_len: int = 2          # max pump word length in the exhaustive source
    connector_len: int = 1     # max connector word length
    sample_len: int = 6        # sample words for forest extraction
    max_samples: int = 200
    tuple_cap: int = 100       # forest tuples kept per sample word
    max_patterns: int = 20000
    certified_cap: int = 200000
    monoid_cap: int = 100000
    seed: int = 0


@dataclass
class GrowthVerdict:
    degree: int
    mode: str
    budget_exhausted: bool
    witness: PumpingPattern | None = None
    witness_poly: MPoly | None = None
    patterns_tried: int = 0


# ---------------------------------------------------------------------------
# pattern polynomials


def _family_value(rep: series.LinRep, pattern: PumpingPattern, exponents,
                  cache: dict):
    v = rep.I
    v = _apply_word(rep, v, pattern.alphas[0])
    for i, (w, alpha) in enumerate(zip(pattern.pumps, pattern.alphas[1:])):
        m = _pump_power(rep, w, exponents[i], cache)
        v = m.vecmat(v)
        v = _apply_word(rep, v, alpha)
    return sum(x * y for x, y in zip(v, rep.F))


def _apply_word(rep, v, word):
    for a in word:
        v = rep.mats[a].vecmat(v)
    return v


def _pump_power(rep, word, e, cache):
    key = (word, e)
    if key in cache:
        return cache[key]
    base_key = (word, 1)
    if base_key not in cache:
        cache[base_key] = rep.word_matrix(word)
    m = cache[base_key].power(e) if e != 1 else cache[base_key]
    cache[key] = m
    return m


def pattern_polynomial(f: Cplc, pattern: PumpingPattern, rep=None,
                       scale: int = 1) -> MPoly:
    """The exact polynomial giving f on the pumping family for all large
    exponents.

    Fits on the grid {x0 .. x0+k}^l with x0 = 2(k+1) (k the level of f) and
    verifies on a disjoint shifted grid, doubling x0 once on failure.
    `scale` multiplies the exponents (used by the ultimate-polynomial
    check).
    """
    if rep is None:
        rep = series.minimize(f.to_linrep())
    k = f.level
    ell = pattern.size
    cache: dict = {}

    def value_at(point):
        return _family_value(rep, pattern, tuple(scale * x for x in point), cache)

    x0 = 2 * (k + 1)
    for _attempt in range(2):
        poly = interpolate_grid(ell, k, x0, value_at)
        ok = True
        for shift_point in itertools.product(range(x0 + k + 1, x0 + 2 * k + 2),
                                             repeat=ell):
            if poly.eval(shift_point) != value_at(shift_point):
                ok = False
                break
        if ok:
            return poly
        x0 *= 2
    raise PatternVerificationError(
        "family %r did not stabilize to a polynomial" % (pattern,))


def normalize_pattern(f: Cplc, pattern: PumpingPattern,
                      morphism=None) -> PumpingPattern:
    """Replace each pump word by an idempotent power (w -> w^omega) under
    the product monoid of f; already-idempotent pumps are kept."""
    if morphism is None:
        _, morphism = product_monoid(f)
    m = morphism.monoid
    _, omega = monoid_aperiodic(m)
    pumps = []
    for w in pattern.pumps:
        if not w:
            raise ValueError("empty pump word")
        x = morphism.image(w)
        pumps.append(w if m.is_idempotent(x) else w * omega)
    return PumpingPattern(pattern.alphas, tuple(pumps))


# ---------------------------------------------------------------------------
# pattern sources


def _words_up_to(letters, max_len, include_empty):
    out = [()] if include_empty else []
    for k in range(1, max_len + 1):
        out.extend(itertools.product(letters, repeat=k))
    return out


def _sample_words(alphabet, budget: SearchBudget):
    letters = list(alphabet.letters)
    words = []
    total = sum(len(letters) ** k for k in range(1, budget.sample_len + 1))
    if total <= budget.max_samples:
        words.extend(_words_up_to(letters, budget.sample_len, include_empty=False))
    else:
        rng = random.Random(budget.seed)
        for _ in range(budget.max_samples):
            k = rng.randint(1, budget.sample_len)
            words.append(tuple(rng.choice(letters) for _ in range(k)))
    for a in letters:
        words.append((a,) * 8)
    for a in letters:
        for b in letters:
            if a != b:
                words.append((a, b) * 4)
    return sorted(set(words))


def _exhaustive_patterns(alphabet, size, budget: SearchBudget):
    letters = list(alphabet.letters)
    pumps = _words_up_to(letters, budget.pump_len, include_empty=False)
    connectors = _words_up_to(letters, budget.connector_len, include_empty=True)
    count = 0
    for pump_combo in itertools.product(pumps, repeat=size):
        for alpha_combo in itertools.product(connectors, repeat=size + 1):
            yield PumpingPattern(alpha_combo, pump_combo)
            count += 1
            if count >= budget.max_patterns:
                return


def _certified_patterns(f: Cplc, size, morphism, budget: SearchBudget):
    """Complete pattern source for certified mode.

    Depth bound d = 3|M| + ceil(log2(2k+3)) + 1; pump words are a superset
    of the depth-<=d skeleton yields (all words up to length 2^(d-1) with
    idempotent image), connectors are shortest preimages of all monoid
    elements."""
    m = morphism.monoid
    k = f.level
    d = 3 * m.size + math.ceil(math.log2(2 * k + 3)) + 1
    max_pump = 2 ** (d - 1)
    letters = list(f.alphabet.letters)
    n_words = 0
    for j in range(1, max_pump + 1):
        n_words += len(letters) ** j
        if n_words > budget.certified_cap:
            raise CertifiedInfeasible(
                "certified enumeration needs more than %d pump candidates "
                "(cap %d)" % (budget.certified_cap, budget.certified_cap))
    pumps = [w for w in _words_up_to(letters, max_pump, include_empty=False)
             if m.is_idempotent(morphism.image(w))]
    connectors = []
    for x in range(m.size):
        w = morphism.shortest_preimage(x)
        if w is not None:
            connectors.append(w)
    connectors = sorted(set(connectors))
    for pump_combo in itertools.product(pumps, repeat=size):
        for alpha_combo in itertools.product(connectors, repeat=size + 1):
            yield PumpingPattern(alpha_combo, pump_combo)


# ---------------------------------------------------------------------------
# growth degree


def growth_degree(f: Cplc, budget: SearchBudget | None = None,
                  mode: str = "budgeted") -> GrowthVerdict:
    """The polynomial growth degree of f, searched from below.

    -1 means the zero function (decided exactly); a verdict of k with
    budget_exhausted False is definitive because the syntactic level bounds
    the degree from above.
    """
    if mode not in ("budgeted", "certified"):
        raise ValueError("unknown mode %r" % mode)
    budget = budget or SearchBudget()
    rep = series.minimize(f.to_linrep())
    if rep.dim == 0:
        return GrowthVerdict(-1, mode, False)
    k_max = f.level
    if k_max == 0:
        return GrowthVerdict(0, mode, False)

    monoid, morphism = product_monoid(f, cap=budget.monoid_cap)
    best_degree = 0
    witness = None
    witness_poly = None
    tried = 0
    seen = set()
    sample = None
    for size in range(k_max, 0, -1):
        sources = []
        if mode == "certified":
            sources.append(_certified_patterns(f, size, morphism, budget))
        else:
            sources.append(_exhaustive_patterns(f.alphabet, size, budget))
            if sample is None:
                sample = _sample_words(f.alphabet, budget)
            sources.append(iter(forests.extract_patterns(
                f, sample, size, cap=budget.tuple_cap, seed=budget.seed,
                morphism=morphism)))
        for pattern in itertools.chain(*sources):
            norm = normalize_pattern(f, pattern, morphism)
            if norm in seen:
                continue
            seen.add(norm)
            tried += 1
            poly = pattern_polynomial(f, norm, rep=rep)
            deg = poly.total_degree()
            if deg > k_max:
                raise AssertionError(
                    "pattern degree %d exceeds the syntactic level %d" % (deg, k_max))
            if deg > best_degree:
                best_degree = deg
                witness = norm
                witness_poly = poly
            if best_degree == k_max:
                return GrowthVerdict(best_degree, mode, False, witness,
                                     witness_poly, tried)
    exhausted = (mode == "budgeted" and best_degree < k_max)
    return GrowthVerdict(best_degree, mode, exhausted, witness,
                         witness_poly, tried)


# ---------------------------------------------------------------------------
# equivalence modulo growth


def equiv_mod_k(f: Cplc, g: Cplc, k: int,
                budget: SearchBudget | None = None,
                mode: str = "budgeted") -> bool:
    """Whether f - g has growth degree at most k (k = -1 means equality).

    Raises BudgetExhausted when the budgeted search can neither produce a
    witness of higher growth nor certify the bound.
    """
    h = f.sub(g)
    if h.is_zero_syntactic():
        return True
    if k < 0:
        return series.minimize(h.to_linrep()).dim == 0
    if h.level <= k:
        return True
    verdict = growth_degree(h, budget, mode)
    if verdict.degree > k:
        return False
    if verdict.degree == -1 or not verdict.budget_exhausted:
        return True
    raise BudgetExhausted(
        "cannot certify growth degree <= %d (best witness %d, level %d)"
        % (k, verdict.degree, h.level))


# ---------------------------------------------------------------------------
# ultimate polynomial diagnostics


@dataclass
class UltimatePolyReport:
    pattern: PumpingPattern
    step: int
    is_polynomial: bool
    poly: MPoly | None = None


def ultimate_poly_check(f: Cplc, patterns, step: int = 1, rep=None):
    """For each pattern, test whether X |-> f(... w_i^{step * X_i} ...) is
    ultimately polynomial, without normalizing the pump words.

    With step 1 this can fail on functions that are only polynomial along
    idempotent subsequences (the classical (-1)^n n example); a suitable
    step restores polynomiality."""
    if rep is None:
        rep = series.minimize(f.to_linrep())
    out = []
    for pattern in patterns:
        try:
            poly = pattern_polynomial(f, pattern, rep=rep, scale=step)
            out.append(UltimatePolyReport(pattern, step, True, poly))
        except PatternVerificationError:
            out.append(UltimatePolyReport(pattern, step, False, None))
    return out
