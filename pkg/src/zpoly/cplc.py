"""Integer combinations of Cauchy products of regular-language indicators.

A function is stored as a finite sum of terms  c * (1_{L0} (x) ... (x) 1_{Lj})
where each L_i is a canonical DFA.  Normalization enforces two invariants
that make syntactic cancellation as strong as possible:

  * no factor language contains the empty word -- a factor with epsilon is
    split into its epsilon-free part plus the one-point language {eps}, and
    1_{eps} factors are absorbed (they are the unit of the Cauchy product);
  * terms with identical factor lists are merged and zero terms dropped.

The term with an empty factor list denotes 1_{eps} itself.  The level of a
term with j+1 factors is j; the level of the function is the maximum term
level, and bounds the growth degree |f(w)| = O(|w|^level).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import lang, series
from .lang import Alphabet, Dfa


class Cplc:
    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms):
        """terms: iterable of (coef, factor_dfa_tuple); normalized on entry."""
        self.alphabet = alphabet
        self.terms = _normalize(alphabet, terms)

    # -- structure ---------------------------------------------------------------

    @property
    def level(self) -> int:
        """Maximum number of Cauchy factors minus one (0 for the zero function)."""
        lv = 0
        for _, fs in self.terms:
            lv = max(lv, max(0, len(fs) - 1))
        return lv

    def is_zero_syntactic(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Cplc) and self.alphabet == other.alphabet
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.alphabet, self.terms))

    # -- semantics ----------------------------------------------------------------

    def eval(self, word) -> int:
        """Direct evaluation by counting splits (factors are epsilon-free,
        so only splits into nonempty parts contribute)."""
        word = tuple(word)
        total = 0
        for coef, fs in self.terms:
            total += coef * _count_splits(word, fs)
        return total

    def eval_at_epsilon(self) -> int:
        return sum(coef for coef, fs in self.terms if not fs)

    # -- combinators ----------------------------------------------------------------

    def add(self, other: "Cplc") -> "Cplc":
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch")
        return Cplc(self.alphabet, list(self.terms) + list(other.terms))

    def scale(self, c: int) -> "Cplc":
        return Cplc(self.alphabet, [(c * coef, fs) for coef, fs in self.terms])

    def sub(self, other: "Cplc") -> "Cplc":
        return self.add(other.scale(-1))

    def cauchy(self, other: "Cplc") -> "Cplc":
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch")
        terms = []
        for c1, fs1 in self.terms:
            for c2, fs2 in other.terms:
                terms.append((c1 * c2, fs1 + fs2))
        return Cplc(self.alphabet, terms)

    def residual(self, word) -> "Cplc":
        """The function w |-> f(u w), term by term.

        With epsilon-free factors the one-letter rule is simply
        (1_{L0} (x) rest)|a = 1_{a^{-1} L0} (x) rest, and the epsilon term
        vanishes; renormalization re-splits any epsilon that a^{-1}L0 gained.
        """
        f = self
        for a in word:
            terms = []
            for coef, fs in f.terms:
                if not fs:
                    continue  # 1_{eps} has zero residual
                first = lang.residual_language(fs[0], (a,))
                terms.append((coef, (first,) + fs[1:]))
            f = Cplc(self.alphabet, terms)
        return f

    # -- compilation ----------------------------------------------------------------

    def to_linrep(self) -> series.LinRep:
        eps_rep = series.indicator(lang.epsilon_language(self.alphabet))
        total = None
        for coef, fs in self.terms:
            if not fs:
                rep = eps_rep
            else:
                rep = series.indicator(fs[0])
                for d in fs[1:]:
                    rep = rep.cauchy(series.indicator(d))
            rep = rep.scale(coef)
            total = rep if total is None else total.add(rep)
        if total is None:
            return series.LinRep(self.alphabet, (Fraction(0),),
                                 {a: [[Fraction(0)]] for a in self.alphabet},
                                 (Fraction(0),))
        return total

    def factor_dfas(self):
        """Distinct canonical factor DFAs, in a deterministic order."""
        seen = {}
        for _, fs in self.terms:
            for d in fs:
                seen.setdefault(d.key(), d)
        return [seen[k] for k in sorted(seen)]

    # -- serialization -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet.letters),
            "level": self.level,
            "terms": [{"coef": coef, "factors": [lang.dfa_to_json(d) for d in fs]}
                      for coef, fs in self.terms],
        }

    @staticmethod
    def from_json(data: dict) -> "Cplc":
        alphabet = Alphabet(data["alphabet"])
        terms = [(t["coef"], tuple(lang.dfa_from_json(d) for d in t["factors"]))
                 for t in data["terms"]]
        return Cplc(alphabet, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def __repr__(self):
        if not self.terms:
            return "Cplc(0)"
        bits = []
        for coef, fs in self.terms:
            if not fs:
                bits.append("%+d*[eps]" % coef)
            else:
                bits.append("%+d*%s" % (coef, "(x)".join("L%d" % d.n for d in fs)))
        return "Cplc(%s)" % " ".join(bits)


def _normalize(alphabet: Alphabet, raw_terms):
    merged: dict = {}
    order: list = []
    for coef, fs in raw_terms:
        coef = int(coef)
        if coef == 0:
            continue
        for expanded in _expand_epsilon(tuple(fs)):
            key = tuple(d.key() for d in expanded)
            if key not in merged:
                merged[key] = [0, expanded]
                order.append(key)
            merged[key][0] += coef
    out = []
    for key in sorted(order, key=lambda k: (len(k), k)):
        coef, fs = merged[key]
        if coef != 0:
            out.append((coef, fs))
    return tuple(out)


def _expand_epsilon(fs):
    """Rewrite a factor list into lists of epsilon-free nonempty factors.

    Yields factor tuples; a factor containing epsilon branches into its
    epsilon-free part and (absorbing the unit 1_{eps}) the list without it.
    Factors with the empty language kill the term.
    """
    fs = tuple(d.canonical() for d in fs)
    for i, d in enumerate(fs):
        if d.is_empty_language():
            return []
        if d.accepts_epsilon():
            rest = fs[:i] + fs[i + 1:]
            out = list(_expand_epsilon(rest))
            stripped = lang.strip_epsilon(d)
            if not stripped.is_empty_language():
                out.extend(_expand_epsilon(fs[:i] + (stripped,) + fs[i + 1:]))
            return out
    return [fs]


def _count_splits(word, fs) -> int:
    if not fs:
        return 1 if not word else 0
    n = len(word)
    k = len(fs)
    # ways[i][pos] = splits of word[pos:] across factors i..k-1, nonempty parts
    ways = [[0] * (n + 1) for _ in range(k + 1)]
    ways[k][n] = 1
    for i in range(k - 1, -1, -1):
        dfa = fs[i]
        for pos in range(n - 1, -1, -1):
            q = dfa.initial
            total = 0
            for end in range(pos + 1, n + 1):
                q = dfa.delta[word[end - 1]][q]
                if q in dfa.accepting:
                    total += ways[i + 1][end]
            ways[i][pos] = total
    return ways[0][0]


# ---------------------------------------------------------------------------
# helpers to build common functions


def indicator_cplc(dfa: Dfa) -> Cplc:
    return Cplc(dfa.alphabet, [(1, (dfa.canonical(),))])


def constant_cplc(alphabet: Alphabet, c: int) -> Cplc:
    return Cplc(alphabet, [(c, (lang.universal_language(alphabet),))])


def zero_cplc(alphabet: Alphabet) -> Cplc:
    return Cplc(alphabet, [])


# ---------------------------------------------------------------------------
# product monoid of the factor DFAs, refined by a letter tracker
#
# The tracker distinguishes the empty word, each single letter, and "length
# at least two"; refining by it keeps single letters in their own classes,
# which the pumping analysis relies on.


def _tracker_mul(u, v):
    if u == "1":
        return v
    if v == "1":
        return u
    return "T"


def product_monoid(f: Cplc, cap: int = 100000):
    """(monoid, morphism) for the product of the factor transition monoids
    and the letter tracker."""
    dfas = f.factor_dfas()
    alphabet = f.alphabet

    def compose(x, y):
        ts1, u1 = x
        ts2, u2 = y
        return (tuple(tuple(t2[q] for q in t1) for t1, t2 in zip(ts1, ts2)),
                _tracker_mul(u1, u2))

    unit = (tuple(tuple(range(d.n)) for d in dfas), "1")
    gens = {a: (tuple(d.transformation((a,)) for d in dfas), a) for a in alphabet}
    monoid, morphism, _ = lang.monoid_from_generators(alphabet, gens, unit,
                                                      compose, cap=cap)
    return monoid, morphism


# ---------------------------------------------------------------------------
# pumping patterns


@dataclass(frozen=True)
class PumpingPattern:
    """alpha_0 w_1^{X_1} alpha_1 ... w_k^{X_k} alpha_k.

    alphas has one more entry than pumps; all entries are letter tuples.
    """
    alphas: tuple
    pumps: tuple

    def __post_init__(self):
        if len(self.alphas) != len(self.pumps) + 1:
            raise ValueError("need one more connector than pump words")

    @property
    def size(self) -> int:
        return len(self.pumps)

    def realize(self, exponents) -> tuple:
        if len(exponents) != len(self.pumps):
            raise ValueError("exponent arity mismatch")
        out = list(self.alphas[0])
        for w, x, alpha in zip(self.pumps, exponents, self.alphas[1:]):
            out.extend(w * x)
            out.extend(alpha)
        return tuple(out)

    def __repr__(self):
        def s(w):
            return "".join(map(str, w)) or "_"
        bits = [s(self.alphas[0])]
        for w, alpha in zip(self.pumps, self.alphas[1:]):
            bits.append("(%s)^X" % s(w))
            bits.append(s(alpha))
        return " ".join(bits)


# ---------------------------------------------------------------------------
# expression surface syntax
#
#   file   :=  [ "alphabet" "=" letters ]  expr
#   expr   :=  term (("+"|"-") term)*
#   term   :=  factor ("." factor)*            -- "." is the Cauchy product
#   factor :=  INT "*" factor | INT | "ind" "(" regex ")"
#            | "star" "(" expr ")" | "(" expr ")"
#
# A bare integer denotes the constant function (INT * the indicator of all
# words).  star(...) is only available when compiling to a linear
# representation, since Cauchy iteration leaves the polynomial-growth class.


class ExprError(ValueError):
    pass


def parse_expression(text: str):
    """Parse an expression file; returns (alphabet, ast).

    ast nodes: ('ind', regex_text), ('int', n), ('scale', n, e),
    ('add', l, r), ('sub', l, r), ('cauchy', l, r), ('star', e).
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    alphabet = None
    if lines and lines[0].strip().startswith("alphabet"):
        decl = lines[0].split("=", 1)
        if len(decl) != 2:
            raise ExprError("malformed alphabet declaration")
        letters = decl[1].split()
        if len(letters) == 1 and len(letters[0]) > 1:
            letters = list(letters[0])
        alphabet = Alphabet(letters)
        body = "\n".join(lines[1:])
    else:
        body = "\n".join(lines)
    if alphabet is None:
        raise ExprError("missing 'alphabet =' declaration")
    ast = _parse_expr_body(body)
    return alphabet, ast


def _parse_expr_body(src: str):
    pos = 0
    n = len(src)

    def skip_ws():
        nonlocal pos
        while pos < n and src[pos].isspace():
            pos += 1

    def peek():
        skip_ws()
        return src[pos] if pos < n else None

    def expect(c):
        nonlocal pos
        if peek() != c:
            raise ExprError("expected %r at position %d" % (c, pos))
        pos += 1

    def parse_expr():
        nonlocal pos
        node = parse_term()
        while True:
            c = peek()
            if c == "+":
                pos += 1
                node = ("add", node, parse_term())
            elif c == "-":
                pos += 1
                node = ("sub", node, parse_term())
            else:
                return node

    def parse_term():
        nonlocal pos
        node = parse_factor()
        while peek() == ".":
            pos += 1
            node = ("cauchy", node, parse_factor())
        return node

    def parse_factor():
        nonlocal pos
        c = peek()
        if c is None:
            raise ExprError("unexpected end of expression")
        if c == "(":
            pos += 1
            node = parse_expr()
            expect(")")
            return node
        if c == "-" or c.isdigit():
            start = pos
            pos += 1
            while pos < n and src[pos].isdigit():
                pos += 1
            if src[start:pos] == "-":
                return ("scale", -1, parse_factor())
            value = int(src[start:pos])
            if peek() == "*":
                pos += 1
                return ("scale", value, parse_factor())
            return ("int", value)
        if src.startswith("ind", pos):
            pos += 3
            expect("(")
            depth = 1
            start = pos
            while pos < n and depth:
                if src[pos] == "(":
                    depth += 1
                elif src[pos] == ")":
                    depth -= 1
                pos += 1
            if depth:
                raise ExprError("unbalanced parentheses in ind(...)")
            return ("ind", src[start:pos - 1])
        if src.startswith("star", pos):
            pos += 4
            expect("(")
            node = parse_expr()
            expect(")")
            return ("star", node)
        raise ExprError("unexpected character %r at position %d" % (c, pos))

    node = parse_expr()
    skip_ws()
    if pos != n:
        raise ExprError("trailing input at position %d" % pos)
    return node


def expression_uses_star(ast) -> bool:
    tag = ast[0]
    if tag == "star":
        return True
    if tag in ("add", "sub", "cauchy"):
        return expression_uses_star(ast[1]) or expression_uses_star(ast[2])
    if tag == "scale":
        return expression_uses_star(ast[2])
    return False


def expression_to_cplc(alphabet: Alphabet, ast) -> Cplc:
    tag = ast[0]
    if tag == "ind":
        return indicator_cplc(lang.compile_regex(ast[1], alphabet))
    if tag == "int":
        return constant_cplc(alphabet, ast[1])
    if tag == "scale":
        return expression_to_cplc(alphabet, ast[2]).scale(ast[1])
    if tag == "add":
        return expression_to_cplc(alphabet, ast[1]).add(expression_to_cplc(alphabet, ast[2]))
    if tag == "sub":
        return expression_to_cplc(alphabet, ast[1]).sub(expression_to_cplc(alphabet, ast[2]))
    if tag == "cauchy":
        return expression_to_cplc(alphabet, ast[1]).cauchy(expression_to_cplc(alphabet, ast[2]))
    if tag == "star":
        raise ExprError("star(...) requires compilation to a linear representation")
    raise ExprError("unknown node %r" % (tag,))


def expression_to_linrep(alphabet: Alphabet, ast) -> series.LinRep:
    tag = ast[0]
    if tag == "ind":
        return series.indicator(lang.compile_regex(ast[1], alphabet))
    if tag == "int":
        return series.indicator(lang.universal_language(alphabet)).scale(ast[1])
    if tag == "scale":
        return expression_to_linrep(alphabet, ast[2]).scale(ast[1])
    if tag == "add":
        return expression_to_linrep(alphabet, ast[1]).add(expression_to_linrep(alphabet, ast[2]))
    if tag == "sub":
        return expression_to_linrep(alphabet, ast[1]).sub(expression_to_linrep(alphabet, ast[2]))
    if tag == "cauchy":
        return expression_to_linrep(alphabet, ast[1]).cauchy(expression_to_linrep(alphabet, ast[2]))
    if tag == "star":
        return expression_to_linrep(alphabet, ast[1]).star()
    raise ExprError("unknown node %r" % (tag,))
