"""Rational series presented by linear representations (I, mu, F).

A representation over an alphabet A assigns a square rational matrix to
every letter; the series value on a word w = a1..an is I mu(a1)..mu(an) F.
Minimization is the classical two-sided reduction: after a forward pass on
reachable row vectors and a backward pass on co-reachable column vectors the
dimension equals the rank of the Hankel matrix, so two series are equal iff
their difference minimizes to dimension zero.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .exact import QMat, RowBasis, char_poly, classify_roots
from .lang import Alphabet


class LinRep:
    __slots__ = ("alphabet", "dim", "I", "mats", "F")

    def __init__(self, alphabet: Alphabet, I, mats, F):
        self.alphabet = alphabet
        self.I = tuple(Fraction(x) for x in I)
        self.dim = len(self.I)
        self.mats = {a: (m if isinstance(m, QMat) else QMat(m)) for a, m in mats.items()}
        self.F = tuple(Fraction(x) for x in F)
        if len(self.F) != self.dim:
            raise ValueError("I/F dimension mismatch")
        for a in alphabet:
            m = self.mats[a]
            if m.nrows != self.dim or m.ncols != self.dim:
                raise ValueError("matrix dimension mismatch for letter %r" % (a,))

    # -- evaluation -----------------------------------------------------------

    def eval(self, word) -> Fraction:
        v = self.I
        for a in word:
            v = self.mats[a].vecmat(v)
        return sum(x * y for x, y in zip(v, self.F))

    def word_matrix(self, word) -> QMat:
        m = QMat.identity(self.dim)
        for a in word:
            m = m * self.mats[a]
        return m

    # -- combinators ------------------------------------------------------------

    def _check_same_alphabet(self, other):
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch")

    def add(self, other: "LinRep") -> "LinRep":
        self._check_same_alphabet(other)
        n, m = self.dim, other.dim
        I = self.I + other.I
        F = self.F + other.F
        mats = {}
        for a in self.alphabet:
            x, y = self.mats[a], other.mats[a]
            rows = [list(r) + [Fraction(0)] * m for r in x.rows]
            rows += [[Fraction(0)] * n + list(r) for r in y.rows]
            mats[a] = QMat(rows)
        return LinRep(self.alphabet, I, mats, F)

    def scale(self, c) -> "LinRep":
        c = Fraction(c)
        return LinRep(self.alphabet, tuple(c * x for x in self.I), self.mats, self.F)

    def sub(self, other: "LinRep") -> "LinRep":
        return self.add(other.scale(-1))

    def cauchy(self, other: "LinRep") -> "LinRep":
        """(f (x) g)(w) = sum over splits w = uv of f(u) g(v)."""
        self._check_same_alphabet(other)
        n, m = self.dim, other.dim
        f_eps = sum(x * y for x, y in zip(self.I, self.F))
        I = self.I + tuple(f_eps * x for x in other.I)
        F = (Fraction(0),) * n + other.F
        mats = {}
        for a in self.alphabet:
            x, y = self.mats[a], other.mats[a]
            # top-right block: finish the f-factor with this letter, then
            # inject into g's initial vector
            xf = x.matvec(self.F)
            rows = []
            for i in range(n):
                rows.append(list(x.rows[i]) + [xf[i] * other.I[j] for j in range(m)])
            for i in range(m):
                rows.append([Fraction(0)] * n + list(y.rows[i]))
            mats[a] = QMat(rows)
        return LinRep(self.alphabet, I, mats, F)

    def hadamard(self, other: "LinRep") -> "LinRep":
        """(f . g)(w) = f(w) g(w), by the Kronecker construction."""
        self._check_same_alphabet(other)
        n, m = self.dim, other.dim
        I = tuple(self.I[i] * other.I[j] for i in range(n) for j in range(m))
        F = tuple(self.F[i] * other.F[j] for i in range(n) for j in range(m))
        mats = {}
        for a in self.alphabet:
            x, y = self.mats[a], other.mats[a]
            rows = []
            for i in range(n):
                for j in range(m):
                    rows.append([x.rows[i][k] * y.rows[j][l]
                                 for k in range(n) for l in range(m)])
            mats[a] = QMat(rows)
        return LinRep(self.alphabet, I, mats, F)

    def star(self) -> "LinRep":
        """f* = sum over factorizations into nonempty blocks of the product
        of block values.  Defined only for proper series (f(eps) = 0)."""
        if self.eval(()) != 0:
            raise ValueError("star requires a proper series (value 0 on the empty word)")
        n = self.dim
        # state 0 is "between blocks"; states 1..n track the open block
        I = (Fraction(1),) + (Fraction(0),) * n
        F = (Fraction(1),) + (Fraction(0),) * n
        mats = {}
        for a in self.alphabet:
            x = self.mats[a]
            close = x.matvec(self.F)          # finish the open block with a
            openv = self.I                     # start a block
            one_letter = sum(self.I[i] * close[i] for i in range(n))
            rows = [[one_letter] + [sum(self.I[i] * x.rows[i][j] for i in range(n))
                                    for j in range(n)]]
            for i in range(n):
                rows.append([close[i]] + list(x.rows[i]))
            mats[a] = QMat(rows)
        return LinRep(self.alphabet, I, mats, F)

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        def enc(x: Fraction):
            return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
        return {
            "alphabet": list(self.alphabet.letters),
            "dim": self.dim,
            "initial": [enc(x) for x in self.I],
            "final": [enc(x) for x in self.F],
            "matrices": {a: [[enc(x) for x in row] for row in self.mats[a].rows]
                         for a in self.alphabet},
        }

    @staticmethod
    def from_json(data: dict) -> "LinRep":
        def dec(s):
            if isinstance(s, str) and "/" in s:
                p, q = s.split("/")
                return Fraction(int(p), int(q))
            return Fraction(int(s))
        alphabet = Alphabet(data["alphabet"])
        mats = {a: QMat([[dec(x) for x in row] for row in rows])
                for a, rows in data["matrices"].items()}
        return LinRep(alphabet, [dec(x) for x in data["initial"]], mats,
                      [dec(x) for x in data["final"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def __repr__(self):
        return "LinRep(dim=%d, alphabet=%r)" % (self.dim, self.alphabet.letters)


def indicator(dfa) -> LinRep:
    """The 0/1 series of a regular language."""
    n = dfa.n
    I = tuple(Fraction(int(q == dfa.initial)) for q in range(n))
    F = tuple(Fraction(int(q in dfa.accepting)) for q in range(n))
    mats = {}
    for a in dfa.alphabet:
        rows = [[Fraction(int(dfa.delta[a][p] == q)) for q in range(n)]
                for p in range(n)]
        mats[a] = QMat(rows)
    return LinRep(dfa.alphabet, I, mats, F)


@dataclass
class SpanBasis:
    """Words whose row (or column) vectors realize a basis of the
    reachability (co-reachability) space of a representation."""
    words: list
    vectors: list


def _forward_reduce(rep: LinRep):
    """Restrict to the row space spanned by { I mu(u) }.  Returns the
    reduced representation and the word-indexed basis."""
    basis = RowBasis(rep.dim)
    words = []
    queue = deque()
    if basis.insert(rep.I):
        words.append(())
        queue.append(((), rep.I))
    while queue:
        w, v = queue.popleft()
        for a in rep.alphabet:
            v2 = rep.mats[a].vecmat(v)
            if basis.insert(v2):
                words.append(w + (a,))
                queue.append((w + (a,), v2))
    m = len(basis)
    if m == 0:
        zero = LinRep(rep.alphabet, (), {a: QMat([]) for a in rep.alphabet}, ())
        return zero, SpanBasis([], [])
    mats = {}
    for a in rep.alphabet:
        rows = []
        for bv in basis.vectors:
            v2 = rep.mats[a].vecmat(bv)
            rows.append(basis.coords(v2))
        mats[a] = QMat(rows)
    I = basis.coords(rep.I)
    F = tuple(sum(bv[j] * rep.F[j] for j in range(rep.dim)) for bv in basis.vectors)
    return LinRep(rep.alphabet, I, mats, F), SpanBasis(words, list(basis.vectors))


def _transpose_rep(rep: LinRep) -> LinRep:
    """Reverse the series: swap I and F, transpose matrices.  The row space
    of the transpose is the column space of the original."""
    return LinRep(rep.alphabet, rep.F,
                  {a: rep.mats[a].transpose() for a in rep.alphabet}, rep.I)


def reduce_minimize(rep: LinRep):
    """Two-sided reduction to the minimal dimension (= Hankel rank).

    Returns (minimal representation, row basis, column basis); the bases are
    indexed by words: row-basis words u with vectors I mu(u) of the input,
    column-basis words v with vectors mu(v) F of the forward-reduced
    representation (read right to left).
    """
    fwd, row_basis = _forward_reduce(rep)
    if fwd.dim == 0:
        return fwd, row_basis, SpanBasis([], [])
    bwd_t, col_basis_t = _forward_reduce(_transpose_rep(fwd))
    minimal = _transpose_rep(bwd_t)
    # words found on the transposed series are reversed suffix words
    col_words = [tuple(reversed(w)) for w in col_basis_t.words]
    return minimal, row_basis, SpanBasis(col_words, list(col_basis_t.vectors))


def minimize(rep: LinRep) -> LinRep:
    return reduce_minimize(rep)[0]


def equivalent(f: LinRep, g: LinRep) -> bool:
    return minimize(f.sub(g)).dim == 0


def distinguishing_word(f: LinRep, g: LinRep):
    """A word where f and g differ, or None when equivalent.

    If the series differ they differ on some word of length less than
    dim(f) + dim(g), so the breadth-first search is complete.
    """
    diff = minimize(f.sub(g))
    if diff.dim == 0:
        return None
    # a nonzero series of Hankel rank n is nonzero on u v with |u|, |v| < n
    limit = 2 * diff.dim - 1
    seen = set()
    queue = deque([((), diff.I)])
    while queue:
        w, v = queue.popleft()
        if sum(x * y for x, y in zip(v, diff.F)) != 0:
            return w
        if len(w) >= limit or v in seen:
            continue
        seen.add(v)
        for a in diff.alphabet:
            queue.append((w + (a,), diff.mats[a].vecmat(v)))
    raise AssertionError("nonzero minimal series with no short witness")


@dataclass
class SpectrumReport:
    ok: bool
    mode: str
    checked: int
    violations: list  # (word, characteristic polynomial) pairs


def spectrum_probe(rep: LinRep, mode: str, length_bound: int = 4,
                   sample_count: int = 200, seed: int = 0) -> SpectrumReport:
    """Probe eigenvalues of word matrices.

    mode "zero_one": spectra must lie in {0, 1} (star-free side);
    mode "zero_union_unity": spectra must lie in roots of unity and 0
    (polynomial-growth side).  Exhaustive over all words up to the length
    bound when that is feasible, otherwise a seeded random sample.
    """
    letters = list(rep.alphabet.letters)
    total = sum(len(letters) ** k for k in range(length_bound + 1))
    words = []
    if total <= sample_count:
        def gen(prefix, k):
            words.append(tuple(prefix))
            if k == 0:
                return
            for a in letters:
                gen(prefix + [a], k - 1)
        gen([], length_bound)
    else:
        rng = random.Random(seed)
        for _ in range(sample_count):
            k = rng.randint(1, length_bound)
            words.append(tuple(rng.choice(letters) for _ in range(k)))
    violations = []
    for w in sorted(set(words)):
        p = char_poly(rep.word_matrix(w))
        if not classify_roots(p, mode):
            violations.append((w, repr(p)))
    return SpectrumReport(not violations, mode, len(set(words)), violations)
