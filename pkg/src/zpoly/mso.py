"""Counting interpretations of MSO formulas over finite words.

#phi(w) is the number of valuations of the free variables that satisfy phi.
First-order variables (lowercase names) range over positions, second-order
variables (capitalized names) over sets of positions.

Formulas compile to "marked automata": DFAs over the alphabet A x {0,1}^k
whose extra tracks carry the valuation, with first-order tracks marked at
exactly one position.  Counting accepting runs over all markings gives an
integer linear representation; for purely first-order formulas a split on
the variables achieving the minimal position turns the count into an
integer combination of Cauchy products of indicators.
"""

from __future__ import annotations

import itertools
from collections import deque

from . import lang
from .cplc import Cplc, indicator_cplc, zero_cplc
from .exact import QMat
from .lang import Alphabet, Dfa
from .series import LinRep


class MsoError(ValueError):
    pass


def is_so(name: str) -> bool:
    return name[:1].isupper()


# ---------------------------------------------------------------------------
# AST: tuples
#   ('true',) ('false',)
#   ('letter', a, x)  ('less', x, y)  ('eq', x, y)  ('in', x, X)
#   ('not', p)  ('and', p, q)  ('or', p, q)  ('exists', v, p)


def free_vars(phi) -> frozenset:
    tag = phi[0]
    if tag in ("true", "false"):
        return frozenset()
    if tag == "letter":
        return frozenset([phi[2]])
    if tag in ("less", "eq", "in"):
        return frozenset([phi[1], phi[2]])
    if tag == "not":
        return free_vars(phi[1])
    if tag in ("and", "or"):
        return free_vars(phi[1]) | free_vars(phi[2])
    if tag == "exists":
        return free_vars(phi[2]) - {phi[1]}
    raise MsoError("unknown node %r" % (tag,))


def rename_bound(phi, counter=None, env=None):
    """Alpha-rename bound variables apart (prefixing '%'), preserving kind."""
    if counter is None:
        counter = itertools.count()
    env = env or {}
    tag = phi[0]
    if tag in ("true", "false"):
        return phi
    if tag == "letter":
        return (tag, phi[1], env.get(phi[2], phi[2]))
    if tag in ("less", "eq", "in"):
        return (tag, env.get(phi[1], phi[1]), env.get(phi[2], phi[2]))
    if tag == "not":
        return (tag, rename_bound(phi[1], counter, env))
    if tag in ("and", "or"):
        return (tag, rename_bound(phi[1], counter, env),
                rename_bound(phi[2], counter, env))
    if tag == "exists":
        v = phi[1]
        fresh = ("%B" if is_so(v) else "%b") + str(next(counter))
        env2 = dict(env)
        env2[v] = fresh
        return (tag, fresh, rename_bound(phi[2], counter, env2))
    raise MsoError("unknown node %r" % (tag,))


# the '%b'/'%B' internal prefix keeps kind detection working
def _kind(name: str) -> str:
    if name.startswith("%"):
        return "so" if name[1] == "B" else "fo"
    return "so" if is_so(name) else "fo"


# ---------------------------------------------------------------------------
# reference evaluator (used by tests and oracles)


def holds(phi, word, valuation) -> bool:
    tag = phi[0]
    if tag == "true":
        return True
    if tag == "false":
        return False
    if tag == "letter":
        return word[valuation[phi[2]]] == phi[1]
    if tag == "less":
        return valuation[phi[1]] < valuation[phi[2]]
    if tag == "eq":
        return valuation[phi[1]] == valuation[phi[2]]
    if tag == "in":
        return valuation[phi[1]] in valuation[phi[2]]
    if tag == "not":
        return not holds(phi[1], word, valuation)
    if tag == "and":
        return holds(phi[1], word, valuation) and holds(phi[2], word, valuation)
    if tag == "or":
        return holds(phi[1], word, valuation) or holds(phi[2], word, valuation)
    if tag == "exists":
        v = phi[1]
        n = len(word)
        if _kind(v) == "fo":
            choices = range(n)
        else:
            choices = (frozenset(s) for k in range(n + 1)
                       for s in itertools.combinations(range(n), k))
        for c in choices:
            val2 = dict(valuation)
            val2[v] = c
            if holds(phi[2], word, val2):
                return True
        return False
    raise MsoError("unknown node %r" % (tag,))


def count_valuations(phi, variables, word) -> int:
    """Brute-force #phi(w) over the declared variable list."""
    word = tuple(word)
    n = len(word)
    total = 0
    spaces = []
    for v in variables:
        if _kind(v) == "fo":
            spaces.append(list(range(n)))
        else:
            spaces.append([frozenset(s) for k in range(n + 1)
                           for s in itertools.combinations(range(n), k)])
    for combo in itertools.product(*spaces):
        if holds(phi, word, dict(zip(variables, combo))):
            total += 1
    return total


# ---------------------------------------------------------------------------
# marked automata


def tracked_alphabet(base: Alphabet, k: int) -> Alphabet:
    return Alphabet([(a, bits) for a in base
                     for bits in itertools.product((0, 1), repeat=k)])


def _exactly_one(base: Alphabet, tracks, t_index) -> Dfa:
    """Words whose track `t_index` carries exactly one mark."""
    al = tracked_alphabet(base, len(tracks))
    delta = {}
    for (a, bits) in al:
        if bits[t_index]:
            delta[(a, bits)] = (1, 2, 2)
        else:
            delta[(a, bits)] = (0, 1, 2)
    return Dfa(al, 3, 0, (1,), delta).canonical()


def _well_marked(base: Alphabet, tracks) -> Dfa:
    out = lang.universal_language(tracked_alphabet(base, len(tracks)))
    for i, t in enumerate(tracks):
        if _kind(t) == "fo":
            out = lang.intersect(out, _exactly_one(base, tracks, i))
    return out


def _lift(dfa: Dfa, base: Alphabet, old_tracks, new_tracks) -> Dfa:
    """Cylindrify from old_tracks to new_tracks (a supersequence as a set),
    re-imposing the single-mark constraint on added first-order tracks."""
    pos = {t: i for i, t in enumerate(old_tracks)}
    al = tracked_alphabet(base, len(new_tracks))
    delta = {}
    for (a, bits) in al:
        old_bits = tuple(bits[new_tracks.index(t)] for t in old_tracks)
        delta[(a, bits)] = dfa.delta[(a, old_bits)]
    out = Dfa(al, dfa.n, dfa.initial, dfa.accepting, delta)
    for i, t in enumerate(new_tracks):
        if t not in pos and _kind(t) == "fo":
            out = lang.intersect(out, _exactly_one(base, new_tracks, i))
    return out.canonical()


def _atom_letter(base: Alphabet, a, tracks, xi) -> Dfa:
    al = tracked_alphabet(base, len(tracks))
    # 0: not yet marked, 1: marked on an `a`, 2: dead
    delta = {}
    for (b, bits) in al:
        if bits[xi]:
            delta[(b, bits)] = (1 if b == a else 2, 2, 2)
        else:
            delta[(b, bits)] = (0, 1, 2)
    return Dfa(al, 3, 0, (1,), delta).canonical()


def _atom_less(base: Alphabet, tracks, xi, yi) -> Dfa:
    al = tracked_alphabet(base, len(tracks))
    # 0: neither seen, 1: x seen, 2: x then y, 3: dead
    delta = {}
    for (b, bits) in al:
        bx, by = bits[xi], bits[yi]
        row = [0, 1, 2, 3]
        if bx and by:
            row[0] = 3
        elif bx:
            row[0] = 1
        elif by:
            row[0] = 3
        if bx:
            row[1] = 3
        elif by:
            row[1] = 2
        if bx or by:
            row[2] = 3
        delta[(b, bits)] = tuple(row)
    return Dfa(al, 4, 0, (2,), delta).canonical()


def _atom_eq(base: Alphabet, tracks, xi, yi) -> Dfa:
    al = tracked_alphabet(base, len(tracks))
    delta = {}
    for (b, bits) in al:
        bx, by = bits[xi], bits[yi]
        if bx and by:
            delta[(b, bits)] = (1, 2, 2)
        elif bx or by:
            delta[(b, bits)] = (2, 2, 2)
        else:
            delta[(b, bits)] = (0, 1, 2)
    return Dfa(al, 3, 0, (1,), delta).canonical()


def _atom_in(base: Alphabet, tracks, xi, Xi) -> Dfa:
    al = tracked_alphabet(base, len(tracks))
    # the x mark must fall on a position whose X bit is set
    delta = {}
    for (b, bits) in al:
        bx, bX = bits[xi], bits[Xi]
        if bx:
            delta[(b, bits)] = (1 if bX else 2, 2, 2)
        else:
            delta[(b, bits)] = (0, 1, 2)
    return Dfa(al, 3, 0, (1,), delta).canonical()


def _project_track(dfa: Dfa, base: Alphabet, tracks, t_index) -> Dfa:
    """Existentially quantify a track: erase it, determinize the result."""
    new_tracks = tracks[:t_index] + tracks[t_index + 1:]
    al = tracked_alphabet(base, len(new_tracks))

    def move(states, letter):
        a, bits = letter
        out = set()
        for bit in (0, 1):
            full = bits[:t_index] + (bit,) + bits[t_index:]
            for q in states:
                out.add(dfa.delta[(a, full)][q])
        return out

    def final(states):
        return any(q in dfa.accepting for q in states)

    return lang._determinize(al, {dfa.initial}, final, move)


def _compile(phi, base: Alphabet, state_cap: int):
    """Returns (dfa, tracks); tracks is the sorted tuple of free variables.
    Invariant: the language is contained in the well-marked words of its
    first-order tracks."""
    tag = phi[0]
    if tag in ("true", "false"):
        al = tracked_alphabet(base, 0)
        d = lang.universal_language(al) if tag == "true" else lang.empty_language(al)
        return d, ()
    if tag == "letter":
        tracks = (phi[2],)
        return _atom_letter(base, phi[1], tracks, 0), tracks
    if tag in ("less", "eq", "in"):
        x, y = phi[1], phi[2]
        if x == y:
            if tag == "eq":
                tracks = (x,)
                return _exactly_one(base, tracks, 0), tracks
            if tag == "less":
                tracks = (x,)
                return lang.empty_language(tracked_alphabet(base, 1)), tracks
            raise MsoError("variable cannot be a member of itself")
        tracks = tuple(sorted((x, y)))
        xi, yi = tracks.index(x), tracks.index(y)
        if tag == "less":
            return _atom_less(base, tracks, xi, yi), tracks
        if tag == "eq":
            return _atom_eq(base, tracks, xi, yi), tracks
        return _atom_in(base, tracks, xi, yi), tracks
    if tag == "not":
        sub, tracks = _compile(phi[1], base, state_cap)
        comp = lang.complement(sub)
        out = lang.intersect(comp, _well_marked(base, tracks))
        return out, tracks
    if tag in ("and", "or"):
        d1, t1 = _compile(phi[1], base, state_cap)
        d2, t2 = _compile(phi[2], base, state_cap)
        tracks = tuple(sorted(set(t1) | set(t2)))
        d1 = _lift(d1, base, t1, tracks)
        d2 = _lift(d2, base, t2, tracks)
        out = lang.intersect(d1, d2) if tag == "and" else lang.union(d1, d2)
        if out.n > state_cap:
            raise MsoError("state cap exceeded while compiling")
        return out, tracks
    if tag == "exists":
        v = phi[1]
        sub, tracks = _compile(phi[2], base, state_cap)
        if v not in tracks:
            # quantifying a variable that does not occur: a first-order
            # witness needs a position, so conjoin a fresh single-mark track
            if _kind(v) == "so":
                return sub, tracks
            tracks2 = tuple(sorted(set(tracks) | {v}))
            sub = _lift(sub, base, tracks, tracks2)
            tracks = tracks2
        out = _project_track(sub, base, tracks, tracks.index(v))
        if out.n > state_cap:
            raise MsoError("state cap exceeded while compiling")
        return out, tracks[:tracks.index(v)] + tracks[tracks.index(v) + 1:]
    raise MsoError("unknown node %r" % (tag,))


def compile_marked_automaton(phi, variables, base: Alphabet,
                             state_cap: int = 100000) -> Dfa:
    """The canonical DFA over A x {0,1}^k recognizing satisfying markings,
    with tracks in the declared variable order."""
    phi = rename_bound(phi)
    fv = free_vars(phi)
    if not fv <= set(variables):
        raise MsoError("free variables %r not declared" % (sorted(fv - set(variables)),))
    dfa, tracks = _compile(phi, base, state_cap)
    return _lift(dfa, base, tracks, tuple(variables))


# ---------------------------------------------------------------------------
# from marked automata to representations and Cauchy combinations


def runs_linrep(marked: Dfa, base: Alphabet, k: int) -> LinRep:
    """Count accepted markings: mu(a)[p][q] = number of bit vectors b with
    delta(p, (a,b)) = q."""
    n = marked.n
    mats = {}
    for a in base:
        rows = [[0] * n for _ in range(n)]
        for bits in itertools.product((0, 1), repeat=k):
            row = marked.delta[(a, bits)]
            for p in range(n):
                rows[p][row[p]] += 1
        mats[a] = QMat(rows)
    I = tuple(int(q == marked.initial) for q in range(n))
    F = tuple(int(q in marked.accepting) for q in range(n))
    return LinRep(base, I, mats, F)


def count_to_linrep(phi, variables, base: Alphabet) -> LinRep:
    marked = compile_marked_automaton(phi, variables, base)
    return runs_linrep(marked, base, len(variables))


def count_sets_to_linrep(phi, variables, base: Alphabet) -> LinRep:
    """Same as count_to_linrep; second-order variables are simply
    unconstrained tracks, so exponential growth is possible."""
    for v in variables:
        if _kind(v) == "fo":
            raise MsoError("count_sets expects second-order variables only")
    return count_to_linrep(phi, variables, base)


def _min_split_language(marked: Dfa, base: Alphabet, k: int, pset, q: int) -> Dfa:
    """Words u (nonempty) such that running the marked automaton on u with
    the tracks in `pset` marked at the last position (and nothing else)
    reaches state q."""
    chi = tuple(1 if i in pset else 0 for i in range(k))
    zero = (0,) * k

    def stepz(p, a):
        return marked.delta[(a, zero)][p]

    def stepm(p, a):
        return marked.delta[(a, chi)][p]

    start = "start"
    idx = {start: 0}
    states = [start]
    queue = deque([start])
    delta = {a: [] for a in base}
    while queue:
        s = queue.popleft()
        for a in base:
            if s == "start":
                nxt = (stepz(marked.initial, a), stepm(marked.initial, a))
            else:
                p, _r = s
                nxt = (stepz(p, a), stepm(p, a))
            if nxt not in idx:
                idx[nxt] = len(idx)
                states.append(nxt)
                queue.append(nxt)
            delta[a].append(idx[nxt])
    accepting = [idx[s] for s in states if s != "start" and s[1] == q]
    dd = {a: tuple(delta[a]) for a in base}
    return Dfa(base, len(states), 0, accepting, dd).canonical()


def _restrict_tracks(marked: Dfa, base: Alphabet, k: int, pset, q: int) -> Dfa:
    """The suffix automaton: start from q, keep the tracks outside pset
    (those in pset are forced to zero)."""
    keep = [i for i in range(k) if i not in pset]
    al = tracked_alphabet(base, len(keep))
    delta = {}
    for (a, bits) in al:
        full = [0] * k
        for i, b in zip(keep, bits):
            full[i] = b
        delta[(a, bits)] = marked.delta[(a, tuple(full))]
    return Dfa(al, marked.n, q, marked.accepting, delta).canonical()


def _cplc_from_marked(marked: Dfa, base: Alphabet, k: int) -> Cplc:
    if k == 0:
        plain_delta = {a: marked.delta[(a, ())] for a in base}
        plain = Dfa(base, marked.n, marked.initial, marked.accepting,
                    plain_delta).canonical()
        return indicator_cplc(plain)
    result = zero_cplc(base)
    for size in range(1, k + 1):
        for pset in itertools.combinations(range(k), size):
            pset = frozenset(pset)
            for q in range(marked.n):
                prefix = _min_split_language(marked, base, k, pset, q)
                if prefix.is_empty_language():
                    continue
                suffix = _restrict_tracks(marked, base, k, pset, q)
                inner = _cplc_from_marked(suffix, base, k - size)
                if inner.is_zero_syntactic():
                    continue
                result = result.add(indicator_cplc(prefix).cauchy(inner))
    return result


def count_to_cplc(phi, variables, base: Alphabet) -> Cplc:
    """#phi as an integer combination of Cauchy products of indicators.

    The recursion splits every valuation on the set of variables taking the
    minimal position and on the automaton state reached there; all declared
    variables must be first-order.
    """
    for v in variables:
        if _kind(v) == "so":
            raise MsoError("count_to_cplc requires first-order variables; "
                           "use count_to_linrep for %r" % (v,))
    marked = compile_marked_automaton(phi, variables, base)
    return _cplc_from_marked(marked, base, len(variables))


# ---------------------------------------------------------------------------
# surface syntax:  count[x,y] a(x) & b(y) & x < y
#
# precedence:  ->  |  &  !,  quantifiers reach as far right as possible.
# sugar: <=, >=, >, !=, succ(x,y), first(x), last(x), forall v. phi.


_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CHARS = _IDENT_START | frozenset("0123456789")


class _FormulaParser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def error(self, msg):
        raise MsoError("%s at position %d" % (msg, self.pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def try_word(self, word):
        self.skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos:end] == word and \
                (end >= len(self.text) or self.text[end] not in _IDENT_CHARS):
            self.pos = end
            return True
        return False

    def try_sym(self, sym):
        self.skip_ws()
        if self.text.startswith(sym, self.pos):
            self.pos += len(sym)
            return True
        return False

    def expect_sym(self, sym):
        if not self.try_sym(sym):
            self.error("expected %r" % sym)

    def ident(self):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] not in _IDENT_START:
            self.error("expected identifier")
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in _IDENT_CHARS:
            self.pos += 1
        return self.text[start:self.pos]

    # formula grammar --------------------------------------------------------

    def formula(self):
        left = self.disjunction()
        if self.try_sym("->"):
            right = self.formula()
            return ("or", ("not", left), right)
        return left

    def disjunction(self):
        node = self.conjunction()
        while True:
            self.skip_ws()
            if self.text.startswith("->", self.pos):
                return node
            if self.try_sym("|"):
                node = ("or", node, self.conjunction())
            else:
                return node

    def conjunction(self):
        node = self.unary()
        while self.try_sym("&"):
            node = ("and", node, self.unary())
        return node

    def unary(self):
        if self.try_sym("!"):
            return ("not", self.unary())
        if self.try_word("exists"):
            v = self.ident()
            self.expect_sym(".")
            return ("exists", v, self.formula())
        if self.try_word("forall"):
            v = self.ident()
            self.expect_sym(".")
            return ("not", ("exists", v, ("not", self.formula())))
        if self.peek() == "(":
            self.expect_sym("(")
            node = self.formula()
            self.expect_sym(")")
            return node
        return self.atom()

    def atom(self):
        if self.try_word("true"):
            return ("true",)
        if self.try_word("false"):
            return ("false",)
        if self.try_word("succ"):
            self.expect_sym("(")
            x = self.ident()
            self.expect_sym(",")
            y = self.ident()
            self.expect_sym(")")
            return _succ(x, y)
        if self.try_word("first"):
            self.expect_sym("(")
            x = self.ident()
            self.expect_sym(")")
            return ("not", ("exists", "_z", ("less", "_z", x)))
        if self.try_word("last"):
            self.expect_sym("(")
            x = self.ident()
            self.expect_sym(")")
            return ("not", ("exists", "_z", ("less", x, "_z")))
        name = self.ident()
        self.skip_ws()
        if self.peek() == "(" and name in self.alphabet:
            self.expect_sym("(")
            x = self.ident()
            self.expect_sym(")")
            return ("letter", name, x)
        # relational atom
        for sym, build in (
            ("<=", lambda a, b: ("or", ("less", a, b), ("eq", a, b))),
            (">=", lambda a, b: ("or", ("less", b, a), ("eq", a, b))),
            ("!=", lambda a, b: ("not", ("eq", a, b))),
            ("<", lambda a, b: ("less", a, b)),
            (">", lambda a, b: ("less", b, a)),
            ("=", lambda a, b: ("eq", a, b)),
        ):
            if self.try_sym(sym):
                other = self.ident()
                return build(name, other)
        if self.try_word("in"):
            other = self.ident()
            if not is_so(other):
                self.error("membership needs a second-order variable")
            return ("in", name, other)
        self.error("cannot parse atom starting with %r" % name)


def _succ(x, y):
    return ("and", ("less", x, y),
            ("not", ("exists", "_z", ("and", ("less", x, "_z"),
                                      ("less", "_z", y)))))


def parse_count(text: str):
    """Parse a counting file: optional alphabet declaration, then
    `count[v1,...,vk] formula`.  Returns (alphabet, variables, formula)."""
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    alphabet = None
    if lines and lines[0].strip().startswith("alphabet"):
        decl = lines[0].split("=", 1)
        if len(decl) != 2:
            raise MsoError("malformed alphabet declaration")
        letters = decl[1].split()
        if len(letters) == 1 and len(letters[0]) > 1:
            letters = list(letters[0])
        alphabet = Alphabet(letters)
        body = "\n".join(lines[1:])
    else:
        body = "\n".join(lines)
    if alphabet is None:
        raise MsoError("missing 'alphabet =' declaration")
    p = _FormulaParser(body, alphabet)
    if not p.try_word("count"):
        raise MsoError("expected 'count[...]'")
    p.expect_sym("[")
    variables = []
    if p.peek() != "]":
        variables.append(p.ident())
        while p.try_sym(","):
            variables.append(p.ident())
    p.expect_sym("]")
    phi = p.formula()
    p.skip_ws()
    if p.pos != len(p.text):
        p.error("trailing input")
    if len(set(variables)) != len(variables):
        raise MsoError("duplicate count variables")
    return alphabet, tuple(variables), phi
