"""Regular languages over finite alphabets: regexes, canonical DFAs,
transition monoids.

DFAs are always complete and, once built through `canonical`, minimal with
states renumbered by breadth-first search from the initial state.  Two
canonical DFAs are structurally equal iff they accept the same language,
which lets the rest of the package use them as dictionary keys.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from math import lcm


class Alphabet:
    """An ordered finite alphabet.  Letters are arbitrary hashable symbols
    (strings for surface syntax, tuples for marked-track alphabets)."""

    __slots__ = ("letters", "_index")

    def __init__(self, letters):
        self.letters = tuple(letters)
        self._index = {a: i for i, a in enumerate(self.letters)}
        if len(self._index) != len(self.letters):
            raise ValueError("duplicate letters")

    def index(self, a):
        return self._index[a]

    def __contains__(self, a):
        return a in self._index

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return "Alphabet(%r)" % (self.letters,)


class Dfa:
    """Complete deterministic automaton.

    delta maps each letter to a tuple of successor states (indexed by
    state).  Use `Dfa.canonical` to obtain the minimal BFS-numbered form.
    """

    __slots__ = ("alphabet", "n", "initial", "accepting", "delta", "_key")

    def __init__(self, alphabet: Alphabet, n: int, initial: int,
                 accepting, delta):
        self.alphabet = alphabet
        self.n = n
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.delta = {a: tuple(delta[a]) for a in alphabet}
        for a in alphabet:
            if len(self.delta[a]) != n:
                raise ValueError("incomplete transition table")
        self._key = None

    # -- structural identity -------------------------------------------------

    def key(self):
        if self._key is None:
            self._key = (self.alphabet.letters, self.n, self.initial,
                         tuple(sorted(self.accepting)),
                         tuple(self.delta[a] for a in self.alphabet))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Dfa) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # -- language operations --------------------------------------------------

    def step(self, state: int, a) -> int:
        return self.delta[a][state]

    def run(self, word, start=None) -> int:
        q = self.initial if start is None else start
        for a in word:
            q = self.delta[a][q]
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.accepting

    def accepts_epsilon(self) -> bool:
        return self.initial in self.accepting

    def is_empty_language(self) -> bool:
        return not self.accepting

    def transformation(self, word):
        """The state map induced by a word, as a tuple."""
        maps = tuple(range(self.n))
        for a in word:
            row = self.delta[a]
            maps = tuple(row[q] for q in maps)
        return maps

    # -- canonicalization ------------------------------------------------------

    def canonical(self) -> "Dfa":
        return _canonicalize(self)

    def some_accepted_word(self):
        """A shortlex-least accepted word, or None for the empty language."""
        if self.initial in self.accepting:
            return ()
        seen = {self.initial}
        queue = deque([(self.initial, ())])
        while queue:
            q, w = queue.popleft()
            for a in self.alphabet:
                q2 = self.delta[a][q]
                if q2 in seen:
                    continue
                w2 = w + (a,)
                if q2 in self.accepting:
                    return w2
                seen.add(q2)
                queue.append((q2, w2))
        return None

    def __repr__(self):
        return "Dfa(n=%d, accepting=%s)" % (self.n, sorted(self.accepting))


def _reachable(dfa: Dfa):
    seen = [False] * dfa.n
    seen[dfa.initial] = True
    stack = [dfa.initial]
    while stack:
        q = stack.pop()
        for a in dfa.alphabet:
            q2 = dfa.delta[a][q]
            if not seen[q2]:
                seen[q2] = True
                stack.append(q2)
    return [q for q in range(dfa.n) if seen[q]]


def _canonicalize(dfa: Dfa) -> Dfa:
    """Moore minimization followed by BFS renumbering."""
    reach = _reachable(dfa)
    # Moore partition refinement on reachable states
    cls = {q: (1 if q in dfa.accepting else 0) for q in reach}
    nclasses = len(set(cls.values()))
    while True:
        sig = {}
        for q in reach:
            sig[q] = (cls[q],) + tuple(cls[dfa.delta[a][q]] for a in dfa.alphabet)
        renum = {}
        for q in reach:
            renum.setdefault(sig[q], len(renum))
        new_cls = {q: renum[sig[q]] for q in reach}
        if len(renum) == nclasses:
            cls = new_cls
            break
        nclasses = len(renum)
        cls = new_cls
    # representative per class
    rep_delta = {}
    rep_accept = set()
    for q in reach:
        c = cls[q]
        if c not in rep_delta:
            rep_delta[c] = {a: cls[dfa.delta[a][q]] for a in dfa.alphabet}
            if q in dfa.accepting:
                rep_accept.add(c)
    # BFS renumber from the initial class
    order = {}
    queue = deque([cls[dfa.initial]])
    order[cls[dfa.initial]] = 0
    while queue:
        c = queue.popleft()
        for a in dfa.alphabet:
            c2 = rep_delta[c][a]
            if c2 not in order:
                order[c2] = len(order)
                queue.append(c2)
    n = len(order)
    delta = {a: [0] * n for a in dfa.alphabet}
    for c, i in order.items():
        for a in dfa.alphabet:
            delta[a][i] = order[rep_delta[c][a]]
    accepting = frozenset(order[c] for c in rep_accept if c in order)
    return Dfa(dfa.alphabet, n, 0, accepting, delta)


# ---------------------------------------------------------------------------
# basic language constructors (all canonical)


def empty_language(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, (), {a: (0,) for a in alphabet}).canonical()


def epsilon_language(alphabet: Alphabet) -> Dfa:
    delta = {a: (1, 1) for a in alphabet}
    return Dfa(alphabet, 2, 0, (0,), delta).canonical()


def universal_language(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, (0,), {a: (0,) for a in alphabet}).canonical()


def letter_language(alphabet: Alphabet, letter) -> Dfa:
    # states: 0 start, 1 accept, 2 sink
    delta = {a: (1 if a == letter else 2, 2, 2) for a in alphabet}
    return Dfa(alphabet, 3, 0, (1,), delta).canonical()


def complement(dfa: Dfa) -> Dfa:
    acc = frozenset(range(dfa.n)) - dfa.accepting
    return Dfa(dfa.alphabet, dfa.n, dfa.initial, acc, dfa.delta).canonical()


def product(op, x: Dfa, y: Dfa) -> Dfa:
    """Boolean product; op('and'|'or') combines acceptance."""
    if x.alphabet != y.alphabet:
        raise ValueError("alphabet mismatch")
    idx = {}
    queue = deque()
    start = (x.initial, y.initial)
    idx[start] = 0
    queue.append(start)
    delta = {a: [] for a in x.alphabet}
    accepting = set()
    states = [start]
    while queue:
        p, q = queue.popleft()
        i = idx[(p, q)]
        if (op == "and" and p in x.accepting and q in y.accepting) or \
           (op == "or" and (p in x.accepting or q in y.accepting)):
            accepting.add(i)
        for a in x.alphabet:
            nxt = (x.delta[a][p], y.delta[a][q])
            if nxt not in idx:
                idx[nxt] = len(idx)
                states.append(nxt)
                queue.append(nxt)
            delta[a].append(idx[nxt])
    # delta rows were appended in BFS order of source states
    dd = {a: tuple(delta[a]) for a in x.alphabet}
    return Dfa(x.alphabet, len(states), 0, accepting, dd).canonical()


def intersect(x: Dfa, y: Dfa) -> Dfa:
    return product("and", x, y)


def union(x: Dfa, y: Dfa) -> Dfa:
    return product("or", x, y)


# NFA-based constructions (concatenation, star) ------------------------------


def _determinize(alphabet: Alphabet, initial_set, final_test, move):
    """Subset construction.  `move(S, a)` yields the successor set,
    `final_test(S)` the acceptance of a subset."""
    start = frozenset(initial_set)
    idx = {start: 0}
    queue = deque([start])
    order = [start]
    delta = {a: [] for a in alphabet}
    accepting = set()
    while queue:
        s = queue.popleft()
        i = idx[s]
        if final_test(s):
            accepting.add(i)
        for a in alphabet:
            t = frozenset(move(s, a))
            if t not in idx:
                idx[t] = len(idx)
                order.append(t)
                queue.append(t)
            delta[a].append(idx[t])
    dd = {a: tuple(delta[a]) for a in alphabet}
    return Dfa(alphabet, len(order), 0, accepting, dd).canonical()


def concat(x: Dfa, y: Dfa) -> Dfa:
    if x.alphabet != y.alphabet:
        raise ValueError("alphabet mismatch")
    al = x.alphabet
    # NFA states: ('x', q) and ('y', q); epsilon jump when q accepting in x
    def close(states):
        out = set(states)
        for tag, q in list(states):
            if tag == "x" and q in x.accepting:
                out.add(("y", y.initial))
        return out

    def move(s, a):
        out = set()
        for tag, q in s:
            if tag == "x":
                out.add(("x", x.delta[a][q]))
            else:
                out.add(("y", y.delta[a][q]))
        return close(out)

    def final(s):
        return any(tag == "y" and q in y.accepting for tag, q in s)

    return _determinize(al, close({("x", x.initial)}), final, move)


def star(x: Dfa) -> Dfa:
    al = x.alphabet
    # NFA for x*: fresh accepting start with epsilon to x's initial;
    # from accepting states epsilon back to x's initial.
    def close(states):
        out = set(states)
        if any(q in x.accepting for q in states if q != "start") or "start" in states:
            out.add(x.initial)
        return out

    def move(s, a):
        out = set()
        for q in s:
            if q == "start":
                continue
            out.add(x.delta[a][q])
        return close(out)

    def final(s):
        return "start" in s or any(q in x.accepting for q in s if q != "start")

    return _determinize(al, close({"start"}), final, move)


def residual_language(dfa: Dfa, word) -> Dfa:
    """The canonical DFA of u^{-1} L."""
    q = dfa.run(word)
    return Dfa(dfa.alphabet, dfa.n, q, dfa.accepting, dfa.delta).canonical()


def strip_epsilon(dfa: Dfa) -> Dfa:
    """The canonical DFA of L minus the empty word."""
    if not dfa.accepts_epsilon():
        return dfa.canonical()
    # add a non-accepting copy of the initial state
    n = dfa.n + 1
    delta = {a: tuple(dfa.delta[a]) + (dfa.delta[a][dfa.initial],)
             for a in dfa.alphabet}
    return Dfa(dfa.alphabet, n, dfa.n, dfa.accepting, delta).canonical()


# ---------------------------------------------------------------------------
# regex surface syntax
#
# grammar:   union:   e  ::= e1 ('|' e1)*
#            inter:   e1 ::= e2 ('&' e2)*
#            concat:  e2 ::= e3+
#            unary:   e3 ::= atom '*'*  |  '!' e3
#            atom:    letter | '(' e ')' | '()' (empty word) | '∅'
# '!' binds tighter than '*' applied afterwards: "!a*" is (!a)*.


class RegexError(ValueError):
    pass


EMPTY = ("empty",)
EPS = ("eps",)


def parse_regex(text: str, alphabet: Alphabet):
    """Parse the regex surface syntax into a small tuple AST."""
    pos = 0
    n = len(text)

    def peek():
        return text[pos] if pos < n else None

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def parse_union():
        nonlocal pos
        node = parse_inter()
        skip_ws()
        while peek() == "|":
            pos += 1
            node = ("or", node, parse_inter())
            skip_ws()
        return node

    def parse_inter():
        nonlocal pos
        node = parse_concat()
        skip_ws()
        while peek() == "&":
            pos += 1
            node = ("and", node, parse_concat())
            skip_ws()
        return node

    def parse_concat():
        nonlocal pos
        node = parse_unary()
        while True:
            skip_ws()
            c = peek()
            if c is None or c in "|&)":
                return node
            node = ("cat", node, parse_unary())

    def parse_unary():
        nonlocal pos
        skip_ws()
        c = peek()
        if c == "!":
            pos += 1
            node = ("not", parse_unary())
        else:
            node = parse_atom()
        skip_ws()
        while peek() == "*":
            pos += 1
            node = ("star", node)
            skip_ws()
        return node

    def parse_atom():
        nonlocal pos
        skip_ws()
        c = peek()
        if c is None:
            raise RegexError("unexpected end of regex")
        if c == "(":
            pos += 1
            skip_ws()
            if peek() == ")":
                pos += 1
                return EPS
            node = parse_union()
            skip_ws()
            if peek() != ")":
                raise RegexError("missing ')' at position %d" % pos)
            pos += 1
            return node
        if c == "∅" or c == "0" and "0" not in alphabet:
            pos += 1
            return EMPTY
        if c in alphabet:
            pos += 1
            return ("lit", c)
        raise RegexError("unexpected character %r at position %d" % (c, pos))

    skip_ws()
    if pos >= n:
        raise RegexError("empty regex")
    node = parse_union()
    skip_ws()
    if pos != n:
        raise RegexError("trailing input at position %d" % pos)
    return node


def regex_to_dfa(node, alphabet: Alphabet) -> Dfa:
    """Compile a regex AST to its canonical minimal DFA."""
    tag = node[0]
    if tag == "empty":
        return empty_language(alphabet)
    if tag == "eps":
        return epsilon_language(alphabet)
    if tag == "lit":
        return letter_language(alphabet, node[1])
    if tag == "or":
        return union(regex_to_dfa(node[1], alphabet), regex_to_dfa(node[2], alphabet))
    if tag == "and":
        return intersect(regex_to_dfa(node[1], alphabet), regex_to_dfa(node[2], alphabet))
    if tag == "cat":
        return concat(regex_to_dfa(node[1], alphabet), regex_to_dfa(node[2], alphabet))
    if tag == "not":
        return complement(regex_to_dfa(node[1], alphabet))
    if tag == "star":
        return star(regex_to_dfa(node[1], alphabet))
    raise RegexError("unknown AST node %r" % (tag,))


def compile_regex(text: str, alphabet: Alphabet) -> Dfa:
    return regex_to_dfa(parse_regex(text, alphabet), alphabet)


def regex_matches(node, word) -> bool:
    """Reference matcher used by tests; exponential but fine for short words."""
    word = tuple(word)
    tag = node[0]
    if tag == "empty":
        return False
    if tag == "eps":
        return word == ()
    if tag == "lit":
        return word == (node[1],)
    if tag == "or":
        return regex_matches(node[1], word) or regex_matches(node[2], word)
    if tag == "and":
        return regex_matches(node[1], word) and regex_matches(node[2], word)
    if tag == "not":
        return not regex_matches(node[1], word)
    if tag == "cat":
        return any(regex_matches(node[1], word[:i]) and regex_matches(node[2], word[i:])
                   for i in range(len(word) + 1))
    if tag == "star":
        if word == ():
            return True
        return any(regex_matches(node[1], word[:i]) and regex_matches(node, word[i:])
                   for i in range(1, len(word) + 1))
    raise RegexError("unknown AST node %r" % (tag,))


# ---------------------------------------------------------------------------
# finite monoids


class MonoidTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteMonoid:
    """Multiplication table presentation; elements are 0..size-1."""
    size: int
    table: tuple           # table[x][y] = x*y
    unit: int

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def check_associative(self, limit: int = 12) -> bool:
        k = min(self.size, limit)
        for x in range(k):
            for y in range(k):
                for z in range(k):
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                        return False
        return True

    def is_idempotent(self, x: int) -> bool:
        return self.mul(x, x) == x

    def idempotents(self):
        return [x for x in range(self.size) if self.is_idempotent(x)]

    def power(self, x: int, e: int) -> int:
        acc = self.unit
        b = x
        while e:
            if e & 1:
                acc = self.mul(acc, b)
            b = self.mul(b, b)
            e >>= 1
        return acc

    def element_index_period(self, x: int):
        """(index, period) of the cyclic subsemigroup generated by x."""
        seen = {}
        cur = x
        k = 1
        while cur not in seen:
            seen[cur] = k
            cur = self.mul(cur, x)
            k += 1
        index = seen[cur]
        period = k - seen[cur]
        return index, period


def monoid_aperiodic(m: FiniteMonoid):
    """(aperiodic?, omega) where x^omega is idempotent for every x."""
    periods = []
    max_index = 1
    for x in range(m.size):
        idx, per = m.element_index_period(x)
        periods.append(per)
        max_index = max(max_index, idx)
    base = lcm(*periods) if periods else 1
    omega = base
    while omega < max_index:
        omega += base
    return all(p == 1 for p in periods), omega


class MonoidMorphism:
    """A morphism from the free monoid over an alphabet, given by letter images."""

    __slots__ = ("monoid", "alphabet", "letter_images")

    def __init__(self, monoid: FiniteMonoid, alphabet: Alphabet, letter_images):
        self.monoid = monoid
        self.alphabet = alphabet
        self.letter_images = dict(letter_images)

    def image(self, word) -> int:
        x = self.monoid.unit
        for a in word:
            x = self.monoid.mul(x, self.letter_images[a])
        return x

    def shortest_preimage(self, target: int):
        """Shortlex-least word mapping to `target`, or None."""
        if target == self.monoid.unit:
            return ()
        seen = {self.monoid.unit}
        queue = deque([(self.monoid.unit, ())])
        while queue:
            x, w = queue.popleft()
            for a in self.alphabet:
                y = self.monoid.mul(x, self.letter_images[a])
                if y in seen:
                    continue
                w2 = w + (a,)
                if y == target:
                    return w2
                seen.add(y)
                queue.append((y, w2))
        return None


def transition_monoid(dfa: Dfa, cap: int = 100000):
    """The transition monoid of a DFA with the induced letter morphism."""
    return monoid_from_generators(
        dfa.alphabet,
        {a: tuple(dfa.delta[a]) for a in dfa.alphabet},
        unit=tuple(range(dfa.n)),
        compose=lambda f, g: tuple(g[q] for q in f),
        cap=cap,
    )


def monoid_from_generators(alphabet: Alphabet, gens, unit, compose, cap=100000):
    """Close a set of generators under an associative composition.

    Returns (FiniteMonoid, MonoidMorphism, elements) where `elements` lists
    the concrete values indexed by element number.
    """
    idx = {unit: 0}
    elements = [unit]
    queue = deque([unit])
    while queue:
        x = queue.popleft()
        for a in alphabet:
            y = compose(x, gens[a])
            if y not in idx:
                if len(elements) >= cap:
                    raise MonoidTooLarge("monoid closure exceeded cap %d" % cap)
                idx[y] = len(elements)
                elements.append(y)
                queue.append(y)
    size = len(elements)
    table = []
    for x in elements:
        # right-multiplication by each element: compute by composing values
        row = [idx[compose(x, y)] for y in elements]
        table.append(tuple(row))
    monoid = FiniteMonoid(size, tuple(table), 0)
    morphism = MonoidMorphism(monoid, alphabet,
                              {a: idx[compose(unit, gens[a])] for a in alphabet})
    return monoid, morphism, elements


# ---------------------------------------------------------------------------
# JSON serialization of DFAs


def dfa_to_json(dfa: Dfa) -> dict:
    letters = list(dfa.alphabet.letters)
    if not all(isinstance(a, str) for a in letters):
        raise ValueError("JSON export requires string letters")
    return {
        "alphabet": letters,
        "states": dfa.n,
        "initial": dfa.initial,
        "accepting": sorted(dfa.accepting),
        "delta": {a: list(dfa.delta[a]) for a in letters},
    }


def dfa_from_json(data: dict) -> Dfa:
    alphabet = Alphabet(data["alphabet"])
    return Dfa(alphabet, data["states"], data["initial"],
               data["accepting"], {a: tuple(v) for a, v in data["delta"].items()})


def dfa_dumps(dfa: Dfa) -> str:
    return json.dumps(dfa_to_json(dfa), indent=2)
