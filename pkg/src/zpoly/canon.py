"""k-residual transducers and the star-freeness decision.

The k-residual transducer of a level-k function explores residuals f|_w in
breadth-first shortlex order, merging residuals that agree up to growth
degree k-1.  Transitions carry the correction term f|_{wa} - f|_v (a
function of growth degree at most k-1) and states output f(w).  The machine
computes f(a1..an) as the sum of the transition labels applied to the
successive suffixes plus the output of the final state.

Star-freeness is decided by induction on the growth degree: at degree <= 0
the function has finitely many residuals and the question reduces to
aperiodicity of its minimal automaton; at degree k >= 1 the function is
star-free iff its k-residual transducer is counter-free and every
transition label is star-free.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from . import analysis, lang, series
from .analysis import BudgetExhausted, SearchBudget
from .cplc import Cplc


class UncertainConstruction(RuntimeError):
    """An underlying growth decision ran out of budget; no machine is
    produced rather than risking a wrong one."""


class StateBudgetExceeded(RuntimeError):
    pass


@dataclass
class ResidualTransducer:
    alphabet: object
    k: int
    state_words: list            # representative word per state (shortlex BFS)
    residuals: list              # Cplc residual per state
    delta: dict                  # (state, letter) -> state
    labels: dict                 # (state, letter) -> Cplc of level <= k-1
    outputs: list                # integer f(state word)
    initial: int = 0
    _label_reps: dict = field(default_factory=dict, repr=False)

    @property
    def n_states(self) -> int:
        return len(self.state_words)

    def step(self, q: int, a) -> int:
        return self.delta[(q, a)]

    def eval(self, word) -> int:
        word = tuple(word)
        total = 0
        q = self.initial
        for i, a in enumerate(word):
            total += self._label_value((q, a), word[i + 1:])
            q = self.delta[(q, a)]
        return total + self.outputs[q]

    def _label_value(self, key, suffix) -> int:
        label = self.labels[key]
        if not label.terms:
            return 0
        if key not in self._label_reps:
            self._label_reps[key] = series.minimize(label.to_linrep())
        v = self._label_reps[key].eval(suffix)
        assert v.denominator == 1
        return int(v)

    def underlying_dfa(self) -> lang.Dfa:
        delta = {a: tuple(self.delta[(q, a)] for q in range(self.n_states))
                 for a in self.alphabet}
        return lang.Dfa(self.alphabet, self.n_states, self.initial, (), delta)

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet.letters),
            "k": self.k,
            "states": [{"word": "".join(map(str, w)), "output": out}
                       for w, out in zip(self.state_words, self.outputs)],
            "initial": self.initial,
            "transitions": [
                {"from": q, "letter": a, "to": self.delta[(q, a)],
                 "label": self.labels[(q, a)].to_json()}
                for q in range(self.n_states) for a in self.alphabet
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_dot(self) -> str:
        lines = ["digraph transducer {", "  rankdir=LR;", "  node [shape=circle];"]
        for q, (w, out) in enumerate(zip(self.state_words, self.outputs)):
            name = "".join(map(str, w)) or "ε"
            lines.append('  q%d [label="%s | %d"];' % (q, name, out))
        for q in range(self.n_states):
            for a in self.alphabet:
                label = self.labels[(q, a)]
                text = "0" if not label.terms else repr(label)
                lines.append('  q%d -> q%d [label="%s / %s"];'
                             % (q, self.delta[(q, a)], a, text))
        lines.append("}")
        return "\n".join(lines)


def residual_transducer(f: Cplc, k: int,
                        budget: SearchBudget | None = None,
                        max_states: int = 64) -> ResidualTransducer:
    """Algorithm: breadth-first shortlex exploration of residuals modulo
    growth degree k-1.

    Raises UncertainConstruction if any merge test runs out of budget, and
    StateBudgetExceeded if more than max_states classes appear.
    """
    budget = budget or SearchBudget()
    state_words = [()]
    residuals = [f]
    delta = {}
    labels = {}
    queue = deque([0])
    while queue:
        q = queue.popleft()
        for a in f.alphabet:
            g = residuals[q].residual((a,))
            target = None
            for j, h in enumerate(residuals):
                try:
                    if analysis.equiv_mod_k(g, h, k - 1, budget):
                        target = j
                        break
                except BudgetExhausted as exc:
                    raise UncertainConstruction(str(exc)) from exc
            if target is None:
                if len(residuals) >= max_states:
                    raise StateBudgetExceeded(
                        "more than %d residual classes at level %d"
                        % (max_states, k))
                target = len(residuals)
                state_words.append(state_words[q] + (a,))
                residuals.append(g)
                queue.append(target)
            delta[(q, a)] = target
            labels[(q, a)] = g.sub(residuals[target])
    outputs = [r.eval_at_epsilon() for r in residuals]
    return ResidualTransducer(f.alphabet, k, state_words, residuals,
                              delta, labels, outputs)


# ---------------------------------------------------------------------------
# counter-freeness


@dataclass
class CounterWitness:
    state: int
    word: tuple
    period: int    # delta(state, word^period) = state but delta(state, word) != state


def counter_free(t: ResidualTransducer):
    """(True, None) when the transition monoid is aperiodic, else a counter."""
    dfa = t.underlying_dfa()
    monoid, morphism, elements = lang.monoid_from_generators(
        dfa.alphabet,
        {a: tuple(dfa.delta[a]) for a in dfa.alphabet},
        unit=tuple(range(dfa.n)),
        compose=lambda x, y: tuple(y[q] for q in x),
    )
    aperiodic, _omega = lang.monoid_aperiodic(monoid)
    if aperiodic:
        return True, None
    # find a concrete counter: a state on a nontrivial cycle of some word
    for x in range(monoid.size):
        _idx, per = monoid.element_index_period(x)
        if per == 1:
            continue
        word = morphism.shortest_preimage(x)
        trans = elements[x]
        for q in range(dfa.n):
            orbit = [q]
            cur = trans[q]
            while cur != q and len(orbit) <= dfa.n:
                orbit.append(cur)
                cur = trans[cur]
            if cur == q and len(orbit) >= 2:
                return False, CounterWitness(q, word, len(orbit))
    raise AssertionError("non-aperiodic monoid without a counter")


# ---------------------------------------------------------------------------
# star-freeness


@dataclass
class StarFreeVerdict:
    star_free: bool
    reason: str
    witness: object = None
    trace: list = field(default_factory=list)


def _minimal_automaton_of_bounded(f: Cplc,
                                  budget: SearchBudget) -> ResidualTransducer:
    """The 0-residual transducer: residuals modulo exact equality.  For a
    bounded (level-0 after cancellation) function this is its minimal
    automaton with integer outputs."""
    return residual_transducer(f, 0, budget)


def star_free(f: Cplc, budget: SearchBudget | None = None,
              _depth: int = 0) -> StarFreeVerdict:
    """Decide star-freeness by induction on the growth degree."""
    budget = budget or SearchBudget()
    if _depth > 16:
        raise RecursionError("star-freeness recursion too deep")
    verdict = analysis.growth_degree(f, budget)
    k = verdict.degree
    if k <= 0 and verdict.budget_exhausted:
        raise UncertainConstruction("growth degree undecided within budget")
    if k <= 0:
        try:
            machine = _minimal_automaton_of_bounded(f, budget)
        except BudgetExhausted as exc:
            raise UncertainConstruction(str(exc)) from exc
        ok, counter = counter_free(machine)
        if ok:
            return StarFreeVerdict(True, "aperiodic minimal automaton",
                                   trace=[{"degree": k, "states": machine.n_states}])
        return StarFreeVerdict(False, "minimal automaton has a counter",
                               witness=counter,
                               trace=[{"degree": k, "states": machine.n_states}])
    if verdict.budget_exhausted:
        raise UncertainConstruction(
            "growth degree only bounded from below (%d) within budget" % k)
    machine = residual_transducer(f, k, budget)
    ok, counter = counter_free(machine)
    trace = [{"degree": k, "states": machine.n_states}]
    if not ok:
        return StarFreeVerdict(False, "%d-residual transducer has a counter" % k,
                               witness=counter, trace=trace)
    for key in sorted(machine.labels, key=lambda kv: (kv[0], str(kv[1]))):
        label = machine.labels[key]
        if not label.terms:
            continue
        sub = star_free(label, budget, _depth + 1)
        trace.extend(sub.trace)
        if not sub.star_free:
            return StarFreeVerdict(
                False, "transition label (%d, %r) is not star-free: %s"
                % (key[0], key[1], sub.reason),
                witness=sub.witness, trace=trace)
    return StarFreeVerdict(True, "counter-free transducer with star-free labels",
                           trace=trace)
