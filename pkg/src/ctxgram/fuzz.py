"""Random grammars for differential and property testing.

Both generators are driven by a ``random.Random`` so that a failing case is
reproduced from its seed alone.
"""

from __future__ import annotations

import random

from .grammar import Conjunct, Grammar, Kind, Nonterminal, Rule, Terminal, lower_rule

NAMES = "SABCD"
CONTEXT_KINDS = (Kind.LeftProper, Kind.LeftExtended, Kind.RightExtended, Kind.RightProper)


def _nonterminals(rng: random.Random, max_nonterminals: int) -> list:
    count = rng.randint(1, max_nonterminals)
    return [Nonterminal(name) for name in NAMES[:count]]


def _assemble(alphabet: str, nts: list, rules: list) -> Grammar:
    return Grammar(frozenset(Terminal(a) for a in alphabet), frozenset(nts), tuple(rules), nts[0])


def random_nf_grammar(
    rng: random.Random,
    max_nonterminals: int = 5,
    max_rules: int = 10,
    alphabet: str = "ab",
    context_prob: float = 0.4,
    edge_prob: float = 0.1,
) -> Grammar:
    """Grammar already in binary normal form.

    Every nonterminal gets a terminal rule first, so that most grammars derive
    something; the rest are pair rules with up to two base pairs.
    """
    nts = _nonterminals(rng, max_nonterminals)
    n_rules = rng.randint(len(nts), max(len(nts), max_rules))

    def contexts():
        out = []
        for kind in CONTEXT_KINDS:
            if rng.random() < context_prob / 2:
                out.append(Conjunct(kind, (rng.choice(nts),)))
        return out

    def flags():
        return rng.random() < edge_prob, rng.random() < edge_prob

    rules = []
    for k in range(n_rules):
        head = nts[k] if k < len(nts) else rng.choice(nts)
        if k < len(nts) or rng.random() < 0.3:
            bases = [Conjunct(Kind.Base, (Terminal(rng.choice(alphabet)),))]
        else:
            bases = [
                Conjunct(Kind.Base, (rng.choice(nts), rng.choice(nts)))
                for _ in range(1 if rng.random() < 0.7 else 2)
            ]
        rules.append(Rule(head, tuple(bases + contexts()), *flags()))
    return _assemble(alphabet, nts, rules)


def random_grammar(
    rng: random.Random,
    max_nonterminals: int = 4,
    max_rules: int = 7,
    alphabet: str = "ab",
    max_body: int = 3,
    context_prob: float = 0.3,
) -> Grammar:
    """Unrestricted grammar: empty bodies, long bodies, mixed symbols, any context.

    Edge flags are not drawn directly; they arise from empty context bodies.
    """
    nts = _nonterminals(rng, max_nonterminals)
    symbols = nts + [Terminal(a) for a in alphabet]
    n_rules = rng.randint(1, max_rules)

    def body(max_len):
        return tuple(rng.choice(symbols) for _ in range(rng.randint(0, max_len)))

    rules = []
    for k in range(n_rules):
        head = nts[k] if k < len(nts) else rng.choice(nts)
        conj = [Conjunct(Kind.Base, body(max_body))]
        if rng.random() < 0.15:
            conj.append(Conjunct(Kind.Base, body(max_body)))
        for kind in CONTEXT_KINDS:
            if rng.random() < context_prob / 2:
                conj.append(Conjunct(kind, body(2)))
        rules.append(lower_rule(head, conj))
    return _assemble(alphabet, nts, rules)


def random_input(rng: random.Random, alphabet: str, max_len: int, min_len: int = 0) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(min_len, max_len)))
