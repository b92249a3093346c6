"""Reference recognizer: least fixpoint of the item deduction system.

For an input ``w = a1 ... an`` an item ``(X, i, j)`` states that the substring
``w[i:j]`` written between ``w[:i]`` and ``w[j:]`` has the property ``X``.
Axioms are the terminal items ``(a_k, k-1, k)``; every grammar rule is a
deduction scheme whose premises are found by partitioning the relevant span:

========================  ==============
conjunct                  span
========================  ==============
base ``alpha``            ``(i, j)``
``<(beta)``               ``(0, i)``
``<=(gamma)``             ``(0, j)``
``>=(kappa)``             ``(i, n)``
``>(delta)``              ``(j, n)``
========================  ==============

The engine works on arbitrary grammars (any body lengths, empty bodies, edge
flags) and is meant for desk-scale inputs. It is the ground truth against which
the normal-form transformation and the tabular parser are checked.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .grammar import Grammar, GrammarError, Kind, Nonterminal, Rule, Terminal
from .proof import ProofNode


@dataclass(frozen=True, slots=True)
class Item:
    symbol: object
    i: int
    j: int

    def __str__(self):
        return f"{self.symbol}({self.i},{self.j})"


@dataclass(frozen=True)
class Justification:
    rule_index: int
    rule: Rule
    # one position tuple (p0, p1, ..., pl) per conjunct, in rule order
    partitions: tuple
    step: int

    def premises(self) -> list:
        out = []
        for c, points in zip(self.rule.conjuncts, self.partitions):
            for x, (p, q) in zip(c.body, zip(points, points[1:])):
                out.append(Item(x, p, q))
        return out


def conjunct_span(kind: Kind, i: int, j: int, n: int) -> tuple:
    if kind is Kind.Base:
        return i, j
    if kind is Kind.LeftProper:
        return 0, i
    if kind is Kind.LeftExtended:
        return 0, j
    if kind is Kind.RightExtended:
        return i, n
    return j, n


def check_input(g: Grammar, w: str) -> None:
    bad = sorted({ch for ch in w if Terminal(ch) not in g.alphabet})
    if bad:
        raise GrammarError(f"input characters outside the alphabet: {', '.join(map(repr, bad))}")


class ItemSet:
    """Closed item set for one grammar and one input string."""

    def __init__(self, grammar: Grammar, w: str):
        self.grammar = grammar
        self.w = w
        self.n = len(w)
        self.justification: dict = {}
        self.order: list = []  # insertion order; axioms first
        self.passes = 0
        self.insertions = 0

    def __contains__(self, item) -> bool:
        return item in self.justification

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def items(self) -> set:
        return set(self.order)

    def nonterminal_items(self) -> set:
        return {it for it in self.order if isinstance(it.symbol, Nonterminal)}

    def has(self, symbol, i, j) -> bool:
        return Item(symbol, i, j) in self.justification

    def proof(self, item: Item) -> ProofNode:
        """Proof tree for ``item`` built by replaying recorded justifications."""
        if item not in self.justification:
            raise KeyError(f"item {item} was not derived")
        just = self.justification[item]
        if just is None:
            return ProofNode(item.symbol, item.i, item.j)
        children, context_children = [], []
        for c, points in zip(just.rule.conjuncts, just.partitions):
            subs = [self.proof(Item(x, p, q)) for x, (p, q) in zip(c.body, zip(points, points[1:]))]
            (children if c.is_base else context_children).extend(subs)
        return ProofNode(item.symbol, item.i, item.j, just.rule, children, context_children)

    def to_json(self) -> dict:
        items = sorted(self.order, key=lambda it: (it.j - it.i, it.i, str(it.symbol)))
        return {"n": self.n, "items": [{"symbol": str(it.symbol), "i": it.i, "j": it.j} for it in items]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


class _Engine:
    def __init__(self, g: Grammar, w: str, rule_order=None):
        self.g = g
        self.w = w
        self.n = n = len(w)
        rules = list(enumerate(g.rules))
        if rule_order is not None:
            rules = [rules[k] for k in rule_order]
        # symbols and conjunct bodies as small integers; hashing dataclasses dominates otherwise
        self.symbols: list = []
        sym_id: dict = {}
        body_id: dict = {}
        self.bodies: list = []

        def sid(x):
            if x not in sym_id:
                sym_id[x] = len(self.symbols)
                self.symbols.append(x)
            return sym_id[x]

        self.sym_id = sym_id
        self.rules = []
        for idx, r in rules:
            conj = []
            for c in r.conjuncts:
                body = tuple(sid(x) for x in c.body)
                if body not in body_id:
                    body_id[body] = len(self.bodies)
                    self.bodies.append(body)
                conj.append((_SPAN[c.kind], body_id[body]))
            self.rules.append((idx, r, sid(r.head), r.left_edge, r.right_edge, tuple(conj)))
        for ch in w:
            sid(Terminal(ch))
        # fwd[x][i]: bitmask of j with (x, i, j) derived
        self.fwd = [[0] * (n + 1) for _ in self.symbols]
        self.result = ItemSet(g, w)
        for k, ch in enumerate(w):
            self.add(sym_id[Terminal(ch)], k, k + 1, None)
        self.memo: dict = {}

    def add(self, x: int, i: int, j: int, just):
        self.fwd[x][i] |= 1 << j
        item = Item(self.symbols[x], i, j)
        self.result.justification[item] = just
        self.result.order.append(item)
        self.result.insertions += 1

    def holds(self, body, p, q) -> bool:
        """Can ``body`` be split over ``(p, q)``? Forward reachability over bitmasks."""
        if not body:
            return p == q
        reach = 1 << p
        window = (1 << (q + 1)) - 1
        fwd = self.fwd
        for x in body:
            row = fwd[x]
            nxt = 0
            while reach:
                low = reach & -reach
                nxt |= row[low.bit_length() - 1]
                reach ^= low
            reach = nxt & window
            if not reach:
                return False
        return bool(reach >> q & 1)

    def partition(self, body, p, q):
        """Lexicographically least split points for ``body`` over ``(p, q)``, or None."""
        if not body:
            return (p,) if p == q else None
        rows = [self.fwd[x] for x in body]
        # back[t]: positions from which body[t:] can reach q
        back = [0] * (len(body) + 1)
        back[-1] = 1 << q
        for t in range(len(body) - 1, -1, -1):
            target, row, mask = back[t + 1], rows[t], 0
            for k in range(p, q + 1):
                if row[k] & target:
                    mask |= 1 << k
            back[t] = mask
            if not mask:
                return None
        if not back[0] >> p & 1:
            return None
        points, pos = [p], p
        for t in range(len(body)):
            options = rows[t][pos] & back[t + 1]
            pos = (options & -options).bit_length() - 1
            points.append(pos)
        return tuple(points)

    def run(self) -> ItemSet:
        n = self.n
        spans = [(i, i + length) for length in range(n + 1) for i in range(n - length + 1)]
        fwd, bodies = self.fwd, self.bodies
        changed = True
        while changed:
            changed = False
            self.result.passes += 1
            # the item set only grows: positive answers stay valid, negative ones
            # may go stale within a pass, but the last pass adds nothing
            memo = {}
            for i, j in spans:
                # (p, q) for span codes Base, <, <=, >=, >
                ranges = ((i, j), (0, i), (0, j), (i, n), (j, n))
                for idx, rule, head, le, re, conj in self.rules:
                    if fwd[head][i] >> j & 1:
                        continue
                    if le and i != 0 or re and j != n:
                        continue
                    ok = True
                    for code, b in conj:
                        p, q = ranges[code]
                        key = (b, p, q)
                        hit = memo.get(key)
                        if hit is None:
                            hit = memo[key] = self.holds(bodies[b], p, q)
                        if not hit:
                            ok = False
                            break
                    if ok:
                        parts = tuple(self.partition(bodies[b], *ranges[code]) for code, b in conj)
                        self.add(head, i, j, Justification(idx, rule, parts, len(self.result.order)))
                        changed = True
        return self.result


_SPAN = {Kind.Base: 0, Kind.LeftProper: 1, Kind.LeftExtended: 2, Kind.RightExtended: 3, Kind.RightProper: 4}


def derive_all(g: Grammar, w: str, rule_order=None) -> ItemSet:
    """Least item set closed under the axioms and all rule schemes of ``g``.

    ``rule_order`` optionally permutes the rule iteration order (a list of rule
    indices); the resulting item set does not depend on it.
    """
    check_input(g, w)
    return _Engine(g, w, rule_order).run()


def accepts(g: Grammar, w: str) -> bool:
    return derive_all(g, w).has(g.start, 0, len(w))


def all_strings(alphabet, max_len: int):
    """All strings over ``alphabet`` up to ``max_len`` in length-then-lex order."""
    letters = sorted(a.char if isinstance(a, Terminal) else a for a in alphabet)
    for length in range(max_len + 1):
        for combo in itertools.product(letters, repeat=length):
            yield "".join(combo)


def enumerate_language(g: Grammar, max_len: int, candidates=None) -> list:
    """Accepted strings of length at most ``max_len``, length-then-lex sorted.

    ``candidates`` restricts the search to a given iterable of strings.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    pool = all_strings(g.alphabet, max_len) if candidates is None else candidates
    found = [w for w in pool if len(w) <= max_len and accepts(g, w)]
    return sorted(set(found), key=lambda s: (len(s), s))


# --------------------------------------------------------------------------
# independent step checker


def _naive_partitions(p, q, parts):
    """All ways to cut (p, q) into ``parts`` consecutive (possibly empty) pieces."""
    if parts == 0:
        if p == q:
            yield (p,)
        return
    for cuts in itertools.combinations_with_replacement(range(p, q + 1), parts - 1):
        yield (p, *cuts, q)


def step_is_valid(rule: Rule, w: str, conclusion: Item, premises) -> bool:
    """Does ``rule`` derive ``conclusion`` from ``premises`` (plus axioms) alone?

    Enumerates partitions directly, without the fixpoint engine, so it can be
    used to audit recorded deductions.
    """
    n = len(w)
    i, j = conclusion.i, conclusion.j
    if conclusion.symbol != rule.head:
        return False
    if rule.left_edge and i != 0 or rule.right_edge and j != n:
        return False
    known = set(premises)

    def holds(x, p, q):
        if isinstance(x, Terminal):
            return q == p + 1 and w[p] == x.char
        return Item(x, p, q) in known

    for c in rule.conjuncts:
        p, q = conjunct_span(c.kind, i, j, n)
        if not any(
            all(holds(x, a, b) for x, (a, b) in zip(c.body, zip(pts, pts[1:])))
            for pts in _naive_partitions(p, q, len(c.body))
        ):
            return False
    return True


def replay(items: ItemSet) -> bool:
    """Check every recorded justification using only earlier items."""
    seen = set()
    for item in items.order:
        just = items.justification[item]
        if just is None:
            if not (isinstance(item.symbol, Terminal) and item.j == item.i + 1 and items.w[item.i] == item.symbol.char):
                return False
        else:
            premises = just.premises()
            if not all(p in seen or isinstance(p.symbol, Terminal) for p in premises):
                return False
            if not step_is_valid(just.rule, items.w, item, [p for p in premises if p in seen]):
                return False
        seen.add(item)
    return True
