"""Multi-pass tabular recognizer for grammars in binary normal form.

``T[i, j]`` is the set of nonterminals generating ``w[i:j]`` in left context
``w[:i]`` and right context ``w[j:]``. One pass fills the table bottom-up, as
in Cocke-Kasami-Younger, reading context requirements from the boundary
entries ``T[0, j]`` and ``T[i, n]``. Since a pass can grow those boundary
entries, passes repeat until a pass leaves all of them unchanged; at most
``(2n - 1) * |N| + 1`` passes are needed.

Context checks for a rule at span ``(i, j)``::

    <(D)   D in T[0, i]        <=(E)  E in T[0, j]
    >=(F)  F in T[i, n]        >(H)   H in T[j, n]

Entries ``T[0, 0]`` and ``T[n, n]`` do not exist and count as empty.

Setting ``printed_indices=True`` swaps the spans of ``>=`` and ``>`` back to
``F in T[j, n]`` and ``H in T[i, n]`` (with ``i = j - 1`` for single-symbol
rules). That placement is wrong; it is kept only so the test-suite can show
that it breaks agreement with the reference deduction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .grammar import Grammar, GrammarError, Kind, Terminal
from .normalize import shape_violations
from .oracle import check_input
from .proof import ProofNode


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Entry:
    """How ``A`` entered ``T[i, j]``: the rule and one split point per pair."""

    rule: object
    splits: tuple  # k for every base pair, () for a terminal rule
    step: int


@dataclass
class ParseTable:
    grammar: Grammar
    w: str
    cells: dict  # (i, j) -> frozenset of Nonterminal, only non-empty cells
    passes: int
    work: int
    just: dict | None = None  # (A, i, j) -> Entry
    history: list = field(default_factory=list)  # boundary snapshot after every pass

    @property
    def n(self) -> int:
        return len(self.w)

    def __getitem__(self, span) -> frozenset:
        return self.cells.get(span, frozenset())

    def accepts(self) -> bool:
        return self.grammar.start in self[0, self.n]

    def items(self) -> set:
        return {(a, i, j) for (i, j), nts in self.cells.items() for a in nts}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "passes": self.passes,
            "cells": [
                {"i": i, "j": j, "nts": sorted(a.name for a in nts)}
                for (i, j), nts in sorted(self.cells.items(), key=lambda kv: (kv[0][1] - kv[0][0], kv[0][0]))
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def format(self) -> str:
        """Triangular text rendering, one row per substring length."""
        lines = []
        for length in range(1, self.n + 1):
            row = []
            for i in range(self.n - length + 1):
                nts = sorted(a.name for a in self[i, i + length])
                row.append("{" + ",".join(nts) + "}")
            lines.append(f"{length:>3}: " + " ".join(row))
        return "\n".join(lines)


class _Compiled:
    """Rules of a normal-form grammar turned into bitmasks over nonterminals."""

    def __init__(self, g: Grammar, rule_order=None):
        bad = shape_violations(g)
        if bad:
            raise ParseError(f"grammar is not in binary normal form: {bad[0]}")
        self.nts = sorted(g.nonterminals, key=lambda a: a.name)
        self.index = {a: k for k, a in enumerate(self.nts)}
        rules = list(g.rules)
        if rule_order is not None:
            rules = [rules[k] for k in rule_order]
        self.pairs: list = []
        pair_id: dict = {}
        self.term_rules, self.pair_rules = [], []
        for r in rules:
            masks = {kind: 0 for kind in (Kind.LeftProper, Kind.LeftExtended, Kind.RightExtended, Kind.RightProper)}
            for c in r.contexts:
                masks[c.kind] |= 1 << self.index[c.body[0]]
            ctx = (masks[Kind.LeftProper], masks[Kind.LeftExtended], masks[Kind.RightExtended], masks[Kind.RightProper])
            head = self.index[r.head]
            first = r.bases[0].body
            if len(first) == 1:
                self.term_rules.append((head, first[0].char, ctx, r.left_edge, r.right_edge, r))
                continue
            ids = []
            for c in r.bases:
                key = (self.index[c.body[0]], self.index[c.body[1]])
                if key not in pair_id:
                    pair_id[key] = len(self.pairs)
                    self.pairs.append(key)
                ids.append(pair_id[key])
            need = 0
            for p in ids:
                need |= 1 << p
            self.pair_rules.append((head, need, tuple(ids), ctx, r.left_edge, r.right_edge, r))


def parse_table(g: Grammar, w: str, justify: bool = True, rule_order=None, printed_indices: bool = False) -> ParseTable:
    """Fill the table for ``w`` (non-empty) and return it.

    ``rule_order`` permutes the rule list; the final table does not depend on it.
    """
    if not w:
        raise ParseError("the tabular parser needs a non-empty input; ask the oracle about the empty string")
    try:
        check_input(g, w)
    except GrammarError as e:
        raise ParseError(str(e)) from None
    comp = _Compiled(g, rule_order)
    n = len(w)
    nts = comp.nts
    # T[i][j] bitmask of nonterminals; starts[b][i] / ends[c][j] bitmasks of k
    T = [[0] * (n + 1) for _ in range(n + 1)]
    starts = [[0] * (n + 1) for _ in nts]
    ends = [[0] * (n + 1) for _ in nts]
    just = {} if justify else None
    work = 0
    passes = 0
    history = []
    steps = [0]

    def add(a, i, j, rule, splits):
        T[i][j] |= 1 << a
        starts[a][i] |= 1 << j
        ends[a][j] |= 1 << i
        if just is not None:
            steps[0] += 1
            just[(nts[a], i, j)] = Entry(rule, splits, steps[0])

    def cell(i, j):
        return T[i][j] if i < j else 0

    def contexts_hold(ctx, le, re, i, j):
        d, e, f, h = ctx
        if le and i != 0 or re and j != n:
            return False
        if printed_indices:
            f_span, h_span = cell(j, n), cell(i, n)
        else:
            f_span, h_span = cell(i, n), cell(j, n)
        return (
            d & cell(0, i) == d
            and e & cell(0, j) == e
            and f & f_span == f
            and h & h_span == h
        )

    def boundary():
        return tuple(T[0][j] for j in range(1, n + 1)) + tuple(T[i][n] for i in range(1, n))

    while True:
        passes += 1
        before = boundary()
        for j in range(1, n + 1):
            ch = w[j - 1]
            for a, letter, ctx, le, re, rule in comp.term_rules:
                if T[j - 1][j] >> a & 1:
                    continue
                work += 1
                if letter == ch and contexts_hold(ctx, le, re, j - 1, j):
                    add(a, j - 1, j, rule, ())
            for i in range(j - 2, -1, -1):
                if not comp.pair_rules:
                    continue
                # the pair set P of this cell, restricted to pairs used by the grammar
                present = 0
                for p, (b, c) in enumerate(comp.pairs):
                    work += 1
                    if starts[b][i] & ends[c][j]:
                        present |= 1 << p
                for a, need, ids, ctx, le, re, rule in comp.pair_rules:
                    if T[i][j] >> a & 1:
                        continue
                    work += 1
                    if present & need == need and contexts_hold(ctx, le, re, i, j):
                        splits = ()
                        if just is not None:
                            splits = tuple(_lowest(starts[comp.pairs[p][0]][i] & ends[comp.pairs[p][1]][j]) for p in ids)
                        add(a, i, j, rule, splits)
        history.append(boundary())
        if boundary() == before:
            break

    cells = {}
    for i in range(n):
        for j in range(i + 1, n + 1):
            if T[i][j]:
                cells[(i, j)] = frozenset(nts[a] for a in range(len(nts)) if T[i][j] >> a & 1)
    return ParseTable(g, w, cells, passes, work, just, history)


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def accepts(g: Grammar, w: str) -> bool:
    return parse_table(g, w, justify=False).accepts()


def pass_bound(g: Grammar, n: int) -> int:
    return (2 * n - 1) * len(g.nonterminals) + 1


def extract_proof(table: ParseTable, symbol, i: int, j: int) -> ProofNode:
    """Proof tree of ``symbol`` over ``w[i:j]`` rebuilt from recorded entries."""
    w = table.w
    if isinstance(symbol, Terminal):
        if j == i + 1 and 0 <= i < len(w) and w[i] == symbol.char:
            return ProofNode(symbol, i, j)
        raise KeyError(f"no axiom {symbol}({i},{j})")
    if table.just is None:
        raise ValueError("table was built without justifications")
    if (symbol, i, j) not in table.just:
        raise KeyError(f"{symbol} is not in T[{i}, {j}]")
    entry = table.just[(symbol, i, j)]
    rule, n = entry.rule, table.n
    children = []
    if not entry.splits:
        children.append(ProofNode(rule.bases[0].body[0], i, j))
    else:
        for c, k in zip(rule.bases, entry.splits):
            children.append(extract_proof(table, c.body[0], i, k))
            children.append(extract_proof(table, c.body[1], k, j))
    spans = {
        Kind.LeftProper: (0, i),
        Kind.LeftExtended: (0, j),
        Kind.RightExtended: (i, n),
        Kind.RightProper: (j, n),
    }
    context_children = [extract_proof(table, c.body[0], *spans[c.kind]) for c in rule.contexts]
    return ProofNode(symbol, i, j, rule, children, context_children)

