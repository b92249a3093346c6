"""Shared checks for the normalization and acceptance suites."""

from __future__ import annotations

from ctxgram.grammar import Grammar
from ctxgram.normalize import (
    compute_nullable,
    compute_nullable_left_eps,
    compute_nullable_right_eps,
    pre_normalize,
)
from ctxgram.oracle import all_strings, derive_all
from ctxgram.parser import parse_table


def nullable_characterization_failures(g: Grammar, max_len: int, prune: bool = True) -> list:
    """Counterexamples to the nullable characterizations on every input up to ``max_len``.

    Empty-string items of ``A`` at position ``i`` must be explained by a
    nullable triple; items at ``(0, 0)`` and ``(n, n)`` must also be explained
    by an entry of the left or right empty-context set, and conversely.
    """
    pre = pre_normalize(g)
    nullable = compute_nullable(pre, prune)
    left = compute_nullable_left_eps(pre, nullable, prune)
    right = compute_nullable_right_eps(pre, nullable, prune)
    nts = sorted(pre.nonterminals)
    failures = []
    for w in all_strings(pre.alphabet, max_len):
        n = len(w)
        items = derive_all(pre, w)
        has = items.has
        for a in nts:
            for i in range(n + 1):
                predicted = any(
                    t.A == a
                    and all(has(u, 0, i) for u in t.U)
                    and all(has(v, i, n) for v in t.V)
                    and (not t.left_edge or i == 0)
                    and (not t.right_edge or i == n)
                    for t in nullable
                )
                if predicted != has(a, i, i):
                    failures.append(("nullable", w, a, i, has(a, i, i)))
            predicted = any(
                e.A == a and all(has(v, 0, n) for v in e.V) and (not e.right_edge or n == 0) for e in left
            )
            if predicted != has(a, 0, 0):
                failures.append(("left_eps", w, a, 0, has(a, 0, 0)))
            predicted = any(
                e.A == a and all(has(u, 0, n) for u in e.U) and (not e.left_edge or n == 0) for e in right
            )
            if predicted != has(a, n, n):
                failures.append(("right_eps", w, a, n, has(a, n, n)))
    return failures


def language_differences(original: Grammar, nf: Grammar, candidates) -> list:
    """Non-empty candidates on which the oracle (original) and the parser (normal form) disagree."""
    diffs = []
    for w in candidates:
        if not w:
            continue
        expected = derive_all(original, w).has(original.start, 0, len(w))
        got = parse_table(nf, w, justify=False).accepts() if nf.rules else False
        if expected != got:
            diffs.append((w, expected, got))
    return diffs
