import random

import pytest

from ctxgram import corpus
from ctxgram.grammar import Terminal, nt, parse_grammar
from ctxgram.normalize import to_binary_normal_form
from ctxgram.oracle import Item, all_strings, derive_all, step_is_valid
from ctxgram.parser import ParseError, accepts, extract_proof, parse_table, pass_bound

S5 = "S -> A B; A -> a & >(B); B -> b & <(C); C -> a;"


@pytest.fixture(scope="module")
def nf1():
    return to_binary_normal_form(corpus.load("ex1-abca").grammar)


def test_cycle_example_table():
    g = parse_grammar(S5)
    table = parse_table(g, "ab")
    assert table[0, 1] == {nt("A"), nt("C")}
    assert table[1, 2] == {nt("B")}
    assert table[0, 2] == {nt("S")}
    assert 2 <= table.passes <= pass_bound(g, 2) == 13
    assert table.accepts()


def test_boundaries_only_grow():
    table = parse_table(parse_grammar(S5), "ab")
    for before, after in zip(table.history, table.history[1:]):
        assert all(b & a == b for b, a in zip(before, after))
    assert table.history[-1] == table.history[-2]


def test_example_one(nf1):
    assert accepts(nf1, "abca")
    assert not accepts(nf1, "abcb")


def test_prototypes_and_declarations():
    nf3 = to_binary_normal_form(corpus.load("ex3-prototypes").grammar)
    assert accepts(nf3, "acdc")
    assert not accepts(nf3, "ac")
    nf2 = to_binary_normal_form(corpus.load("ex2-declarations").grammar)
    assert not accepts(nf2, "bbcac")
    assert accepts(nf2, "acbc")


def test_rejects_non_normal_form():
    with pytest.raises(ParseError):
        parse_table(parse_grammar("S -> a b;"), "ab")


def test_rejects_empty_input(nf1):
    with pytest.raises(ParseError):
        parse_table(nf1, "")


def test_rejects_foreign_characters(nf1):
    with pytest.raises(ParseError):
        parse_table(nf1, "abxa")


def check_proof(node, w, g):
    """Every internal node is a valid rule application on its children."""
    if node.is_axiom:
        assert isinstance(node.symbol, Terminal) and node.j == node.i + 1 and w[node.i] == node.symbol.char
        return
    premises = [Item(c.symbol, c.i, c.j) for c in node.children + node.context_children]
    assert node.rule in g.rules
    assert step_is_valid(node.rule, w, Item(node.symbol, node.i, node.j), premises)
    for c in node.children + node.context_children:
        check_proof(c, w, g)


def test_extract_proof(nf1):
    table = parse_table(nf1, "abca")
    proof = extract_proof(table, nf1.start, 0, 4)
    check_proof(proof, "abca", nf1)
    labels = {(str(s), i, j) for s, i, j in proof.postorder()}
    # the bc core with its two context witnesses
    assert {("B", 1, 2), ("C", 2, 3), ("A", 0, 1), ("A", 3, 4)} <= labels


def test_extract_proof_leaf_and_errors(nf1):
    table = parse_table(nf1, "abca")
    leaf = extract_proof(table, Terminal("b"), 1, 2)
    assert leaf.is_axiom and leaf.size() == 1
    with pytest.raises(KeyError):
        extract_proof(table, nt("B"), 0, 1)
    bare = parse_table(nf1, "abca", justify=False)
    with pytest.raises(ValueError):
        extract_proof(bare, nf1.start, 0, 4)


def test_proof_exports(nf1):
    proof = extract_proof(parse_table(nf1, "abca"), nf1.start, 0, 4)
    data = proof.to_json()
    assert data["symbol"] == "S" and data["i"] == 0 and data["j"] == 4
    dot = proof.to_dot("abca")
    assert dot.startswith("digraph proof {") and "style=dashed" in dot


def test_table_json(nf1):
    data = parse_table(nf1, "abca").to_json()
    assert set(data) == {"n", "passes", "cells"}
    assert all(set(c) == {"i", "j", "nts"} for c in data["cells"])


def test_printed_index_placement_differs():
    g = parse_grammar(S5)
    assert parse_table(g, "ab").accepts()
    assert not parse_table(g, "ab", printed_indices=True).accepts()


@pytest.mark.parametrize("entry_id", corpus.ids())
def test_cell_exact_agreement_with_oracle(entry_id):
    e = corpus.load(entry_id)
    nf = to_binary_normal_form(e.grammar)
    if not nf.rules:
        pytest.skip("empty normal form")
    rng = random.Random(entry_id)
    pool = [w for w in all_strings(nf.alphabet, 8) if w]
    sample = pool if len(pool) <= 300 else rng.sample(pool, 300)
    for w in sample:
        table = parse_table(nf, w)
        items = derive_all(nf, w)
        assert table.items() == {(it.symbol, it.i, it.j) for it in items.nonterminal_items()}, w
        assert table.passes <= pass_bound(nf, len(w))


def test_rule_order_does_not_matter(nf1):
    base = parse_table(nf1, "aabcaa").cells
    rng = random.Random(3)
    for _ in range(5):
        order = list(range(len(nf1.rules)))
        rng.shuffle(order)
        assert parse_table(nf1, "aabcaa", rule_order=order).cells == base


def test_format_rows(nf1):
    text = parse_table(nf1, "abca").format()
    assert text.splitlines()[0].startswith("  1:")
    assert len(text.splitlines()) == 4
