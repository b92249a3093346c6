import json

import pytest

from ctxgram import corpus
from ctxgram.grammar import (
    Conjunct,
    Grammar,
    GrammarError,
    Kind,
    Rule,
    base,
    errors_of,
    grammar_from_json,
    grammar_to_json,
    nt,
    parse_grammar,
    pretty_print,
    t,
    validate,
)

EX1 = "S -> a S | S a | B C; A -> a; B -> b & <(A); C -> c & >(A);"


def test_parse_example_one():
    g = parse_grammar(EX1)
    assert g.start == nt("S")
    assert len(g.rules) == 6
    assert {x.char for x in g.alphabet} == {"a", "b", "c"}
    assert g.nonterminals == {nt("S"), nt("A"), nt("B"), nt("C")}
    b_rule = g.rules_for(nt("B"))[0]
    assert b_rule.conjuncts == (base(t("b")), Conjunct(Kind.LeftProper, (nt("A"),)))


def test_all_context_operators():
    g = parse_grammar("S -> a & <(A) & <=(A a) & >=(a A) & >(A); A -> a;")
    kinds = [c.kind for c in g.rules[0].conjuncts]
    assert kinds == [Kind.Base, Kind.LeftProper, Kind.LeftExtended, Kind.RightExtended, Kind.RightProper]


def test_lowercase_run_is_a_terminal_sequence():
    g = parse_grammar("S -> abc;")
    assert g.rules[0].bases[0].body == (t("a"), t("b"), t("c"))


def test_quoted_terminal_and_comment():
    g = parse_grammar("# comment\nS -> '+' S | 'x';")
    assert {x.char for x in g.alphabet} == {"+", "x"}


def test_eps_contexts_lower_to_flags():
    r = parse_grammar("S -> a & <(eps) & >(eps);").rules[0]
    assert r.left_edge and r.right_edge
    assert r.conjuncts == (base(t("a")),)


def test_extended_eps_context_adds_empty_base():
    r = parse_grammar("S -> a & <=(eps);").rules[0]
    assert r.left_edge and not r.right_edge
    assert base() in r.conjuncts


def test_flags_print_as_reserved_forms():
    g = parse_grammar("S -> a & <(eps) & >(eps);")
    text = pretty_print(g)
    assert "<(eps)" in text and ">(eps)" in text
    assert parse_grammar(text) == g


def test_rule_without_base_conjunct():
    with pytest.raises(GrammarError) as e:
        parse_grammar("S -> & <(A); A -> a;")
    assert "has no base conjunct" in str(e.value)


def test_diagnostics_are_positioned():
    with pytest.raises(GrammarError) as e:
        parse_grammar("S -> a;\nS -> ( ;")
    assert e.value.diagnostics[0].line == 2


def test_reserved_names_rejected_in_source():
    with pytest.raises(GrammarError):
        parse_grammar("S -> _X; _X -> a;")
    assert parse_grammar("S -> _X; _X -> a;", allow_reserved=True).start == nt("S")


def test_start_directive_and_default():
    assert parse_grammar("A -> a; start S; S -> A;").start == nt("S")
    assert parse_grammar("A -> a; S -> A;").start == nt("A")


def test_unknown_start():
    with pytest.raises(GrammarError):
        parse_grammar("start Q; S -> a;")


def test_validate_example_one_is_clean():
    assert validate(parse_grammar(EX1)) == []


def test_validate_unproductive():
    diags = validate(parse_grammar("alphabet a; S -> A; nonterminals A;"))
    assert [d.message for d in diags] == ["unproductive nonterminal A", "unproductive nonterminal S"]
    assert not errors_of(diags)


def test_validate_unreachable():
    diags = validate(parse_grammar("S -> a; B -> b;"))
    assert [d.message for d in diags] == ["unreachable nonterminal B"]


def test_undeclared_symbol_is_an_error():
    # grammar objects built by hand can reference undeclared nonterminals
    g = parse_grammar("S -> a;")
    bad = Grammar(g.alphabet, g.nonterminals, g.rules + (Rule(nt("S"), (base(nt("Z")),)),), g.start)
    assert any("undeclared nonterminal Z" in d.message for d in errors_of(validate(bad)))


def test_validate_is_pure():
    g = parse_grammar("nonterminals B; S -> A B; A -> a; C -> c;")
    assert validate(g) == validate(g)


def test_pretty_print_refuses_empty_alphabet():
    with pytest.raises(GrammarError):
        pretty_print(parse_grammar("S -> eps;"))


@pytest.mark.parametrize("entry_id", corpus.ids())
def test_round_trip_corpus(entry_id):
    g = corpus.load(entry_id).grammar
    assert parse_grammar(pretty_print(g)) == g
    assert grammar_from_json(json.loads(json.dumps(grammar_to_json(g)))) == g


def test_json_field_names():
    data = grammar_to_json(parse_grammar("S -> a & <(eps) & >=(S);"))
    assert set(data) >= {"alphabet", "start", "rules"}
    rule = data["rules"][0]
    assert set(rule) == {"head", "conjuncts", "left_edge", "right_edge"}
    assert rule["conjuncts"][0] == {"kind": "Base", "body": ["a"]}
    assert rule["conjuncts"][1]["kind"] == "RightExtended"
    assert rule["left_edge"] is True


def test_equality_ignores_rule_order():
    assert parse_grammar("S -> a | b;") == parse_grammar("S -> b; S -> a; start S;")
