"""Grammars with one-sided contexts.

``grammar`` holds the data model and the ``.2cg`` language, ``oracle`` the
reference recognizer, ``normalize`` the conversion to binary normal form,
``parser`` the tabular recognizer and ``corpus`` the bundled grammars.
"""

from .grammar import (
    Conjunct,
    Diagnostic,
    Grammar,
    GrammarError,
    Kind,
    Nonterminal,
    Rule,
    Terminal,
    grammar_from_json,
    grammar_to_json,
    load_grammar,
    parse_grammar,
    pretty_print,
    validate,
)
from .normalize import (
    NormalizationReport,
    NullableTriple,
    compute_nullable,
    compute_nullable_left_eps,
    compute_nullable_right_eps,
    eliminate_epsilon,
    is_binary_normal_form,
    normalize,
    to_binary_normal_form,
)
from .oracle import Item, ItemSet, derive_all, enumerate_language
from .oracle import accepts as oracle_accepts
from .parser import ParseError, ParseTable, extract_proof, parse_table
from .parser import accepts as parser_accepts
from .proof import ProofNode

__all__ = [
    "Conjunct",
    "Diagnostic",
    "Grammar",
    "GrammarError",
    "Item",
    "ItemSet",
    "Kind",
    "Nonterminal",
    "NormalizationReport",
    "NullableTriple",
    "ParseError",
    "ParseTable",
    "ProofNode",
    "Rule",
    "Terminal",
    "compute_nullable",
    "compute_nullable_left_eps",
    "compute_nullable_right_eps",
    "derive_all",
    "eliminate_epsilon",
    "enumerate_language",
    "extract_proof",
    "grammar_from_json",
    "grammar_to_json",
    "is_binary_normal_form",
    "load_grammar",
    "normalize",
    "oracle_accepts",
    "parse_grammar",
    "parse_table",
    "parser_accepts",
    "pretty_print",
    "to_binary_normal_form",
    "validate",
]
