"""Grammar data model, textual DSL, validation and pretty-printing.

A grammar with two-sided contexts has rules of the shape::

    A -> alpha1 & ... & alphak & <(beta) & <=(gamma) & >=(kappa) & >(delta)

where each ``alpha`` is a base conjunct describing the substring itself and
the four context operators describe the left context ``u``, the extended
left context ``uw``, the extended right context ``wv`` and the right context
``v`` of the substring ``w`` occurring in ``u w v``.

DSL summary::

    # comment
    alphabet a b c;         # optional, extra terminals
    nonterminals X Y;       # optional, declares symbols that may have no rules
    start S;                # optional, default is the head of the first rule
    S -> a S | S a | B C;
    B -> b & <(A);
    A -> eps;               # empty string

Terminals are single lowercase letters or quoted characters (``'+'``).
A run of lowercase letters such as ``abc`` is read as three terminals, except
for the keyword ``eps``.
"""

from __future__ import annotations

import enum
import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Union


class GrammarError(Exception):
    """Raised when grammar source or a grammar object is rejected."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [Diagnostic("error", diagnostics)]
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int | None = None
    col: int | None = None

    def __str__(self):
        where = f"{self.line}:{self.col}: " if self.line is not None else ""
        return f"{where}{self.severity}: {self.message}"


@dataclass(frozen=True, slots=True, order=True)
class Terminal:
    char: str

    def __str__(self):
        return self.char

    def __repr__(self):
        return f"t({self.char!r})"


@dataclass(frozen=True, slots=True, order=True)
class Nonterminal:
    name: str

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"nt({self.name!r})"


Symbol = Union[Terminal, Nonterminal]


def t(char: str) -> Terminal:
    return Terminal(char)


def nt(name: str) -> Nonterminal:
    return Nonterminal(name)


class Kind(enum.Enum):
    Base = "Base"
    LeftProper = "LeftProper"  # <(..)   left context u
    LeftExtended = "LeftExtended"  # <=(..)  extended left context uw
    RightExtended = "RightExtended"  # >=(..)  extended right context wv
    RightProper = "RightProper"  # >(..)   right context v


CONTEXT_KINDS = (Kind.LeftProper, Kind.LeftExtended, Kind.RightExtended, Kind.RightProper)

_OPERATOR = {
    Kind.LeftProper: "<",
    Kind.LeftExtended: "<=",
    Kind.RightExtended: ">=",
    Kind.RightProper: ">",
}


@dataclass(frozen=True, slots=True)
class Conjunct:
    kind: Kind
    body: tuple = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))

    @property
    def is_base(self) -> bool:
        return self.kind is Kind.Base

    def __str__(self):
        text = format_body(self.body)
        if self.kind is Kind.Base:
            return text
        return f"{_OPERATOR[self.kind]}({text})"


def base(*body) -> Conjunct:
    return Conjunct(Kind.Base, tuple(body))


@dataclass(frozen=True, slots=True)
class Rule:
    head: Nonterminal
    conjuncts: tuple
    left_edge: bool = False
    right_edge: bool = False

    def __post_init__(self):
        if not isinstance(self.conjuncts, tuple):
            object.__setattr__(self, "conjuncts", tuple(self.conjuncts))

    @property
    def bases(self) -> tuple:
        return tuple(c for c in self.conjuncts if c.kind is Kind.Base)

    @property
    def contexts(self) -> tuple:
        return tuple(c for c in self.conjuncts if c.kind is not Kind.Base)

    def context_bodies(self, kind: Kind) -> tuple:
        return tuple(c.body for c in self.conjuncts if c.kind is kind)

    def symbols(self):
        for c in self.conjuncts:
            yield from c.body

    def __str__(self):
        parts = [str(c) for c in self.conjuncts]
        if self.left_edge:
            parts.append("<(eps)")
        if self.right_edge:
            parts.append(">(eps)")
        return f"{self.head} -> {' & '.join(parts)}"


@dataclass(frozen=True, eq=False)
class Grammar:
    alphabet: frozenset
    nonterminals: frozenset
    rules: tuple
    start: Nonterminal

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "rules", tuple(self.rules))

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return (
            self.start == other.start
            and self.alphabet == other.alphabet
            and self.nonterminals == other.nonterminals
            and Counter(self.rules) == Counter(other.rules)
        )

    def __hash__(self):
        return hash((self.start, self.alphabet, self.nonterminals, frozenset(self.rules)))

    def rules_for(self, head: Nonterminal) -> list:
        return [r for r in self.rules if r.head == head]

    def sorted_alphabet(self) -> list:
        return sorted(self.alphabet, key=lambda a: a.char)

    def sorted_nonterminals(self) -> list:
        """Start symbol first, then names in order of first appearance as a head."""
        order = [self.start]
        for r in self.rules:
            if r.head not in order:
                order.append(r.head)
        order += sorted((n for n in self.nonterminals if n not in order), key=lambda n: n.name)
        return order

    def replace(self, rules=None, nonterminals=None, start=None) -> "Grammar":
        rules = self.rules if rules is None else tuple(rules)
        if nonterminals is None:
            nonterminals = set(self.nonterminals)
            for r in rules:
                nonterminals.add(r.head)
                nonterminals.update(s for s in r.symbols() if isinstance(s, Nonterminal))
        return Grammar(self.alphabet, nonterminals, rules, start or self.start)

    def __str__(self):
        return pretty_print(self)


def format_symbol(s: Symbol) -> str:
    if isinstance(s, Nonterminal):
        return s.name
    if re.fullmatch(r"[a-z]", s.char):
        return s.char
    return "'" + s.char.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_body(body) -> str:
    if not body:
        return "eps"
    return " ".join(format_symbol(s) for s in body)


# --------------------------------------------------------------------------
# DSL lexer / parser

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<op><=|>=|<|>)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<amp>&)
  | (?P<bar>\|)
  | (?P<semi>;)
  | (?P<quoted>'(?:\\.|[^'\\\n])')
  | (?P<nonterm>_?[A-Z][A-Za-z0-9_]*|_[A-Za-z0-9_]+)
  | (?P<lower>[a-z][a-z0-9_]*)
    """,
    re.VERBOSE,
)

_KIND_OF_OP = {"<": Kind.LeftProper, "<=": Kind.LeftExtended, ">=": Kind.RightExtended, ">": Kind.RightProper}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str) -> list:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GrammarError([Diagnostic("error", f"unexpected character {text[pos]!r}", line, pos - line_start + 1)])
        kind, value = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "lower":
            if value in ("eps", "start", "alphabet", "nonterminals"):
                toks.append(_Tok("kw", value, line, col))
            elif re.fullmatch(r"[a-z]+", value):
                toks.extend(_Tok("term", ch, line, col + k) for k, ch in enumerate(value))
            else:
                raise GrammarError([Diagnostic("error", f"bad terminal run {value!r}", line, col)])
        elif kind == "quoted":
            ch = value[1:-1]
            toks.append(_Tok("term", ch[1] if ch.startswith("\\") else ch, line, col))
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, value, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text, allow_reserved):
        self.toks = _lex(text)
        self.pos = 0
        self.allow_reserved = allow_reserved

    def peek(self, offset=0) -> _Tok:
        return self.toks[min(self.pos + offset, len(self.toks) - 1)]

    def take(self, kind=None, text=None) -> _Tok:
        tok = self.peek()
        if (kind and tok.kind != kind) or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or tok.kind
            raise GrammarError([Diagnostic("error", f"expected {want}, found {got!r}", tok.line, tok.col)])
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise GrammarError([Diagnostic("error", message, tok.line, tok.col)])

    def nonterminal(self, tok) -> Nonterminal:
        if tok.text.startswith("_") and not self.allow_reserved:
            self.fail(f"names starting with '_' are reserved: {tok.text}", tok)
        return Nonterminal(tok.text)

    def statements(self):
        out = []
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "kw" and tok.text in ("start", "alphabet", "nonterminals"):
                self.pos += 1
                args = []
                while self.peek().kind != "semi":
                    a = self.take()
                    if tok.text == "alphabet" and a.kind != "term":
                        self.fail("alphabet expects terminals", a)
                    if tok.text != "alphabet" and a.kind != "nonterm":
                        self.fail(f"{tok.text} expects nonterminals", a)
                    args.append(a)
                self.take("semi")
                out.append((tok.text, tok, args))
            elif tok.kind == "nonterm":
                out.extend(self.rule())
            else:
                self.fail(f"unexpected {tok.text or tok.kind!r}")
        return out

    def rule(self):
        head_tok = self.take("nonterm")
        head = self.nonterminal(head_tok)
        self.take("arrow")
        alternatives = [self.alternative()]
        while self.peek().kind == "bar":
            self.pos += 1
            alternatives.append(self.alternative())
        self.take("semi")
        return [("rule", head_tok, (head, alt, tok)) for alt, tok in alternatives]

    def alternative(self):
        first = self.peek()
        conjuncts = []
        if self.peek().kind in ("amp", "semi", "bar"):
            # leading '&' form such as `S -> & <(A);` is reported as missing base below
            pass
        else:
            conjuncts.append(self.conjunct())
        while self.peek().kind == "amp":
            self.pos += 1
            conjuncts.append(self.conjunct())
        return conjuncts, first

    def conjunct(self):
        if self.peek().kind == "op":
            kind = _KIND_OF_OP[self.take("op").text]
            self.take("lpar")
            body = self.body()
            self.take("rpar")
            return Conjunct(kind, body)
        return Conjunct(Kind.Base, self.body())

    def body(self):
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "eps":
            self.pos += 1
            return ()
        out = []
        while self.peek().kind in ("term", "nonterm"):
            tok = self.take()
            out.append(Terminal(tok.text) if tok.kind == "term" else self.nonterminal(tok))
        if not out:
            self.fail("expected a symbol or eps")
        return tuple(out)


def lower_rule(head, conjuncts, left_edge=False, right_edge=False) -> Rule:
    """Turn empty-body context conjuncts into edge flags.

    ``<(eps)`` becomes ``left_edge``; ``<=(eps)`` becomes ``left_edge`` plus an
    empty base conjunct (``uw`` empty means both ``u`` and ``w`` are empty);
    the right-hand operators are symmetric.
    """
    kept = []
    extra_eps = False
    for c in conjuncts:
        if c.kind is Kind.Base or c.body:
            kept.append(c)
            continue
        if c.kind in (Kind.LeftProper, Kind.LeftExtended):
            left_edge = True
        else:
            right_edge = True
        if c.kind in (Kind.LeftExtended, Kind.RightExtended):
            extra_eps = True
    if extra_eps and Conjunct(Kind.Base, ()) not in kept:
        kept.append(Conjunct(Kind.Base, ()))
    return Rule(head, tuple(kept), left_edge, right_edge)


def parse_grammar(text: str, allow_reserved: bool = False) -> Grammar:
    """Parse DSL source into a Grammar.

    Raises GrammarError carrying positioned diagnostics on lexical errors,
    unknown symbols, rules without a base conjunct or a missing start symbol.
    ``allow_reserved`` admits generated ``_``-prefixed names, as emitted by
    the normal-form transformation.
    """
    p = _Parser(text, allow_reserved)
    statements = p.statements()
    alphabet, declared, rules, errors = set(), set(), [], []
    start = None
    for kind, tok, payload in statements:
        if kind == "alphabet":
            alphabet.update(Terminal(a.text) for a in payload)
        elif kind == "nonterminals":
            declared.update(p.nonterminal(a) for a in payload)
        elif kind == "start":
            if len(payload) != 1:
                errors.append(Diagnostic("error", "start expects exactly one nonterminal", tok.line, tok.col))
            else:
                start = p.nonterminal(payload[0])
        else:
            head, conjuncts, alt_tok = payload
            declared.add(head)
            if not any(c.kind is Kind.Base for c in conjuncts):
                errors.append(Diagnostic("error", f"rule for {head} has no base conjunct", alt_tok.line, alt_tok.col))
                continue
            rules.append(lower_rule(head, conjuncts))
    for r in rules:
        for s in r.symbols():
            if isinstance(s, Terminal):
                alphabet.add(s)
            elif s not in declared:
                errors.append(Diagnostic("error", f"unknown symbol {s} in rule for {r.head}"))
    if start is None:
        if not rules:
            errors.append(Diagnostic("error", "missing start declaration and no rules"))
        else:
            start = rules[0].head
    elif start not in declared:
        errors.append(Diagnostic("error", f"start symbol {start} is not declared"))
    if errors:
        raise GrammarError(errors)
    return Grammar(frozenset(alphabet), frozenset(declared), tuple(rules), start)


def load_grammar(path, allow_reserved: bool = False) -> Grammar:
    with open(path, encoding="utf-8") as f:
        return parse_grammar(f.read(), allow_reserved=allow_reserved)


# --------------------------------------------------------------------------
# validation


def productive_nonterminals(g: Grammar) -> set:
    """Nonterminals with at least one rule whose every referenced nonterminal is productive."""
    productive = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.head in productive:
                continue
            if all(s in productive for s in r.symbols() if isinstance(s, Nonterminal)):
                productive.add(r.head)
                changed = True
    return productive


def reachable_nonterminals(g: Grammar) -> set:
    seen, stack = {g.start}, [g.start]
    while stack:
        a = stack.pop()
        for r in g.rules_for(a):
            for s in r.symbols():
                if isinstance(s, Nonterminal) and s not in seen:
                    seen.add(s)
                    stack.append(s)
    return seen


def validate(g: Grammar) -> list:
    """Return diagnostics for ``g``; an empty list means well-formed.

    Errors: undeclared symbols, rules without a base conjunct, start symbol not
    declared, empty alphabet, name clashes. Warnings: unreachable and
    unproductive nonterminals.
    """
    out = []
    if not g.alphabet:
        out.append(Diagnostic("error", "alphabet is empty"))
    if g.start not in g.nonterminals:
        out.append(Diagnostic("error", f"start symbol {g.start} is not declared"))
    clash = {a.char for a in g.alphabet} & {n.name for n in g.nonterminals}
    for name in sorted(clash):
        out.append(Diagnostic("error", f"{name!r} is both a terminal and a nonterminal"))
    for r in g.rules:
        if r.head not in g.nonterminals:
            out.append(Diagnostic("error", f"undeclared nonterminal {r.head} (rule head)"))
        if not r.bases:
            out.append(Diagnostic("error", f"rule {r} has no base conjunct"))
        for s in r.symbols():
            if isinstance(s, Nonterminal) and s not in g.nonterminals:
                out.append(Diagnostic("error", f"undeclared nonterminal {s} in rule {r}"))
            elif isinstance(s, Terminal) and s not in g.alphabet:
                out.append(Diagnostic("error", f"undeclared terminal {s} in rule {r}"))
    productive = productive_nonterminals(g)
    reachable = reachable_nonterminals(g)
    for n in sorted(g.nonterminals, key=lambda n: n.name):
        if n not in reachable:
            out.append(Diagnostic("warning", f"unreachable nonterminal {n}"))
        if n not in productive:
            out.append(Diagnostic("warning", f"unproductive nonterminal {n}"))
    return out


def errors_of(diagnostics) -> list:
    return [d for d in diagnostics if d.severity == "error"]


# --------------------------------------------------------------------------
# printing and JSON


def pretty_print(g: Grammar) -> str:
    """Render ``g`` as DSL source that re-parses to an equal grammar."""
    if not g.alphabet:
        raise GrammarError("cannot print a grammar with an empty alphabet")
    lines = ["alphabet " + " ".join(format_symbol(a) for a in g.sorted_alphabet()) + ";"]
    heads = {r.head for r in g.rules}
    ruleless = [n for n in g.sorted_nonterminals() if n not in heads]
    if ruleless:
        lines.append("nonterminals " + " ".join(n.name for n in ruleless) + ";")
    lines.append(f"start {g.start};")
    for r in g.rules:
        lines.append(str(r) + ";")
    return "\n".join(lines) + "\n"


def _symbol_json(s):
    return s.name if isinstance(s, Nonterminal) else s.char


def grammar_to_json(g: Grammar) -> dict:
    return {
        "alphabet": [a.char for a in g.sorted_alphabet()],
        "nonterminals": [n.name for n in g.sorted_nonterminals()],
        "start": g.start.name,
        "rules": [
            {
                "head": r.head.name,
                "conjuncts": [{"kind": c.kind.value, "body": [_symbol_json(s) for s in c.body]} for c in r.conjuncts],
                "left_edge": r.left_edge,
                "right_edge": r.right_edge,
            }
            for r in g.rules
        ],
    }


def grammar_from_json(data) -> Grammar:
    if isinstance(data, str):
        data = json.loads(data)
    names = set(data.get("nonterminals", ())) | {r["head"] for r in data["rules"]} | {data["start"]}

    def sym(x):
        return Nonterminal(x) if x in names else Terminal(x)

    rules = [
        Rule(
            Nonterminal(r["head"]),
            tuple(Conjunct(Kind(c["kind"]), tuple(sym(x) for x in c["body"])) for c in r["conjuncts"]),
            bool(r.get("left_edge", False)),
            bool(r.get("right_edge", False)),
        )
        for r in data["rules"]
    ]
    return Grammar(
        frozenset(Terminal(a) for a in data["alphabet"]),
        frozenset(Nonterminal(n) for n in names),
        tuple(rules),
        Nonterminal(data["start"]),
    )


def make_grammar(rules: Iterable[Rule], start=None, alphabet=()) -> Grammar:
    """Build a grammar from rule objects, inferring alphabet and nonterminals."""
    rules = tuple(rules)
    letters = set(alphabet)
    names = set()
    for r in rules:
        names.add(r.head)
        for s in r.symbols():
            (letters if isinstance(s, Terminal) else names).add(s)
    start = start or rules[0].head
    names.add(start)
    return Grammar(frozenset(letters), frozenset(names), rules, start)
