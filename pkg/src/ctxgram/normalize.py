"""Transformation to the binary normal form.

Pipeline::

    pre_normalize -> eliminate_epsilon -> eliminate_null_contexts
                  -> eliminate_unit_conjuncts -> remove_useless

The result generates the language of the input grammar minus the empty
string. Rules of the normal form are

    A -> B1 C1 & ... & Bk Ck & contexts      (k >= 1)
    A -> a & contexts

with every context body a single nonterminal, and possibly the rule edge
flags ``left_edge`` / ``right_edge`` meaning "the substring starts at the
beginning / ends at the end of the input". The flags stand in for the null
context operators ``<(eps)`` and ``>(eps)``.

Generated nonterminals carry the reserved prefix ``_``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .grammar import Conjunct, Grammar, Kind, Nonterminal, Rule, Terminal, lower_rule

LEFT_KINDS = (Kind.LeftProper, Kind.LeftExtended)
RIGHT_KINDS = (Kind.RightExtended, Kind.RightProper)
_KIND_RANK = {Kind.Base: 0, Kind.LeftProper: 1, Kind.LeftExtended: 2, Kind.RightExtended: 3, Kind.RightProper: 4}


class NormalizationError(ValueError):
    pass


def _sym_key(s):
    return (0, s.char) if isinstance(s, Terminal) else (1, s.name)


def _names(ns):
    return sorted(ns, key=lambda n: n.name)


def build_rule(head, bases=(), contexts=(), left_edge=False, right_edge=False) -> Rule:
    """Rule from base bodies and ``(kind, nonterminal)`` contexts, duplicates removed."""
    conjuncts = []
    for body in bases:
        c = Conjunct(Kind.Base, tuple(body))
        if c not in conjuncts:
            conjuncts.append(c)
    ctx = []
    for kind, x in contexts:
        c = Conjunct(kind, (x,))
        if c not in ctx:
            ctx.append(c)
    ctx.sort(key=lambda c: (_KIND_RANK[c.kind], _sym_key(c.body[0])))
    return Rule(head, tuple(conjuncts + ctx), bool(left_edge), bool(right_edge))


def _dedupe(rules):
    seen, out = set(), []
    for r in rules:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


class _Fresh:
    def __init__(self, g: Grammar):
        self.used = {n.name for n in g.nonterminals}
        self.rules: list = []
        self.memo: dict = {}
        self.counter = 0

    def name(self, stem):
        if stem not in self.used:
            self.used.add(stem)
            return Nonterminal(stem)
        while True:
            self.counter += 1
            cand = f"{stem}{self.counter}"
            if cand not in self.used:
                self.used.add(cand)
                return Nonterminal(cand)

    def wrap(self, s):
        """Nonterminal standing for the single symbol ``s``."""
        if isinstance(s, Nonterminal):
            return s
        key = ("t", s)
        if key not in self.memo:
            stem = f"_X{s.char}" if s.char.isalnum() and s.char.isascii() else f"_X{ord(s.char)}"
            self.memo[key] = x = self.name(stem)
            self.rules.append(Rule(x, (Conjunct(Kind.Base, (s,)),)))
        return self.memo[key]

    def eps(self):
        if "eps" not in self.memo:
            self.memo["eps"] = x = self.name("_Eps")
            self.rules.append(Rule(x, (Conjunct(Kind.Base, ()),)))
        return self.memo["eps"]

    def seq(self, body):
        """Nonterminal generating exactly the concatenation ``body``."""
        body = tuple(body)
        if not body:
            return self.eps()
        if len(body) == 1:
            return self.wrap(body[0])
        if body not in self.memo:
            self.memo[body] = x = self.name("_P")
            self.rules.append(Rule(x, (Conjunct(Kind.Base, self.pair(body)),)))
        return self.memo[body]

    def pair(self, body):
        """Two-nonterminal split of a body of length >= 2, right-nested."""
        return (self.wrap(body[0]), self.wrap(body[1]) if len(body) == 2 else self.seq(body[1:]))


def pre_normal_kind(r: Rule):
    """Classify ``r`` as 'a', 'BC', 'eps', 'conj' (unit/context form) or None."""
    bases, ctx = r.bases, r.contexts
    plain = len(r.conjuncts) == 1 and not r.left_edge and not r.right_edge
    if plain:
        body = bases[0].body
        if not body:
            return "eps"
        if len(body) == 1 and isinstance(body[0], Terminal):
            return "a"
        if len(body) == 2 and all(isinstance(s, Nonterminal) for s in body):
            return "BC"
    single_nt = lambda c: len(c.body) == 1 and isinstance(c.body[0], Nonterminal)
    if bases and all(single_nt(c) for c in bases) and all(single_nt(c) for c in ctx):
        return "conj"
    return None


def is_pre_normal(g: Grammar) -> bool:
    return all(pre_normal_kind(r) is not None for r in g.rules)


def pre_normalize(g: Grammar) -> Grammar:
    """Rewrite every rule into one of the forms ``A -> a``, ``A -> BC``,
    ``A -> B1 & ... & Bk & <(D) & <=(E) & >=(F) & >(H)`` or ``A -> eps``.

    Terminals inside longer bodies are wrapped into ``_Xa -> a``, long bodies
    are split through fresh ``_P`` nonterminals, and composite or terminal
    context bodies are named by fresh nonterminals. An empty base conjunct
    next to other conjuncts becomes ``_Eps`` with the rule ``_Eps -> eps``.
    """
    fresh = _Fresh(g)
    out = []
    for r in g.rules:
        r = lower_rule(r.head, r.conjuncts, r.left_edge, r.right_edge)
        kind = pre_normal_kind(r)
        if kind is not None:
            out.append(r)
            continue
        if len(r.conjuncts) == 1 and not r.left_edge and not r.right_edge:
            # single base conjunct of length >= 2 containing a terminal, or longer than 2
            out.append(Rule(r.head, (Conjunct(Kind.Base, fresh.pair(r.conjuncts[0].body)),)))
            continue
        bases = [(fresh.seq(c.body),) for c in r.bases]
        contexts = [(c.kind, fresh.seq(c.body)) for c in r.contexts]
        out.append(build_rule(r.head, bases, contexts, r.left_edge, r.right_edge))
    return g.replace(rules=_dedupe(out + fresh.rules))


# --------------------------------------------------------------------------
# nullable sets


@dataclass(frozen=True)
class NullableTriple:
    """``A`` generates the empty string at a position whose whole prefix is
    generated by every member of ``U`` and whose whole suffix is generated by
    every member of ``V`` (in left context equal to that prefix).
    ``left_edge``/``right_edge`` further demand the position be 0 / n."""

    A: Nonterminal
    U: frozenset = frozenset()
    V: frozenset = frozenset()
    left_edge: bool = False
    right_edge: bool = False

    def subsumes(self, other) -> bool:
        return (
            self.A == other.A
            and self.U <= other.U
            and self.V <= other.V
            and self.left_edge <= other.left_edge
            and self.right_edge <= other.right_edge
        )

    def to_json(self) -> dict:
        return {
            "U": [n.name for n in _names(self.U)],
            "A": self.A.name,
            "V": [n.name for n in _names(self.V)],
            "left_edge": self.left_edge,
            "right_edge": self.right_edge,
        }

    def __str__(self):
        fmt = lambda s: "{" + ", ".join(n.name for n in _names(s)) + "}"
        flags = "".join([" <eps" if self.left_edge else "", " >eps" if self.right_edge else ""])
        return f"({fmt(self.U)}, {self.A}, {fmt(self.V)}{flags})"


@dataclass(frozen=True)
class NullableLeftEpsEntry:
    """``A`` generates the empty string at position 0 provided every member of
    ``V`` generates the whole input (and, with ``right_edge``, the input is empty)."""

    A: Nonterminal
    V: frozenset = frozenset()
    right_edge: bool = False

    def subsumes(self, other) -> bool:
        return self.A == other.A and self.V <= other.V and self.right_edge <= other.right_edge

    def to_json(self) -> dict:
        return {"A": self.A.name, "V": [n.name for n in _names(self.V)], "right_edge": self.right_edge}

    def __str__(self):
        flag = " >eps" if self.right_edge else ""
        return f"({self.A}, {{{', '.join(n.name for n in _names(self.V))}}}{flag})"


@dataclass(frozen=True)
class NullableRightEpsEntry:
    """Mirror image of :class:`NullableLeftEpsEntry` for position n."""

    A: Nonterminal
    U: frozenset = frozenset()
    left_edge: bool = False

    def subsumes(self, other) -> bool:
        return self.A == other.A and self.U <= other.U and self.left_edge <= other.left_edge

    def to_json(self) -> dict:
        return {"U": [n.name for n in _names(self.U)], "A": self.A.name, "left_edge": self.left_edge}

    def __str__(self):
        flag = "<eps " if self.left_edge else ""
        return f"({flag}{{{', '.join(n.name for n in _names(self.U))}}}, {self.A})"


def _minimal(items) -> set:
    """Drop every element subsumed by a different element."""
    items = set(items)
    return {x for x in items if not any(y != x and y.subsumes(x) for y in items)}


def _require_single_contexts(g: Grammar):
    for r in g.rules:
        for c in r.contexts:
            if len(c.body) != 1 or not isinstance(c.body[0], Nonterminal):
                raise NormalizationError(f"context bodies must be single nonterminals (pre_normalize first): {r}")


def _star(body, by_head):
    """Accumulated (U, V, left_edge, right_edge) choices for an all-nullable body."""
    acc = {(frozenset(), frozenset(), False, False)}
    for s in body:
        if isinstance(s, Terminal):
            return set()
        options = by_head.get(s, ())
        acc = {(u | t.U, v | t.V, le or t.left_edge, re or t.right_edge) for (u, v, le, re) in acc for t in options}
        if not acc:
            return acc
    return acc


def nullable_step(g: Grammar, current, prune=True) -> set:
    """One application of the nullable-triple operator to ``current``."""
    by_head: dict = {}
    for t in current:
        by_head.setdefault(t.A, []).append(t)
    out = set()
    for r in g.rules:
        u0 = frozenset(c.body[0] for c in r.contexts if c.kind in LEFT_KINDS)
        v0 = frozenset(c.body[0] for c in r.contexts if c.kind in RIGHT_KINDS)
        acc = {(u0, v0, r.left_edge, r.right_edge)}
        for c in r.bases:
            choices = _star(c.body, by_head)
            acc = {(u | cu, v | cv, le or cle, re or cre) for (u, v, le, re) in acc for (cu, cv, cle, cre) in choices}
            if not acc:
                break
        out.update(NullableTriple(r.head, u, v, le, re) for (u, v, le, re) in acc)
    return _minimal(out) if prune else out


def nullable_stages(g: Grammar, prune=True) -> list:
    """The ascending sequence Nullable_0 = {}, Nullable_1, ... up to the fixpoint."""
    _require_single_contexts(g)
    stages = [set()]
    while True:
        nxt = nullable_step(g, stages[-1], prune)
        if nxt == stages[-1]:
            return stages
        stages.append(nxt)


def compute_nullable(g: Grammar, prune=True) -> set:
    """Least fixpoint of nullable triples for a grammar whose context bodies
    are single nonterminals (base conjuncts may be arbitrary)."""
    return nullable_stages(g, prune)[-1]


def compute_nullable_left_eps(g: Grammar, nullable=None, prune=True) -> set:
    """Pairs describing generation of the empty string at position 0."""
    if nullable is None:
        nullable = compute_nullable(g, prune)
    current: set = set()
    while True:
        by_head: dict = {}
        for e in current:
            by_head.setdefault(e.A, []).append(e)
        nxt = set()
        for t in nullable:
            combos = [by_head.get(j, []) for j in _names(t.U)]
            for combo in itertools.product(*combos):
                v = t.V.union(*(e.V for e in combo))
                re = t.right_edge or any(e.right_edge for e in combo)
                nxt.add(NullableLeftEpsEntry(t.A, v, re))
        if prune:
            nxt = _minimal(nxt)
        if nxt == current:
            return current
        current = nxt


def compute_nullable_right_eps(g: Grammar, nullable=None, prune=True) -> set:
    """Pairs describing generation of the empty string at position n."""
    if nullable is None:
        nullable = compute_nullable(g, prune)
    current: set = set()
    while True:
        by_head: dict = {}
        for e in current:
            by_head.setdefault(e.A, []).append(e)
        nxt = set()
        for t in nullable:
            combos = [by_head.get(k, []) for k in _names(t.V)]
            for combo in itertools.product(*combos):
                u = t.U.union(*(e.U for e in combo))
                le = t.left_edge or any(e.left_edge for e in combo)
                nxt.add(NullableRightEpsEntry(t.A, u, le))
        if prune:
            nxt = _minimal(nxt)
        if nxt == current:
            return current
        current = nxt


# --------------------------------------------------------------------------
# the three stages


def _sorted_by_head(entries):
    by_head: dict = {}
    for e in sorted(entries, key=entry_key):
        by_head.setdefault(e.A, []).append(e)
    return by_head


def entry_key(e):
    """Deterministic sort key for nullable triples and entries."""
    fields = [e.A.name]
    for attr in ("U", "V"):
        if hasattr(e, attr):
            fields.append(tuple(n.name for n in _names(getattr(e, attr))))
    fields.append(tuple(getattr(e, f) for f in ("left_edge", "right_edge") if hasattr(e, f)))
    return tuple(fields)


def eliminate_epsilon(g: Grammar, prune=True) -> Grammar:
    """Remove every rule ``A -> eps`` and add companion rules that simulate
    the removed empty substrings with context conjuncts and edge flags.

    The input must be pre-normalized. The result generates every non-empty
    substring in every context exactly as before and nothing empty.
    """
    if not is_pre_normal(g):
        raise NormalizationError("eliminate_epsilon expects a pre-normalized grammar")
    nullable = compute_nullable(g, prune)
    left_eps = compute_nullable_left_eps(g, nullable, prune)
    right_eps = compute_nullable_right_eps(g, nullable, prune)
    triples = _sorted_by_head(nullable)
    left_by = _sorted_by_head(left_eps)
    right_by = _sorted_by_head(right_eps)

    out = []
    for r in g.rules:
        kind = pre_normal_kind(r)
        if kind == "eps":
            continue
        out.append(r)
        if kind == "BC":
            b, c = r.bases[0].body
            for t in triples.get(c, ()):
                if not t.left_edge:
                    ctx = [(Kind.LeftExtended, j) for j in t.U] + [(Kind.RightProper, k) for k in t.V]
                    out.append(build_rule(r.head, [(b,)], ctx, False, t.right_edge))
            for e in right_by.get(c, ()):
                if not e.left_edge:
                    out.append(build_rule(r.head, [(b,)], [(Kind.LeftExtended, j) for j in e.U], False, True))
            for t in triples.get(b, ()):
                if not t.right_edge:
                    ctx = [(Kind.LeftProper, j) for j in t.U] + [(Kind.RightExtended, k) for k in t.V]
                    out.append(build_rule(r.head, [(c,)], ctx, t.left_edge, False))
            for e in left_by.get(b, ()):
                if not e.right_edge:
                    out.append(build_rule(r.head, [(c,)], [(Kind.RightExtended, k) for k in e.V], True, False))
        elif kind == "conj":
            out.extend(_conj_companions(r, left_by, right_by))
    return g.replace(rules=_dedupe(out))


def _conj_companions(r: Rule, left_by, right_by):
    bases = [c.body for c in r.bases]
    ds = [c.body[0] for c in r.contexts if c.kind is Kind.LeftProper]
    es = [c.body[0] for c in r.contexts if c.kind is Kind.LeftExtended]
    fs = [c.body[0] for c in r.contexts if c.kind is Kind.RightExtended]
    hs = [c.body[0] for c in r.contexts if c.kind is Kind.RightProper]
    left_combos = right_combos = [()]
    if ds:
        left_combos = list(itertools.product(*[[e for e in left_by.get(d, ()) if not e.right_edge] for d in ds]))
    if hs:
        right_combos = list(itertools.product(*[[e for e in right_by.get(h, ()) if not e.left_edge] for h in hs]))
    out = []
    if ds:
        # u is empty: every D generates eps at position 0
        for combo in left_combos:
            ks = set().union(*(e.V for e in combo))
            ctx = [(Kind.RightExtended, k) for k in _names(ks)]
            ctx += [(Kind.RightExtended, f) for f in fs] + [(Kind.RightProper, h) for h in hs]
            out.append(build_rule(r.head, bases + [(e,) for e in es], ctx, True, r.right_edge))
    if hs:
        # v is empty: every H generates eps at position n
        for combo in right_combos:
            ks = set().union(*(e.U for e in combo))
            ctx = [(Kind.LeftProper, d) for d in ds] + [(Kind.LeftExtended, e) for e in es]
            ctx += [(Kind.LeftExtended, k) for k in _names(ks)]
            out.append(build_rule(r.head, bases + [(f,) for f in fs], ctx, r.left_edge, True))
    if ds and hs:
        for lc in left_combos:
            for rc in right_combos:
                ks = set().union(*(e.V for e in lc), *(e.U for e in rc))
                extra = [(e,) for e in es] + [(f,) for f in fs] + [(k,) for k in _names(ks)]
                out.append(build_rule(r.head, bases + extra, (), True, True))
    return out


_U_GADGET, _V_GADGET = "_U", "_V"


def eliminate_null_contexts(g: Grammar, mode: str = "flags") -> Grammar:
    """Represent every boundary requirement uniformly.

    ``mode="flags"`` (default) lowers any remaining ``<(eps)``/``>(eps)``
    conjuncts into the rule edge flags, which the parser checks directly.
    ``mode="gadget"`` instead replaces the flags by base conjuncts ``_U``/``_V``
    generating all non-empty prefixes/suffixes of the input::

        _U -> _U a | a & <=(_XL);  _XL -> a       (for every letter a)
    """
    rules = [lower_rule(r.head, r.conjuncts, r.left_edge, r.right_edge) for r in g.rules]
    for r in rules:
        if any(c.is_base and not c.body for c in r.conjuncts):
            raise NormalizationError(f"grammar is not epsilon-free: {r}")
    if mode == "flags":
        return g.replace(rules=_dedupe(rules))
    if mode != "gadget":
        raise ValueError(f"unknown mode {mode!r}")
    if not any(r.left_edge or r.right_edge for r in rules):
        return g.replace(rules=_dedupe(rules))
    fresh = _Fresh(g)
    u, v = fresh.name(_U_GADGET), fresh.name(_V_GADGET)
    xl, xr = fresh.name("_XL"), fresh.name("_XR")
    out = []
    for r in rules:
        extra = ([Conjunct(Kind.Base, (u,))] if r.left_edge else []) + ([Conjunct(Kind.Base, (v,))] if r.right_edge else [])
        out.append(Rule(r.head, r.conjuncts + tuple(extra)))
    for a in sorted(g.alphabet, key=lambda a: a.char):
        xa = fresh.wrap(a)
        out += [
            Rule(u, (Conjunct(Kind.Base, (u, xa)),)),
            Rule(u, (Conjunct(Kind.Base, (a,)), Conjunct(Kind.LeftExtended, (xl,)))),
            Rule(xl, (Conjunct(Kind.Base, (a,)),)),
            Rule(v, (Conjunct(Kind.Base, (xa, v)),)),
            Rule(v, (Conjunct(Kind.Base, (a,)), Conjunct(Kind.RightExtended, (xr,)))),
            Rule(xr, (Conjunct(Kind.Base, (a,)),)),
        ]
    return g.replace(rules=_dedupe(out + fresh.rules))


def _atoms(r: Rule):
    atoms, units = set(), []
    for c in r.conjuncts:
        if c.is_base:
            if len(c.body) == 1 and isinstance(c.body[0], Nonterminal):
                units.append(c.body[0])
            elif len(c.body) == 1:
                atoms.add(("t", c.body[0]))
            elif len(c.body) == 2 and all(isinstance(s, Nonterminal) for s in c.body):
                atoms.add(("p", c.body))
            else:
                raise NormalizationError(f"unexpected base conjunct in {r}")
        else:
            if len(c.body) != 1 or not isinstance(c.body[0], Nonterminal):
                raise NormalizationError(f"unexpected context conjunct in {r}")
            atoms.add(("c", c.kind, c.body[0]))
    if r.left_edge:
        atoms.add(("le",))
    if r.right_edge:
        atoms.add(("re",))
    return frozenset(atoms), units


def _satisfiable(atoms) -> bool:
    terms = {a[1] for a in atoms if a[0] == "t"}
    pairs = any(a[0] == "p" for a in atoms)
    return len(terms) <= 1 and not (terms and pairs)


def _atom_key(a):
    if a[0] == "t":
        return (0, a[1].char)
    if a[0] == "p":
        return (1, a[1][0].name, a[1][1].name)
    if a[0] == "c":
        return (2, _KIND_RANK[a[1]], a[2].name)
    return (3, a[0])


def _rule_from_atoms(head, atoms) -> Rule:
    ordered = sorted(atoms, key=_atom_key)
    bases = [(a[1],) if a[0] == "t" else a[1] for a in ordered if a[0] in ("t", "p")]
    contexts = [(a[1], a[2]) for a in ordered if a[0] == "c"]
    return build_rule(head, bases, contexts, ("le",) in atoms, ("re",) in atoms)


def eliminate_unit_conjuncts(g: Grammar) -> Grammar:
    """Substitute the rules of ``B`` for every unit base conjunct ``B``.

    Computed as a closure: the expansions of ``A`` are all unit-free conjunct
    sets obtained from a rule of ``A`` by replacing each unit ``B`` with an
    expansion of ``B``. Conjunct sets are canonical (unordered, deduplicated),
    a set implied by a smaller one is discarded (self-units vanish this way),
    and sets mixing a terminal with a pair, or two different terminals, are
    dropped as unsatisfiable in an epsilon-free grammar. The conjunct universe
    is finite, so the closure terminates; its size is exponential in the worst
    case.
    """
    parsed = [(r.head, *_atoms(r)) for r in g.rules]
    exp: dict = {}

    def insert(head, cand) -> bool:
        current = exp.setdefault(head, set())
        if any(x <= cand for x in current):
            return False
        current.difference_update({x for x in current if cand <= x})
        current.add(cand)
        return True

    changed = True
    while changed:
        changed = False
        for head, atoms, units in parsed:
            pools = [sorted(exp.get(b, ()), key=lambda s: sorted(map(_atom_key, s))) for b in units]
            for combo in itertools.product(*pools):
                cand = atoms.union(*combo)
                if _satisfiable(cand) and insert(head, cand):
                    changed = True
    heads = []
    for head, _, _ in parsed:
        if head not in heads:
            heads.append(head)
    out = []
    for head in heads:
        for atoms in sorted(exp.get(head, ()), key=lambda s: sorted(map(_atom_key, s))):
            out.append(_rule_from_atoms(head, atoms))
    return g.replace(rules=out)


def lift_terminals(g: Grammar) -> Grammar:
    """Wrap terminals that appear inside two-symbol base conjuncts."""
    fresh = _Fresh(g)
    out = []
    for r in g.rules:
        conj = tuple(
            Conjunct(Kind.Base, tuple(fresh.wrap(s) for s in c.body)) if c.is_base and len(c.body) == 2 else c
            for c in r.conjuncts
        )
        out.append(Rule(r.head, conj, r.left_edge, r.right_edge))
    return g.replace(rules=_dedupe(out + fresh.rules))


def remove_useless(g: Grammar) -> Grammar:
    """Drop rules that can never fire and nonterminals unreachable from the start."""
    productive = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.head not in productive and all(
                s in productive for s in r.symbols() if isinstance(s, Nonterminal)
            ):
                productive.add(r.head)
                changed = True
    rules = [r for r in g.rules if all(s in productive for s in r.symbols() if isinstance(s, Nonterminal))]
    reach, stack = {g.start}, [g.start]
    while stack:
        a = stack.pop()
        for r in rules:
            if r.head == a:
                for s in r.symbols():
                    if isinstance(s, Nonterminal) and s not in reach:
                        reach.add(s)
                        stack.append(s)
    rules = [r for r in rules if r.head in reach]
    return Grammar(g.alphabet, frozenset(reach) | {g.start}, tuple(rules), g.start)


def is_binary_normal_form(g: Grammar) -> bool:
    return not shape_violations(g)


def shape_violations(g: Grammar) -> list:
    """Rules that do not match either normal-form shape."""
    bad = []
    for r in g.rules:
        bases = r.bases
        ok = bool(bases)
        if ok and len(bases[0].body) == 1 and isinstance(bases[0].body[0], Terminal):
            ok = len(bases) == 1
        elif ok:
            ok = all(len(c.body) == 2 and all(isinstance(s, Nonterminal) for s in c.body) for c in bases)
        ok = ok and all(len(c.body) == 1 and isinstance(c.body[0], Nonterminal) for c in r.contexts)
        if not ok:
            bad.append(r)
    return bad


@dataclass
class NormalizationReport:
    grammar: Grammar
    stages: list = field(default_factory=list)  # (name, Grammar)
    nullable: set = field(default_factory=set)
    nullable_left_eps: set = field(default_factory=set)
    nullable_right_eps: set = field(default_factory=set)

    def rule_counts(self) -> list:
        return [(name, len(g.rules)) for name, g in self.stages]


def normalize(g: Grammar, prune=True, mode="flags") -> NormalizationReport:
    """Run the whole pipeline and keep every intermediate grammar."""
    stages = [("input", g)]
    pre = pre_normalize(g)
    stages.append(("pre_normalize", pre))
    nullable = compute_nullable(pre, prune)
    eps_free = eliminate_epsilon(pre, prune)
    stages.append(("eliminate_epsilon", eps_free))
    edged = eliminate_null_contexts(eps_free, mode)
    stages.append(("eliminate_null_contexts", edged))
    unit_free = eliminate_unit_conjuncts(edged)
    stages.append(("eliminate_unit_conjuncts", unit_free))
    final = remove_useless(lift_terminals(unit_free))
    stages.append(("remove_useless", final))
    if not is_binary_normal_form(final):
        raise NormalizationError("internal error: result is not in binary normal form")
    return NormalizationReport(
        final,
        stages,
        nullable,
        compute_nullable_left_eps(pre, nullable, prune),
        compute_nullable_right_eps(pre, nullable, prune),
    )


def to_binary_normal_form(g: Grammar, prune=True, mode="flags") -> Grammar:
    """Equivalent grammar in binary normal form, with the empty string removed."""
    return normalize(g, prune, mode).grammar
