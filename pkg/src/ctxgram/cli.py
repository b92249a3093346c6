"""Command-line front end: ``ctxgram check|parse|normalize|enumerate|nullable``.

Exit codes: 0 accept/ok, 1 reject or diagnostic error, 2 usage or I/O error,
3 the reference recognizer and the tabular parser disagree.

GRAMMAR is a ``.2cg`` path or a corpus entry id; a unique id prefix such as
``ex1`` is accepted too.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus
from .grammar import Grammar, GrammarError, errors_of, grammar_to_json, parse_grammar, pretty_print, validate
from .normalize import (
    NormalizationError,
    compute_nullable,
    compute_nullable_left_eps,
    compute_nullable_right_eps,
    entry_key,
    normalize,
    pre_normalize,
)
from .oracle import Item, derive_all, enumerate_language
from .parser import ParseError, extract_proof, parse_table

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3
EMPTY_ALPHABET = "alphabet is empty"


class UsageError(Exception):
    pass


class _Style:
    def __init__(self, stream):
        flag = os.environ.get("CTXGRAM_COLOR")
        self.on = flag == "1" if flag in ("0", "1") else stream.isatty()

    def paint(self, text: str, code: str) -> str:
        return f"\033[{code}m{text}\033[0m" if self.on else text

    def verdict(self, accepted: bool) -> str:
        return self.paint("accept", "32") if accepted else self.paint("reject", "31")

    def diagnostic(self, d) -> str:
        return self.paint(str(d), "31" if d.severity == "error" else "33")


# --------------------------------------------------------------------------
# argument handling


def resolve_grammar(ref: str) -> tuple:
    """Return ``(grammar, label)`` for a path or corpus id."""
    path = Path(ref)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise UsageError(f"cannot read {ref}: {e}") from None
        return parse_grammar(text, allow_reserved=True), ref
    known = corpus.ids()
    matches = [ref] if ref in known else [i for i in known if i.startswith(ref + "-") or i.startswith(ref)]
    if len(matches) == 1:
        return corpus.load(matches[0], verify=False).grammar, matches[0]
    if len(matches) > 1:
        raise UsageError(f"ambiguous corpus id {ref!r}: {', '.join(matches)}")
    raise UsageError(f"no such grammar file or corpus entry: {ref}")


def read_input(arg: str) -> str:
    if arg.startswith("@"):
        try:
            text = Path(arg[1:]).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise UsageError(f"cannot read input file {arg[1:]}: {e}") from None
        return text.rstrip("\r\n")
    return arg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ctxgram", description="Grammars with contexts: check, parse, normalize.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text, formats=("text", "json")):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("grammar", metavar="GRAMMAR", help=".2cg file or corpus id")
        p.add_argument("--format", choices=formats, default="text")
        return p

    add("check", "validate a grammar; diagnostics go to standard error")

    p = add("parse", "decide membership of one input string", ("text", "json", "dot"))
    p.add_argument("--input", required=True, metavar="W", help="input string, or @FILE to read it from a file")
    p.add_argument("--oracle", action="store_true", help="use the reference recognizer on the original grammar")
    p.add_argument("--compare", action="store_true", help="run both recognizers; exit 3 if they disagree")
    p.add_argument("--table", action="store_true", help="print the parse table (or the item set with --oracle)")
    p.add_argument("--proof", action="store_true", help="print a proof tree of the start symbol")

    p = add("normalize", "convert to binary normal form and report every stage")
    p.add_argument("-o", "--out", metavar="FILE", help="write the normal form here instead of standard output")
    p.add_argument("--nullable", action="store_true", help="include the nullable sets in the report")
    p.add_argument("--mode", choices=("flags", "gadget"), default="flags", help="how null contexts are removed")
    p.add_argument("--no-prune", action="store_true", help="keep subsumed nullable triples")

    p = add("enumerate", "list accepted strings up to a length bound (reference recognizer)")
    p.add_argument("--max-len", type=int, required=True, metavar="N")

    p = add("nullable", "print the sets describing where nonterminals generate the empty string")
    p.add_argument("--no-prune", action="store_true", help="keep subsumed nullable triples")
    return ap


# --------------------------------------------------------------------------
# commands


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=1) + "\n")


def _render_grammar(g: Grammar) -> str:
    if g.alphabet:
        return pretty_print(g)
    return f"# empty alphabet\nnonterminals {' '.join(n.name for n in g.sorted_nonterminals())};\nstart {g.start};\n"


def cmd_check(args, out, err, style) -> int:
    g, _ = resolve_grammar(args.grammar)
    diags = validate(g)
    for d in diags:
        err.write(style.diagnostic(d) + "\n")
    if args.format == "json":
        _emit_json({"diagnostics": [{"severity": d.severity, "message": d.message} for d in diags]}, out)
    return EXIT_REJECT if errors_of(diags) else EXIT_OK


def _proof_text(node, w, depth=0) -> list:
    lines = ["  " * depth + node.label(w) + ("" if node.is_axiom else f"   by {node.rule}")]
    for c in node.children:
        lines.extend(_proof_text(c, w, depth + 1))
    for c in node.context_children:
        lines.extend("  " * (depth + 1) + "ctx " + line.lstrip() if k == 0 else line
                     for k, line in enumerate(_proof_text(c, w, depth + 1)))
    return lines


def cmd_parse(args, out, err, style) -> int:
    g, _ = resolve_grammar(args.grammar)
    errs = errors_of(validate(g))
    if errs:
        for d in errs:
            err.write(style.diagnostic(d) + "\n")
        return EXIT_REJECT
    w = read_input(args.input)
    if not w and not args.oracle:
        raise UsageError("empty input: the normal form cannot represent the empty string; use --oracle")
    if args.format == "dot" and not args.proof:
        raise UsageError("--format dot needs --proof")

    use_oracle = args.oracle or args.compare
    use_parser = (not args.oracle or args.compare) and bool(w)
    result = {"input": w}
    items = table = None
    if use_oracle:
        items = derive_all(g, w)
        result["oracle"] = items.has(g.start, 0, len(w))
    if use_parser:
        nf = normalize(g).grammar
        if nf.rules:
            table = parse_table(nf, w)
            result["parser"] = table.accepts()
            result["passes"] = table.passes
        else:
            result["parser"] = False
    accepted = result["oracle"] if use_oracle else result["parser"]
    diverged = use_oracle and use_parser and result["oracle"] != result["parser"]
    result["accepted"] = accepted

    proof = None
    if args.proof and accepted:
        if items is not None:
            proof = items.proof(Item(g.start, 0, len(w)))
        else:
            proof = extract_proof(table, table.grammar.start, 0, len(w))

    if args.format == "dot":
        if proof is not None:
            out.write(proof.to_dot(w))
    elif args.format == "json":
        if args.table:
            result["table"] = items.to_json() if args.oracle else (table.to_json() if table else None)
        if args.proof:
            result["proof"] = proof.to_json() if proof else None
        if args.compare:
            result["agree"] = not diverged
        _emit_json(result, out)
    else:
        line = style.verdict(accepted)
        if args.compare:
            line += " (recognizers disagree)" if diverged else " (reference and tabular parser agree)"
        out.write(line + "\n")
        if args.table:
            if args.oracle:
                for it in sorted(items.nonterminal_items(), key=lambda it: (it.j - it.i, it.i, str(it.symbol))):
                    out.write(f"{it}\n")
            elif table is not None:
                out.write(table.format() + "\n")
        if proof is not None:
            out.write("\n".join(_proof_text(proof, w)) + "\n")
    if diverged:
        err.write(style.paint(f"divergence on {w!r}: reference says {result['oracle']}, "
                              f"tabular parser says {result['parser']}", "31") + "\n")
        return EXIT_DIVERGENCE
    return EXIT_OK if accepted else EXIT_REJECT


def _nullable_report(g: Grammar, prune: bool) -> dict:
    """Nullable sets of ``g`` itself when its contexts allow it, else of its pre-normal form."""
    try:
        nullable = compute_nullable(g, prune)
    except NormalizationError:
        g = pre_normalize(g)
        nullable = compute_nullable(g, prune)
    return {
        "nullable": sorted(nullable, key=entry_key),
        "nullable_left_eps": sorted(compute_nullable_left_eps(g, nullable, prune), key=entry_key),
        "nullable_right_eps": sorted(compute_nullable_right_eps(g, nullable, prune), key=entry_key),
    }


def _nullable_lines(sets: dict) -> list:
    lines = []
    for name, entries in sets.items():
        lines.append(f"{name}: {len(entries)}")
        lines.extend(f"  {e}" for e in entries)
    return lines


def cmd_normalize(args, out, err, style) -> int:
    g, _ = resolve_grammar(args.grammar)
    diags = validate(g)
    # normalization does not need a non-empty alphabet
    errs = [d for d in errors_of(diags) if d.message != EMPTY_ALPHABET]
    if errs:
        for d in errs:
            err.write(style.diagnostic(d) + "\n")
        return EXIT_REJECT
    prune = not args.no_prune
    report = normalize(g, prune=prune, mode=args.mode)
    nf = report.grammar
    has_eps = derive_all(g, "").has(g.start, 0, 0)
    warnings = []
    if has_eps:
        warnings.append("the empty string is in the language; the normal form drops it")
    if not nf.rules:
        warnings.append("normal form has no rules: no non-empty string is accepted")
    counts = report.rule_counts()
    peak = max(c for _, c in counts)
    if counts[0][1] and peak > 4 * counts[0][1]:
        warnings.append(f"rule count grew from {counts[0][1]} to {peak}")

    if args.format == "json":
        payload = {
            "grammar": grammar_to_json(nf),
            "stages": [{"stage": name, "rules": c} for name, c in counts],
            "empty_string_accepted": has_eps,
            "warnings": warnings,
        }
        if args.nullable:
            sets = _nullable_report(g, prune)
            payload["nullable"] = {k: [e.to_json() for e in v] for k, v in sets.items()}
        text = json.dumps(payload, indent=1) + "\n"
        report_lines = []
    else:
        text = _render_grammar(nf)
        report_lines = [f"{name}: {c} rules" for name, c in counts]
        if counts[0][1]:
            report_lines.append(f"growth: peak {peak} rules, {peak / counts[0][1]:.1f}x the input")
        report_lines.append(f"empty string: {'accepted' if has_eps else 'rejected'} by the original grammar")
        if args.nullable:
            report_lines.extend(_nullable_lines(_nullable_report(g, prune)))

    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot write {args.out}: {e}") from None
        report_stream = out
    else:
        out.write(text)
        report_stream = err
    for line in report_lines:
        report_stream.write(line + "\n")
    for msg in warnings:
        err.write(style.paint(f"warning: {msg}", "33") + "\n")
    return EXIT_OK


def cmd_enumerate(args, out, err, style) -> int:
    if args.max_len < 0:
        raise UsageError("--max-len must be non-negative")
    g, _ = resolve_grammar(args.grammar)
    errs = errors_of(validate(g))
    if errs:
        for d in errs:
            err.write(style.diagnostic(d) + "\n")
        return EXIT_REJECT
    found = enumerate_language(g, args.max_len)
    if args.format == "json":
        _emit_json({"max_len": args.max_len, "strings": found}, out)
    else:
        # same layout as corpus lang.txt: the empty string is an empty line
        out.write(corpus.format_lang(found))
    return EXIT_OK


def cmd_nullable(args, out, err, style) -> int:
    g, _ = resolve_grammar(args.grammar)
    errs = [d for d in errors_of(validate(g)) if d.message != EMPTY_ALPHABET]
    if errs:
        for d in errs:
            err.write(style.diagnostic(d) + "\n")
        return EXIT_REJECT
    sets = _nullable_report(g, not args.no_prune)
    if args.format == "json":
        _emit_json({k: [e.to_json() for e in v] for k, v in sets.items()}, out)
    else:
        out.write("\n".join(_nullable_lines(sets)) + "\n")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "parse": cmd_parse,
    "normalize": cmd_normalize,
    "enumerate": cmd_enumerate,
    "nullable": cmd_nullable,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    style = _Style(out)
    try:
        return COMMANDS[args.command](args, out, err, style)
    except UsageError as e:
        err.write(f"ctxgram: {e}\n")
        return EXIT_USAGE
    except GrammarError as e:
        for d in e.diagnostics:
            err.write(style.diagnostic(d) + "\n")
        return EXIT_REJECT
    except ParseError as e:
        err.write(f"ctxgram: {e}\n")
        return EXIT_REJECT
    except corpus.StaleGoldenError as e:
        err.write(f"ctxgram: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
