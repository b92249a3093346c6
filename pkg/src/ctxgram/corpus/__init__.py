"""Bundled grammars with golden files produced by the reference recognizer.

Each entry lives in ``corpus/<id>/``:

- ``grammar.2cg``: the grammar source
- ``lang.txt``: accepted candidate strings, one per line, length-then-lex
  sorted; the empty string is an empty line
- ``notes.md``: what the grammar is for and known oddities
- ``meta.json``: enumeration bound, candidate set, optional golden traces and
  tables, and SHA-256 digests of every generated file

A golden file whose digest does not match, or a grammar edited after the
golden files were produced, makes ``load`` fail with ``StaleGoldenError``.
``python -m ctxgram.corpus`` regenerates everything.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..grammar import Grammar, GrammarError, errors_of, parse_grammar, validate
from ..oracle import all_strings, derive_all, enumerate_language

CORPUS_DIR = Path(__file__).resolve().parent


class UnknownEntryError(KeyError):
    pass


class StaleGoldenError(RuntimeError):
    pass


@dataclass
class CorpusEntry:
    id: str
    grammar: Grammar
    source: str
    bound: int
    candidates: dict  # how candidate strings are generated, see candidate_strings
    lang: list
    notes: str
    traces: dict = field(default_factory=dict)  # input -> item-set JSON
    tables: dict = field(default_factory=dict)  # input -> parse-table JSON

    @property
    def path(self) -> Path:
        return CORPUS_DIR / self.id

    def candidate_strings(self) -> list:
        return candidate_strings(self.grammar, self.bound, self.candidates)


def ids() -> list:
    return sorted(p.name for p in CORPUS_DIR.iterdir() if (p / "grammar.2cg").is_file())


def block_strings(letters: str, block_max: int, blocks: int, terminator: str = "c") -> list:
    """Concatenations of at most ``blocks`` blocks ``x^k c`` with ``k + 1 <= block_max``."""
    pieces = [terminator] + [x * k + terminator for x in letters for k in range(1, block_max)]
    out = {"".join(combo) for m in range(blocks + 1) for combo in itertools.product(pieces, repeat=m)}
    return sorted(out, key=lambda s: (len(s), s))


def candidate_strings(g: Grammar, bound: int, recipe: dict) -> list:
    kind = recipe.get("kind", "all")
    if kind == "all":
        return list(all_strings(g.alphabet, bound))
    if kind == "blocks":
        pool = block_strings(recipe["letters"], recipe["block_max"], recipe["blocks"], recipe.get("terminator", "c"))
        return [w for w in pool if len(w) <= bound]
    raise ValueError(f"unknown candidate kind {kind!r}")


def format_lang(strings) -> str:
    return "".join(s + "\n" for s in strings)


def parse_lang(text: str) -> list:
    return text.split("\n")[:-1] if text else []


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _golden_texts(g: Grammar, meta: dict) -> dict:
    """Every generated file of an entry, recomputed from the oracle and parser."""
    from ..normalize import to_binary_normal_form
    from ..parser import parse_table

    cands = candidate_strings(g, meta["bound"], meta.get("candidates", {"kind": "all"}))
    out = {"lang.txt": format_lang(enumerate_language(g, meta["bound"], cands))}
    for w in meta.get("traces", []):
        out[f"trace-{w}.json"] = _json_text(derive_all(g, w).to_json())
    if meta.get("tables"):
        nf = to_binary_normal_form(g)
        for w in meta["tables"]:
            out[f"table-{w}.json"] = _json_text(parse_table(nf, w).to_json())
    return out


def load(entry_id: str, verify: bool = True) -> CorpusEntry:
    """Parse, validate and hash-check one entry."""
    path = CORPUS_DIR / entry_id
    if not entry_id or "/" in entry_id or not (path / "grammar.2cg").is_file():
        raise UnknownEntryError(entry_id)
    source = (path / "grammar.2cg").read_text()
    g = parse_grammar(source)
    errs = errors_of(validate(g))
    if errs:
        raise GrammarError(errs)
    meta = json.loads((path / "meta.json").read_text())
    files = {name: (path / name).read_text() for name in meta["sha256"] if name != "grammar.2cg"}
    if verify:
        if meta["sha256"].get("grammar.2cg") != _digest(source):
            raise StaleGoldenError(f"{entry_id}: grammar.2cg changed since the golden files were generated")
        for name, text in files.items():
            if meta["sha256"][name] != _digest(text):
                raise StaleGoldenError(f"{entry_id}: {name} does not match its recorded digest")
    notes_path = path / "notes.md"
    return CorpusEntry(
        id=entry_id,
        grammar=g,
        source=source,
        bound=meta["bound"],
        candidates=meta.get("candidates", {"kind": "all"}),
        lang=parse_lang(files.get("lang.txt", "")),
        notes=notes_path.read_text() if notes_path.is_file() else "",
        traces={w: json.loads(files[f"trace-{w}.json"]) for w in meta.get("traces", [])},
        tables={w: json.loads(files[f"table-{w}.json"]) for w in meta.get("tables", [])},
    )


def load_all(verify: bool = True) -> list:
    return [load(i, verify) for i in ids()]


def regenerate(entry_id: str, write: bool = True) -> bool:
    """Recompute the golden files; return True if they already matched on disk."""
    path = CORPUS_DIR / entry_id
    if not (path / "grammar.2cg").is_file():
        raise UnknownEntryError(entry_id)
    source = (path / "grammar.2cg").read_text()
    g = parse_grammar(source)
    meta = json.loads((path / "meta.json").read_text())
    texts = _golden_texts(g, meta)
    same = all((path / name).is_file() and (path / name).read_text() == text for name, text in texts.items())
    digests = {"grammar.2cg": _digest(source), **{name: _digest(text) for name, text in texts.items()}}
    same = same and meta.get("sha256") == digests
    if write and not same:
        for name, text in texts.items():
            (path / name).write_text(text)
        meta["sha256"] = digests
        (path / "meta.json").write_text(_json_text(meta))
    return same


def golden_is_current(entry_id: str) -> bool:
    """Recompute golden files in memory and compare with what is on disk."""
    return regenerate(entry_id, write=False)
