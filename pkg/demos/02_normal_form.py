"""From a grammar with empty rules and contexts to binary normal form."""

# %% B may be empty only after a D, C only before an E
from ctxgram import corpus
from ctxgram.normalize import compute_nullable, compute_nullable_left_eps, compute_nullable_right_eps, normalize
from ctxgram.oracle import enumerate_language
from ctxgram.parser import accepts

g = corpus.load("ex5-nullable-2sided").grammar
print(g)

# %% where each nonterminal can be empty, and under which whole-prefix / whole-suffix conditions
for triple in sorted(map(str, compute_nullable(g))):
    print(triple)
print([str(e) for e in compute_nullable_left_eps(g)], [str(e) for e in compute_nullable_right_eps(g)])

# %% every stage of the pipeline, with its rule count
report = normalize(g)
for name, count in report.rule_counts():
    print(f"{name:>26}: {count}")

# %% the result: terminal rules and pair rules, contexts on single nonterminals only
nf = report.grammar
print(nf)

# %% same language without the empty string, checked against the reference recognizer
reference = [w for w in enumerate_language(g, 5) if w]
tabular = [w for w in reference if accepts(nf, w)]
print(reference, reference == tabular)

# %% the empty-context example: the normal form needs no flags at all
cf = corpus.load("ex4-nullable-cf").grammar
print(normalize(cf).grammar)
