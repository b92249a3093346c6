"""Why the tabular parser needs more than one pass, and what the index placement changes."""

# %% A over "a" needs B to its right; B over "b" needs C to its left
from ctxgram import corpus
from ctxgram.parser import extract_proof, parse_table, pass_bound

g = corpus.load("ex-s5-cycle").grammar
table = parse_table(g, "ab")
print(table.format())
print("passes:", table.passes, "bound:", pass_bound(g, 2))

# %% boundary cells after each pass; the last pass changes nothing
for k, snapshot in enumerate(table.history, 1):
    print(k, [bin(mask) for mask in snapshot])

# %% a proof of S over ab, read off the recorded table entries
print(extract_proof(table, g.start, 0, 2).to_json())

# %% checking >(B) against T[i,n] instead of T[j,n] puts B over the whole string, where it never is
print(parse_table(g, "ab", printed_indices=True).accepts())

# %% a longer input on a bigger grammar: declarations before use
from ctxgram.normalize import to_binary_normal_form

nf = to_binary_normal_form(corpus.load("ex2-declarations").grammar)
for n in (25, 50, 100, 200):
    t = parse_table(nf, ("acbc" * n)[:n], justify=False)
    print(n, t.accepts(), t.passes, t.work)
