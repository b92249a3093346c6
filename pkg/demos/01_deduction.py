"""Walk through the abca grammar: items, proofs, and why aabcaa fails."""

# %% the grammar: b needs an a right before it, c needs an a right after it
from ctxgram import corpus
from ctxgram.oracle import Item, derive_all, enumerate_language
from ctxgram.grammar import nt

g = corpus.load("ex1-abca").grammar
print(g)

# %% every string up to length 6 over {a,b,c}; only one survives
print(enumerate_language(g, 6))

# %% the closed item set for abca, shortest spans first
items = derive_all(g, "abca")
for it in sorted(items.nonterminal_items(), key=lambda it: (it.j - it.i, it.i)):
    print(it, "  ", "abca"[: it.i] + "<" + "abca"[it.i : it.j] + ">" + "abca"[it.j :])

# %% S(1,4) is there too: bca after an a is an S by S -> S a
print(items.has(nt("S"), 1, 4))

# %% a proof of S over the whole string; dashed edges in DOT are context witnesses
proof = items.proof(Item(nt("S"), 0, 4))
print(len(proof.postorder()), "distinct items")
print(proof.to_dot("abca"))

# %% aabcaa: B(2,3) would need A over the whole prefix "aa", which A cannot generate
bad = derive_all(g, "aabcaa")
print(bad.has(nt("B"), 2, 3), bad.has(nt("S"), 0, 6))
