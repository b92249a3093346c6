"""Proof trees for derived items, with JSON and DOT export."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ProofNode:
    symbol: object
    i: int
    j: int
    rule: object = None  # None marks an axiom leaf
    children: list = field(default_factory=list)
    context_children: list = field(default_factory=list)

    @property
    def is_axiom(self) -> bool:
        return self.rule is None

    def label(self, w: str | None = None) -> str:
        if w is None:
            return f"{self.symbol}({self.i},{self.j})"
        return f"{self.symbol}({w[:self.i]}<{w[self.i:self.j]}>{w[self.j:]})"

    def postorder(self) -> list:
        """Distinct items of the tree, each after its premises, first visit wins."""
        out, seen = [], set()

        def visit(node):
            key = (node.symbol, node.i, node.j)
            if key in seen:
                return
            for c in node.children + node.context_children:
                visit(c)
            seen.add(key)
            out.append(key)

        visit(self)
        return out

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children + self.context_children)

    def to_json(self) -> dict:
        out = {"symbol": str(self.symbol), "i": self.i, "j": self.j}
        if self.rule is not None:
            out["rule"] = str(self.rule)
            out["children"] = [c.to_json() for c in self.children]
            out["context_children"] = [c.to_json() for c in self.context_children]
        return out

    def to_dot(self, w: str | None = None) -> str:
        lines = ["digraph proof {", "  node [shape=box, fontname=monospace];"]
        counter = iter(range(10**9))

        def emit(node):
            ident = f"n{next(counter)}"
            shape = ", shape=plaintext" if node.is_axiom else ""
            lines.append(f'  {ident} [label="{node.label(w)}"{shape}];')
            for c in node.children:
                lines.append(f"  {ident} -> {emit(c)};")
            for c in node.context_children:
                lines.append(f"  {ident} -> {emit(c)} [style=dashed];")
            return ident

        emit(self)
        lines.append("}")
        return "\n".join(lines) + "\n"
