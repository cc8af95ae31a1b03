"""Deterministic DOT rendering of weighted dual graphs."""

from __future__ import annotations

from .dualgraph import WeightedDualGraph


def export_dot(graph: WeightedDualGraph) -> str:
    """Render a dual graph as DOT text.

    Vertices come out in name order labeled "name (self²=w)"; every
    intersection point contributes its own edge line. The output is
    byte-identical for identical input graphs.
    """
    lines = ["graph dual {"]
    for name, self_int, _genus in sorted(graph.vertices):
        lines.append(f'  "{name}" [label="{name} (self²={self_int})"];')
    for a, b in sorted(graph.edges):
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
