#!/usr/bin/env python3
"""Regenerate the graph6 fixture lists under tests/data/.

Writes one file per order n in {5, 6, 7} containing every connected graph
on n vertices, one graph6 line each, in graph-atlas order.  The files are
checked in; this script exists so they can be rebuilt from scratch.
"""

import pathlib

import networkx as nx

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    atlas = nx.graph_atlas_g()
    for n in (5, 6, 7):
        lines = []
        for G in atlas:
            if G.number_of_nodes() != n or not nx.is_connected(G):
                continue
            lines.append(
                nx.to_graph6_bytes(G, header=False).decode("ascii").strip()
            )
        path = OUT / f"connected{n}.g6"
        path.write_text("\n".join(lines) + "\n")
        print(f"{path}: {len(lines)} graphs")


if __name__ == "__main__":
    main()
