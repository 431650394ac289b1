"""Smallest connected graphs with trivial automorphism group.

Checks that no such graph exists on n <= 5 cells, then writes a 7-cell
asymmetric tree (the smallest asymmetric tree) as a fixture marked
reconstructed.  Its exact edge set is not known; any asymmetric graph
exercises the same code path.

Usage: python3 scripts/asymmetric_fixtures.py [--write]
"""

import argparse
import itertools

from graphsync.graph import DATA_DIR, Graph, GraphError
from graphsync.lattice import build_lattice
from graphsync.symmetry import automorphisms


def asymmetric_graphs(n, max_edges=None):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m_hi = len(pairs) if max_edges is None else max_edges
    for m in range(n - 1, m_hi + 1):
        for es in itertools.combinations(pairs, m):
            try:
                G = Graph(n, frozenset(es))
            except GraphError:
                continue
            if len(automorphisms(G)) == 1:
                yield G


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", action="store_true")
    args = ap.parse_args()
    for n in range(1, 6):
        first = next(asymmetric_graphs(n), None)
        print(f"n={n}: asymmetric connected graph {'exists' if first else 'none'}")
    tree = next(asymmetric_graphs(7, max_edges=6))
    print("7-cell asymmetric tree:", tree.edge_list())
    L = build_lattice(tree, "DGl")
    print(f"DGl lattice: {len(L)} subspaces, {len(L.orbits)} orbit classes")
    if args.write:
        lines = ["# 7-cell network with trivial automorphism group (reconstructed; see scripts/asymmetric_fixtures.py)",
                 "n 7"] + [f"{i} {j}" for i, j in tree.edge_list()]
        (DATA_DIR / "asym7.edges").write_text("\n".join(lines) + "\n")
        print("wrote", DATA_DIR / "asym7.edges")


if __name__ == "__main__":
    main()
