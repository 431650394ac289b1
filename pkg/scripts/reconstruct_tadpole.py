"""Search labeled 6-cell graphs for the tadpole-family fixture.

Only cell-level facts about this network are known, so the edge set is
reconstructed from the facts it must satisfy:

  * a strictly linear-balanced partition with A0 = {2, 3}, e(i) = 2 on
    {1, 4, 5, 6}, [4] = -[6], d_A(4) = 0 and d_{-A}(6) = 1 for some class A != [4]
  * a strictly linear-balanced two-symbol partition with e = 2 everywhere,
    [1] = -[5], d_B(1) = 1 and d_{-B}(5) = 0 for B = [1], with 2 and 3 in
    the other pair and delta_A = 0 on {2, 3}, delta_B = 0 on {1, 4, 5, 6}
  * DGl lattice with 10 orbit classes: 2 balanced, 5 exo-balanced, and some
    orbit of size 2

The stated split of the remaining classes (2 odd, 3 strictly linear) is
not met by any connected 6-cell graph; the script reports the profile it
finds so the discrepancy stays visible.

Usage: python3 scripts/reconstruct_tadpole.py [--write]
"""

import argparse
import itertools

from graphsync.classify import ClassTable, classify
from graphsync.graph import DATA_DIR, Graph, GraphError
from graphsync.lattice import build_lattice
from graphsync.partitions import SubspaceDescriptor

N = 6
PAIRS = [(i, j) for i in range(N) for j in range(i + 1, N)]


def fig_i_candidates():
    # cells 2,3 -> 0; 4 and 6 opposite; 1 and 5 each +-
    for s1, s5 in itertools.product((1, -1), repeat=2):
        for s4 in (1, -1):
            lab = [s1, 0, 0, s4, s5, -s4]
            yield SubspaceDescriptor.from_labels(lab)


def fig_ii_candidates():
    # B-pair holds 1 and 5 (opposite), A-pair holds 2 and 3 plus the rest split
    for rest in itertools.product((2, -2, 1, -1), repeat=2):
        for s23 in ((1, 1), (1, -1), (-1, 1)):
            lab = [2, s23[0], s23[1], rest[0], -2, rest[1]]
            W = SubspaceDescriptor.from_labels(lab)
            if W.free_dim == 2 and W.is_matched_partition:
                yield W


def check_fig_i(G, W):
    rep = classify(G, W)
    if not rep.strict_linear:
        return False
    t = ClassTable(G, W)
    c4 = t.of[3]
    others = [c for c in range(len(t)) if c != c4]
    return any(t.deg[3][a] == 0 and t.deg[5][t.neg[a]] == 1 for a in others)


def check_fig_ii(G, W):
    rep = classify(G, W)
    if not rep.strict_linear:
        return False
    t = ClassTable(G, W)
    b = t.of[0]
    return t.deg[0][b] == 1 and t.deg[4][t.neg[b]] == 0 and set(rep.linear_degrees.values()) == {2}


def profile(G):
    L = build_lattice(G, "DGl")
    cats = {}
    for o in L.orbits:
        rep = L.nodes[L.index(o.representative)].report
        cats[rep.category()] = cats.get(rep.category(), 0) + 1
    bal = cats.get("balanced", 0)
    exo = bal + cats.get("strict-exo", 0)
    odd = exo + cats.get("odd", 0)
    lin = cats.get("strict-linear", 0)
    has2 = any(o.size == 2 for o in L.orbits)
    return (bal, exo, odd, lin, has2), L


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", action="store_true", help="write the first match to data/tadpole.edges")
    args = ap.parse_args()
    found = []
    for mask in range(1, 1 << len(PAIRS)):
        es = frozenset(p for b, p in enumerate(PAIRS) if mask >> b & 1)
        try:
            G = Graph(N, es, "candidate")
        except GraphError:
            continue
        if not any(check_fig_i(G, W) for W in fig_i_candidates()):
            continue
        if not any(check_fig_ii(G, W) for W in fig_ii_candidates()):
            continue
        prof, L = profile(G)
        if prof[:2] == (2, 5) and prof[4] and len(L.orbits) == 10:
            found.append(G)
            print("match:", G.edge_list(), "profile (bal, exo, exo+odd, strict-lin, has 2-orbit):", prof)
    print(f"{len(found)} labeled matches")
    if args.write and found:
        G = min(found, key=lambda g: (len(g.edges), g.edge_list()))
        lines = ["# 6-cell tadpole-family network (reconstructed; see scripts/reconstruct_tadpole.py)",
                 "n 6"] + [f"{i} {j}" for i, j in G.edge_list()]
        (DATA_DIR / "tadpole.edges").write_text("\n".join(lines) + "\n")
        print("wrote", DATA_DIR / "tadpole.edges")


if __name__ == "__main__":
    main()
