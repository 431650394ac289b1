"""Table of invariant-subspace counts per field class.

Usage: python3 scripts/lattice_counts.py [--graphs path:2..7,cycle:3..6,paw,cube]
"""

import argparse
import time

from graphsync.graph import build_graph, expand_graph_specs
from graphsync.lattice import build_lattice, quotient_poset

CLASSES = ("DG", "DG0", "DGodd", "DGl")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", default="path:2..7,cycle:3..6,paw,cube")
    args = ap.parse_args()
    print(f"{'graph':<12}" + "".join(f"{c:>7}" for c in CLASSES) + f"{'orbits':>8}{'lattice':>9}{'secs':>7}")
    for spec in expand_graph_specs(args.graphs):
        G = build_graph(spec)
        t0 = time.perf_counter()
        counts = []
        for cls in CLASSES:
            lat = build_lattice(G, cls)
            counts.append(len(lat))
        q = quotient_poset(lat)
        dt = time.perf_counter() - t0
        print(f"{spec:<12}" + "".join(f"{c:>7}" for c in counts) + f"{len(q):>8}{str(q.is_lattice):>9}{dt:>7.1f}")


if __name__ == "__main__":
    main()
