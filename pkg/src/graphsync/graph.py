"""Graph networks: connected simple graphs on cells 1..n.

Cells are 1-indexed at every external surface (spec strings, edge-list
files, printed output) and 0-indexed inside the library.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable connected simple graph.

    ``edges`` holds 0-based pairs ``(i, j)`` with ``i < j``.
    """

    n: int
    edges: frozenset
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one cell")
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise GraphError(f"bad edge {(i + 1, j + 1)} for n={self.n}")
        if not self._connected():
            raise GraphError(f"graph {self.name or '<anon>'} is not connected")

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        nbrs = self.neighbors
        while stack:
            i = stack.pop()
            for j in nbrs[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.n

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.neighbors)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.neighbors)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.neighbor_sets[i]

    def edge_list(self) -> list[tuple[int, int]]:
        """Sorted edge list, 1-indexed."""
        return sorted((i + 1, j + 1) for i, j in self.edges)

    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1


def from_edges(n: int, pairs: Iterable[tuple[int, int]], name: str = "", one_based: bool = True) -> Graph:
    """Build a graph from a pair list, rejecting self-loops and duplicates."""
    off = 1 if one_based else 0
    seen = set()
    for a, b in pairs:
        i, j = a - off, b - off
        if i == j:
            raise GraphError(f"self-loop at cell {a}")
        e = (min(i, j), max(i, j))
        if e in seen:
            raise GraphError(f"duplicate edge {a} {b}")
        seen.add(e)
    return Graph(n, frozenset(seen), name)


def path(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], one_based=False, name=f"path:{n}")


def circulant(n: int, jumps: Iterable[int]) -> Graph:
    es = set()
    for j in jumps:
        if not 0 < j <= n // 2:
            raise GraphError(f"circulant jump {j} out of range for n={n}")
        for i in range(n):
            k = (i + j) % n
            es.add((min(i, k), max(i, k)))
    return Graph(n, frozenset(es), f"circulant:{n}:" + ",".join(map(str, jumps)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    g = circulant(n, [1])
    return Graph(g.n, g.edges, f"cycle:{n}")


def complete(n: int) -> Graph:
    es = frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    return Graph(n, es, f"complete:{n}")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edges(10, outer + spokes + inner, one_based=False, name="petersen")


def cube() -> Graph:
    # cells are 3-bit words; edges join words at Hamming distance 1
    es = [(i, i ^ (1 << b)) for i in range(8) for b in range(3) if i < i ^ (1 << b)]
    return from_edges(8, es, one_based=False, name="cube")


def paw() -> Graph:
    return from_edges(4, [(1, 2), (1, 3), (2, 3), (3, 4)], name="paw")


DATA_DIR = Path(__file__).parent / "data"

BUILTINS = ("path", "cycle", "circulant", "complete", "petersen", "cube", "paw")


def read_edge_list(text: str, name: str = "") -> Graph:
    """Parse the edge-list format: ``i j`` per line, ``#`` comments.

    An optional ``n <count>`` line declares cells that the pairs alone would
    not reveal; otherwise n is the largest cell index seen.
    """
    pairs = []
    n_decl = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "n" and len(toks) == 2:
            n_decl = int(toks[1])
            continue
        if len(toks) != 2:
            raise GraphError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            a, b = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer cell in {raw!r}") from None
        if a < 1 or b < 1:
            raise GraphError(f"line {lineno}: cells are numbered from 1")
        pairs.append((a, b))
    n = n_decl if n_decl is not None else max((max(p) for p in pairs), default=1)
    if any(max(p) > n for p in pairs):
        raise GraphError("edge refers to a cell beyond the declared n")
    return from_edges(n, pairs, name=name)


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphError(f"expected integer {what}, got {tok!r}") from None


def build_graph(spec: str) -> Graph:
    """Build a graph from ``name[:n[:j1,j2,...]]`` or an edge-list file path.

    ``name`` may also be a bundled fixture (see ``data/``), e.g. ``tadpole``.
    """
    spec = spec.strip()
    parts = spec.split(":")
    name = parts[0]
    if name in BUILTINS:
        if name in ("petersen", "cube", "paw"):
            if len(parts) != 1:
                raise GraphError(f"{name} takes no size")
            return {"petersen": petersen, "cube": cube, "paw": paw}[name]()
        if len(parts) < 2:
            raise GraphError(f"{name} needs a size, e.g. {name}:5")
        n = _int(parts[1], "size")
        if n < 1:
            raise GraphError("n must be >= 1")
        if name == "path":
            return path(n)
        if name == "cycle":
            return cycle(n)
        if name == "complete":
            return complete(n)
        if len(parts) != 3:
            raise GraphError("circulant needs jumps, e.g. circulant:10:1,2")
        jumps = [_int(t, "jump") for t in parts[2].split(",")]
        return circulant(n, jumps)
    fixture = DATA_DIR / f"{name}.edges"
    if len(parts) == 1 and fixture.exists():
        return read_edge_list(fixture.read_text(), name=name)
    if os.path.exists(spec):
        return read_edge_list(Path(spec).read_text(), name=Path(spec).stem)
    raise GraphError(f"unknown graph spec {spec!r}")


def expand_graph_specs(text: str) -> list[str]:
    """Expand comma lists with family ranges: ``path:2..8,cycle:3..5,paw``."""
    out = []
    for tok in _split_top(text):
        fam, _, rest = tok.partition(":")
        if ".." in rest and ":" not in rest:
            lo, hi = rest.split("..")
            out.extend(f"{fam}:{k}" for k in range(_int(lo, "range start"), _int(hi, "range end") + 1))
        else:
            out.append(tok)
    return out


def _split_top(text: str) -> list[str]:
    # circulant jump lists also use commas: glue "circulant:10:1" ",2" back together
    toks: list[str] = []
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        if toks and t.isdigit() and toks[-1].startswith("circulant:") and toks[-1].count(":") == 2:
            toks[-1] += "," + t
        else:
            toks.append(t)
    return toks


def degree_rel(G: Graph, i: int, A) -> int:
    """Number of neighbors of cell ``i`` (0-based) lying in the cell set ``A``."""
    if not 0 <= i < G.n:
        raise IndexError(f"cell {i + 1} out of range 1..{G.n}")
    return len(G.neighbor_sets[i].intersection(A))


def adjacency_matrix(G: Graph) -> np.ndarray:
    M = np.zeros((G.n, G.n), dtype=np.int64)
    for i, j in G.edges:
        M[i, j] = M[j, i] = 1
    return M


def laplacian_matrix(G: Graph) -> np.ndarray:
    M = adjacency_matrix(G)
    return np.diag(M.sum(axis=1)) - M
