"""Lattices of invariant polydiagonal subspaces and their orbit quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .classify import BalanceReport, classify, is_invariant_for, matrix_invariance_test
from .graph import Graph
from .partitions import (
    SubspaceDescriptor,
    contains,
    enumerate_matched_labels,
    enumerate_rgs,
    intersect,
    parse_descriptor,
    trusted,
)
from .symmetry import (
    Orbit,
    Perm,
    SignedGroupElement,
    SizeLimitError,
    automorphisms,
    fixed_point_subspace,
    orbits,
    point_stabilizer,
)

FIELD_CLASSES = ("DG", "DG0", "DGodd", "DGl")
DEFAULT_ENUM_LIMIT = 10


def _check_class(field_class: str) -> None:
    if field_class not in FIELD_CLASSES:
        raise ValueError(f"unknown field class {field_class!r}; expected one of {FIELD_CLASSES}")


def invariant_subspaces(G: Graph, field_class: str = "DGl", limit: int = DEFAULT_ENUM_LIMIT
                        ) -> list[tuple[SubspaceDescriptor, BalanceReport]]:
    """All subspaces invariant under every field of ``field_class``, with reports.

    Plain candidates come first in restricted-growth order, then matched
    candidates in matching order.  A cheap exact matrix test prunes each
    candidate before the definition-level classification confirms it.
    """
    _check_class(field_class)
    if G.n > limit:
        raise SizeLimitError(f"enumeration limited to n <= {limit} (got {G.n})")
    out = []
    prune = "adjacency" if field_class == "DG" else "laplacian"
    for r in enumerate_rgs(G.n):
        W = trusted(tuple(b + 1 for b in r))
        if not matrix_invariance_test(G, W, prune):
            continue
        rep = classify(G, W)
        if is_invariant_for(rep, field_class):
            out.append((W, rep))
    if field_class in ("DGodd", "DGl"):
        for lab in enumerate_matched_labels(G.n):
            W = trusted(lab)
            # L-invariance is necessary for linear-balanced, hence for odd-balanced
            if not matrix_invariance_test(G, W, "laplacian"):
                continue
            rep = classify(G, W)
            if is_invariant_for(rep, field_class):
                out.append((W, rep))
    return out


def enumerate_invariant_subspaces(G: Graph, field_class: str = "DGl", limit: int = DEFAULT_ENUM_LIMIT
                                  ) -> list[SubspaceDescriptor]:
    return [W for W, _ in invariant_subspaces(G, field_class, limit)]


# --------------------------------------------------------------------------


@dataclass
class LatticeNode:
    descriptor: SubspaceDescriptor
    report: BalanceReport
    stabilizer: frozenset
    fixed_point: bool
    orbit_id: int = -1
    orbit_size: int = 1

    @property
    def dim(self) -> int:
        return self.descriptor.free_dim

    @property
    def matched(self) -> bool:
        return not self.descriptor.is_plain

    @property
    def strict(self) -> bool:
        return self.report.strict_exo or self.report.strict_linear


@dataclass
class HasseEdge:
    upper: int   # index of the smaller subspace (higher in reversed inclusion)
    lower: int   # index of the covering larger subspace
    style: str   # "solid" when the stabilizers differ, "dashed" when equal


@dataclass
class InvariantLattice:
    graph: Graph
    field_class: str
    nodes: list[LatticeNode]
    edges: list[HasseEdge]
    perms: list[Perm]
    orbits: list[Orbit] = field(default_factory=list)
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {nd.descriptor: k for k, nd in enumerate(self.nodes)}

    def index(self, W: SubspaceDescriptor | str) -> int:
        if isinstance(W, str):
            W = parse_descriptor(W, self.graph.n)
        return self._index[W]

    def __contains__(self, W) -> bool:
        return W in self._index

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def descriptors(self) -> list[SubspaceDescriptor]:
        return [nd.descriptor for nd in self.nodes]

    @property
    def top(self) -> int:
        """Smallest subspace: the maximum under reversed inclusion."""
        return min(range(len(self.nodes)), key=lambda k: (self.nodes[k].dim, self.nodes[k].descriptor.render()))

    @property
    def bottom(self) -> int:
        return max(range(len(self.nodes)), key=lambda k: self.nodes[k].dim)

    def covers_of(self, k: int) -> list[HasseEdge]:
        return [e for e in self.edges if e.upper == k]

    def covered_by(self, k: int) -> list[HasseEdge]:
        return [e for e in self.edges if e.lower == k]


def _hasse(descs: Sequence[SubspaceDescriptor]) -> list[tuple[int, int]]:
    """Covering pairs (smaller, larger) of the inclusion order."""
    n = len(descs)
    dims = [W.free_dim for W in descs]
    sup: list[set[int]] = [set() for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b and dims[b] > dims[a] and contains(descs[b], descs[a]):
                sup[a].add(b)
    out = []
    for a in range(n):
        for b in sorted(sup[a]):
            # b covers a unless some c sits strictly between
            if not any(c in sup[a] for c in range(n) if b in sup[c]):
                out.append((a, b))
    return out


def build_lattice(G: Graph, field_class: str = "DGl", limit: int = DEFAULT_ENUM_LIMIT,
                  perms: list[Perm] | None = None) -> InvariantLattice:
    pairs = invariant_subspaces(G, field_class, limit)
    if perms is None:
        perms = automorphisms(G)
    nodes = []
    for W, rep in pairs:
        stab = point_stabilizer(G, W, perms)
        fp = fixed_point_subspace(G.n, stab) == W
        nodes.append(LatticeNode(W, rep, frozenset(stab), fp))
    descs = [nd.descriptor for nd in nodes]
    edges = []
    for a, b in _hasse(descs):
        style = "dashed" if nodes[a].stabilizer == nodes[b].stabilizer else "solid"
        edges.append(HasseEdge(a, b, style))
    lat = InvariantLattice(G, field_class, nodes, edges, perms)
    lat.orbits = orbits(perms, descs)
    for oid, orb in enumerate(lat.orbits):
        for W in orb.members:
            nd = nodes[lat.index(W)]
            nd.orbit_id = oid
            nd.orbit_size = orb.size
    return lat


# --------------------------------------------------------------------------


@dataclass
class QuotientPoset:
    lattice: InvariantLattice
    classes: list[Orbit]
    leq: list[list[bool]]        # leq[x][y]: class x <= class y
    is_lattice: bool
    witness: tuple | None        # (x, y, minimal upper bounds) on failure

    def __len__(self):
        return len(self.classes)

    def hasse(self) -> list[tuple[int, int]]:
        """Covering pairs (lower class, upper class)."""
        m = len(self.classes)
        lt = [[self.leq[x][y] and x != y for y in range(m)] for x in range(m)]
        out = []
        for x in range(m):
            for y in range(m):
                if lt[x][y] and not any(lt[x][z] and lt[z][y] for z in range(m)):
                    out.append((x, y))
        return out


def quotient_poset(lat: InvariantLattice) -> QuotientPoset:
    """Orbit quotient: [U] <= [W] iff phi.W is inside U for some phi in aut(G)."""
    cls = lat.orbits
    m = len(cls)
    leq = [[False] * m for _ in range(m)]
    for x in range(m):
        U = cls[x].representative
        for y in range(m):
            leq[x][y] = any(contains(U, W) for W in cls[y].members)
    witness = None
    for x in range(m):
        for y in range(x + 1, m):
            ub = [z for z in range(m) if leq[x][z] and leq[y][z]]
            minimal = [z for z in ub if not any(w != z and leq[w][z] for w in ub)]
            if len(minimal) != 1:
                witness = (x, y, minimal)
                break
        if witness:
            break
    return QuotientPoset(lat, cls, leq, witness is None, witness)


def lattice_closure_violations(lat: InvariantLattice) -> list[tuple[SubspaceDescriptor, SubspaceDescriptor]]:
    bad = []
    descs = lat.descriptors
    for a in range(len(descs)):
        for b in range(a + 1, len(descs)):
            if intersect(descs[a], descs[b]) not in lat:
                bad.append((descs[a], descs[b]))
    return bad


# --------------------------------------------------------------------------
# Path family catalog


def _basic_blocks(q: int) -> list[tuple[str, list[int]]]:
    gen = ("G", list(range(1, q + 1)))
    out = [gen]
    if q >= 3 and q % 2 == 1:
        h = q // 2
        out.append(("E", list(range(1, h + 2)) + list(range(h, 0, -1))))
    h = q // 2
    half = list(range(1, h + 1))
    mid = [0] if q % 2 else []
    out.append(("O", half + mid + [-v for v in reversed(half)]))
    return out


def path_catalog_entries(n: int) -> list[tuple[str, int, SubspaceDescriptor]]:
    """(basic block name, copies, descriptor) for every factorization n = q k."""
    seen = set()
    out = []
    for q in range(1, n + 1):
        if n % q:
            continue
        k = n // q
        for fam, S in _basic_blocks(q):
            lab: list[int] = []
            for c in range(k):
                lab.extend(S if c % 2 == 0 else S[::-1])
            W = SubspaceDescriptor.from_labels(lab)
            if W not in seen:
                seen.add(W)
                out.append((f"{fam}{q}", k, W))
    return out


def path_catalog(n: int) -> list[SubspaceDescriptor]:
    return [W for _, _, W in path_catalog_entries(n)]


def expected_path_category(block: str, copies: int) -> str:
    """Category predicted for a catalog entry by the stringing rules."""
    fam = block[0]
    if fam == "G":
        return "balanced" if copies <= 2 else "strict-exo"
    if fam == "E":
        return "balanced" if copies == 1 else "strict-exo"
    return "odd"


# --------------------------------------------------------------------------
# Exports

DOT_HEADER = """digraph lattice {
  rankdir=TB;
  node [shape=box, style="rounded", fontname="Helvetica", fontsize=11];
  edge [arrowsize=0.6];
"""


def _node_attrs(nd: LatticeNode, label: str) -> str:
    attrs = [f'label="{label}"']
    if nd.matched:
        attrs.append("peripheries=2")
    if nd.strict:
        attrs.append('style="rounded,filled"')
        attrs.append('fillcolor="gray85"')
    return ", ".join(attrs)


def _rank_blocks(ids_by_dim: dict[int, list[str]]) -> list[str]:
    out = []
    for d in sorted(ids_by_dim):
        out.append(f"  {{ rank=same; {' '.join(ids_by_dim[d])} }}  // dim {d}")
    return out


def export_dot(lat: InvariantLattice, quotient: QuotientPoset | None = None) -> str:
    """Graphviz text; the zero subspace is drawn at the top."""
    lines = [DOT_HEADER.rstrip("\n")]
    by_dim: dict[int, list[str]] = {}
    if quotient is None:
        for k, nd in enumerate(lat.nodes):
            lines.append(f"  n{k} [{_node_attrs(nd, nd.descriptor.tuple_str())}];")
            by_dim.setdefault(nd.dim, []).append(f"n{k}")
        lines.extend(_rank_blocks(by_dim))
        for e in lat.edges:
            extra = ", style=dashed" if e.style == "dashed" else ""
            lines.append(f"  n{e.upper} -> n{e.lower} [dir=forward{extra}];")
    else:
        for x, orb in enumerate(quotient.classes):
            nd = lat.nodes[lat.index(orb.representative)]
            attrs = _node_attrs(nd, orb.representative.tuple_str())
            if orb.size > 1:
                attrs += f', xlabel="{orb.size}"'
            lines.append(f"  q{x} [{attrs}];")
            by_dim.setdefault(nd.dim, []).append(f"q{x}")
        lines.extend(_rank_blocks(by_dim))
        for x, y in quotient.hasse():
            # x <= y: y is the smaller subspace, drawn above
            lines.append(f"  q{y} -> q{x};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json(lat: InvariantLattice, quotient: QuotientPoset | None = None) -> dict:
    out = {
        "graph": lat.graph.name,
        "n": lat.graph.n,
        "class": lat.field_class,
        "nodes": [
            {
                "descriptor": nd.descriptor.render(),
                "dim": nd.dim,
                "kind": nd.descriptor.kind,
                "flags": nd.report.flags(),
                "stabilizer_order": len(nd.stabilizer),
                "fixed_point": nd.fixed_point,
                "orbit_id": nd.orbit_id,
                "orbit_size": nd.orbit_size,
            }
            for nd in lat.nodes
        ],
        "edges": [
            {"from": lat.nodes[e.upper].descriptor.render(), "to": lat.nodes[e.lower].descriptor.render(),
             "style": e.style}
            for e in lat.edges
        ],
    }
    if quotient is not None:
        wit = None
        if quotient.witness is not None:
            x, y, mins = quotient.witness
            rep = lambda z: quotient.classes[z].representative.render()  # noqa: E731
            wit = {"pair": [rep(x), rep(y)], "minimal_upper_bounds": [rep(z) for z in mins]}
        out["quotient"] = {
            "classes": [{"representative": o.representative.render(), "size": o.size} for o in quotient.classes],
            "is_lattice": quotient.is_lattice,
            "witness": wit,
        }
    return out


def stabilizer_json(stab) -> list[dict]:
    elems = sorted(stab, key=lambda g: (-g.sign, g.perm))
    return [SignedGroupElement(g.perm, g.sign).to_json() for g in elems]
