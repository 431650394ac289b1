"""Balance conditions for partitions and matched partitions of a graph.

Each condition is decided twice: by the degree definitions (counting
neighbors per class) and by exact matrix invariance of the generic element
(adjacency matrix for balanced, Laplacian for exo- and linear-balanced).
``classify`` runs both and treats any disagreement as a bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .graph import Graph, adjacency_matrix, laplacian_matrix
from .partitions import SubspaceDescriptor


class OracleMismatch(RuntimeError):
    """Definition-level check and matrix oracle disagree."""


class _Undefined:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "undefined"

    def __reduce__(self):
        return (_Undefined, ())


UNDEFINED = _Undefined()


class ClassTable:
    """Classes of a descriptor with the degree table d_A(i).

    Matched descriptors list classes as A, -A, B, -B, ..., A0, with A0
    present even when empty.  ``deg[i][c]`` is the number of neighbors of
    cell i in class c.
    """

    def __init__(self, G: Graph, W: SubspaceDescriptor):
        if G.n != W.n:
            raise ValueError(f"descriptor has {W.n} cells, graph has {G.n}")
        self.W = W
        self.names = []
        self.cells = []
        for name, cells in W.classes():
            self.names.append(name)
            self.cells.append(cells)
        nc = len(self.cells)
        self.of = [0] * G.n
        for c, cells in enumerate(self.cells):
            for i in cells:
                self.of[i] = c
        self.matched = not W.is_plain
        if self.matched:
            self.zero = nc - 1
            self.neg = []
            for c in range(nc - 1):
                self.neg.append(c + 1 if c % 2 == 0 else c - 1)
            self.neg.append(nc - 1)
        else:
            self.zero = None
            self.neg = list(range(nc))
        self.deg = []
        for i in range(G.n):
            row = [0] * nc
            for j in G.neighbors[i]:
                row[self.of[j]] += 1
            self.deg.append(row)

    def __len__(self):
        return len(self.cells)


def _plain_degree_check(G: Graph, W: SubspaceDescriptor, skip_own: bool):
    t = ClassTable(G, W)
    nc = len(t)
    degrees = {}
    for b in range(nc):
        cells = t.cells[b]
        for a in range(nc):
            if skip_own and a == b:
                continue
            vals = {t.deg[i][a] for i in cells}
            if len(vals) != 1:
                return False, {}
            degrees[(t.names[a], t.names[b])] = vals.pop()
    return True, degrees


def is_balanced(G: Graph, W: SubspaceDescriptor):
    """Balanced: d_A(i) = d_A(j) whenever [i] = [j].  Returns (flag, {(A, B): d_A(B)})."""
    if not W.is_plain:
        raise ValueError("balance is defined for plain partitions")
    return _plain_degree_check(G, W, skip_own=False)


def is_exo_balanced(G: Graph, W: SubspaceDescriptor):
    """Exo-balanced: the balance condition toward other classes only."""
    if not W.is_plain:
        raise ValueError("exo-balance is defined for plain partitions")
    return _plain_degree_check(G, W, skip_own=True)


def is_odd_balanced(G: Graph, W: SubspaceDescriptor):
    """Odd-balanced matched partition.  Returns (flag, degree table).

    The table has d_A(B) for A != B != A0 and UNDEFINED elsewhere.
    """
    if not W.is_matched_partition:
        return False, {}
    t = ClassTable(G, W)
    nc, z, neg, of, deg = len(t), t.zero, t.neg, t.of, t.deg
    n = G.n
    for i in range(n):
        ci = of[i]
        if ci == z:
            # (2): d_A(i) = d_{-A}(i) for every A != A0
            for a in range(nc):
                if a != z and deg[i][a] != deg[i][neg[a]]:
                    return False, {}
            continue
        # (1): d_A(i) = d_{-A}(j) for every j in -[i] and every A != [i]
        for j in t.cells[neg[ci]]:
            for a in range(nc):
                if a != ci and deg[i][a] != deg[j][neg[a]]:
                    return False, {}
    degrees = {}
    for a in range(nc):
        for b in range(nc):
            key = (t.names[a], t.names[b])
            if a != b and b != z:
                degrees[key] = deg[t.cells[b][0]][a]
            else:
                degrees[key] = UNDEFINED
    return True, degrees


def linear_degree(t: ClassTable, i: int) -> int:
    """e(i) = 2 d_{-[i]}(i) + sum of d_B(i) over B outside {[i], -[i]}."""
    ci = t.of[i]
    nci = t.neg[ci]
    row = t.deg[i]
    return 2 * row[nci] + sum(v for b, v in enumerate(row) if b != ci and b != nci)


def is_linear_balanced(G: Graph, W: SubspaceDescriptor):
    """Linear-balanced matched partition.

    Returns (flag, {A: e(A)}, {(A, B): delta_A(B)}).
    """
    if not W.is_matched_partition:
        return False, {}, {}
    t = ClassTable(G, W)
    nc, z, neg, of, deg = len(t), t.zero, t.neg, t.of, t.deg
    n = G.n

    def delta(a, i):
        return deg[i][a] - deg[i][neg[a]]

    for i in range(n):
        ci = of[i]
        for j in t.cells[neg[ci]]:
            # (1): e(i) = e(j) whenever [i] = -[j] != A0
            if ci != z and linear_degree(t, i) != linear_degree(t, j):
                return False, {}, {}
            # (2): delta_A(i) = -delta_A(j) whenever [i] = -[j] and [i] != A != [j]
            for a in range(nc):
                if a != ci and a != neg[ci] and delta(a, i) != -delta(a, j):
                    return False, {}, {}
    e = {t.names[c]: linear_degree(t, t.cells[c][0]) for c in range(nc) if c != z}
    diffs = {}
    for a in range(nc):
        for b in range(nc):
            key = (t.names[a], t.names[b])
            if b != a and b != neg[a] and t.cells[b]:
                diffs[key] = delta(a, t.cells[b][0])
            else:
                diffs[key] = UNDEFINED
    return True, e, diffs


# --------------------------------------------------------------------------
# Matrix oracles

_ROWS: dict = {}


def _sparse_rows(G: Graph, which: str):
    key = (G.n, G.edges, which)
    rows = _ROWS.get(key)
    if rows is None:
        M = adjacency_matrix(G) if which == "adjacency" else laplacian_matrix(G)
        rows = tuple(tuple((j, int(M[i, j])) for j in range(G.n) if M[i, j]) for i in range(G.n))
        if len(_ROWS) > 256:
            _ROWS.clear()
        _ROWS[key] = rows
    return rows


def matrix_invariance_test(G: Graph, W: SubspaceDescriptor, which: Literal["adjacency", "laplacian"]) -> bool:
    """Exact test that M maps the subspace of W into itself.

    The generic element has x_i = sign_i * symbol_i; its image is a vector of
    integer symbol coefficients per cell, which must satisfy W's own
    constraints (equal up to sign within a class, zero on zero cells).
    """
    if which not in ("adjacency", "laplacian"):
        raise ValueError(f"unknown matrix {which!r}")
    if G.n != W.n:
        raise ValueError(f"descriptor has {W.n} cells, graph has {G.n}")
    rows = _sparse_rows(G, which)
    lab = W.labels
    r = W.free_dim
    ref: list = [None] * r
    for i in range(G.n):
        img = [0] * r
        for j, c in rows[i]:
            v = lab[j]
            if v > 0:
                img[v - 1] += c
            elif v < 0:
                img[-v - 1] -= c
        v = lab[i]
        if v == 0:
            if any(img):
                return False
            continue
        if v < 0:
            img = [-x for x in img]
        k = abs(v) - 1
        if ref[k] is None:
            ref[k] = img
        elif ref[k] != img:
            return False
    return True


# --------------------------------------------------------------------------


@dataclass
class BalanceReport:
    descriptor: SubspaceDescriptor
    kind: str
    balanced: bool | None = None
    exo_balanced: bool | None = None
    odd_balanced: bool | None = None
    linear_balanced: bool | None = None
    degrees: dict = field(default_factory=dict)
    linear_degrees: dict = field(default_factory=dict)
    degree_diffs: dict = field(default_factory=dict)
    adjacency_invariant: bool = False
    laplacian_invariant: bool = False

    @property
    def strict_exo(self) -> bool:
        return bool(self.exo_balanced) and not self.balanced

    @property
    def strict_linear(self) -> bool:
        return bool(self.linear_balanced) and not self.odd_balanced

    def category(self) -> str | None:
        """balanced / strict-exo / odd / strict-linear, or None if not invariant."""
        if self.balanced:
            return "balanced"
        if self.exo_balanced:
            return "strict-exo"
        if self.odd_balanced:
            return "odd"
        if self.linear_balanced:
            return "strict-linear"
        return None

    def flags(self) -> dict:
        return {
            "balanced": self.balanced,
            "exo_balanced": self.exo_balanced,
            "odd_balanced": self.odd_balanced,
            "linear_balanced": self.linear_balanced,
            "strict_exo": self.strict_exo,
            "strict_linear": self.strict_linear,
        }

    def to_json(self) -> dict:
        def val(v):
            return "undefined" if v is UNDEFINED else v

        return {
            "descriptor": self.descriptor.render(),
            "kind": self.kind,
            "flags": self.flags(),
            "degrees": [{"rel": a, "of": b, "value": val(v)} for (a, b), v in self.degrees.items()],
            "linear_degrees": dict(self.linear_degrees),
            "degree_diffs": [{"rel": a, "of": b, "value": val(v)} for (a, b), v in self.degree_diffs.items()],
            "adjacency_invariant": self.adjacency_invariant,
            "laplacian_invariant": self.laplacian_invariant,
        }


def classify(G: Graph, W: SubspaceDescriptor) -> BalanceReport:
    """Fill every applicable balance flag and cross-check against the matrix oracles."""
    adj = matrix_invariance_test(G, W, "adjacency")
    lap = matrix_invariance_test(G, W, "laplacian")
    rep = BalanceReport(W, W.kind, adjacency_invariant=adj, laplacian_invariant=lap)
    if W.is_plain:
        bal, bdeg = is_balanced(G, W)
        exo, edeg = is_exo_balanced(G, W)
        rep.balanced, rep.exo_balanced = bal, exo
        rep.degrees = bdeg if bal else edeg
        if bal != adj:
            raise OracleMismatch(f"{W}: balanced={bal} but adjacency-invariant={adj}")
        if exo != lap:
            raise OracleMismatch(f"{W}: exo-balanced={exo} but Laplacian-invariant={lap}")
        return rep
    odd, odeg = is_odd_balanced(G, W)
    lin, e, diffs = is_linear_balanced(G, W)
    rep.odd_balanced, rep.linear_balanced = odd, lin
    rep.degrees, rep.linear_degrees, rep.degree_diffs = odeg, e, diffs
    if lin != lap:
        raise OracleMismatch(f"{W}: linear-balanced={lin} but Laplacian-invariant={lap}")
    if odd and not lin:
        raise OracleMismatch(f"{W}: odd-balanced but not linear-balanced")
    return rep


def is_invariant_for(rep: BalanceReport, field_class: str) -> bool:
    """Whether every field of the class leaves the subspace invariant."""
    if field_class == "DG":
        return bool(rep.balanced)
    if field_class == "DG0":
        return bool(rep.exo_balanced)
    if field_class == "DGodd":
        return bool(rep.exo_balanced or rep.odd_balanced)
    if field_class == "DGl":
        return bool(rep.exo_balanced or rep.linear_balanced)
    raise ValueError(f"unknown field class {field_class!r}")
