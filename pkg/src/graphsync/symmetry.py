"""Graph automorphisms and the action of aut(G) x Z2 on polydiagonal subspaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph
from .partitions import SignedUnionFind, SubspaceDescriptor, canonicalize

DEFAULT_AUT_LIMIT = 15


class SizeLimitError(RuntimeError):
    pass


Perm = tuple  # perm[i] = image of cell i (0-based)


@dataclass(frozen=True)
class SignedGroupElement:
    """Element (sigma, s) of aut(G) x Z2 acting by (sigma, s).x = s * (x_{sigma^-1(i)})_i."""

    perm: Perm
    sign: int = 1

    def __mul__(self, other: "SignedGroupElement") -> "SignedGroupElement":
        # (self * other).x = self.(other.x)
        p = tuple(self.perm[other.perm[i]] for i in range(len(self.perm)))
        return SignedGroupElement(p, self.sign * other.sign)

    def inverse(self) -> "SignedGroupElement":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return SignedGroupElement(tuple(inv), self.sign)

    def is_identity(self) -> bool:
        return self.sign == 1 and all(i == j for i, j in enumerate(self.perm))

    def act_on_point(self, x: Sequence):
        y = [None] * len(x)
        for j, v in enumerate(x):
            y[self.perm[j]] = -v if self.sign < 0 else v
        return y

    def cycles(self) -> str:
        """Cycle notation on 1-based cells, fixed points omitted; identity is '()'."""
        seen = set()
        out = []
        for start in range(len(self.perm)):
            if start in seen or self.perm[start] == start:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i + 1)
                i = self.perm[i]
            out.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(out) or "()"

    def to_json(self) -> dict:
        return {"perm": self.cycles(), "sign": self.sign}


def automorphisms(G: Graph, limit: int = DEFAULT_AUT_LIMIT) -> list[Perm]:
    """All automorphisms of G, in lexicographic order of the image words.

    Backtracking over cells 1..n; a candidate image must match the degree,
    be unused, and preserve adjacency to every already-mapped cell.
    """
    n = G.n
    if n > limit:
        raise SizeLimitError(f"automorphism search limited to n <= {limit} (got {n})")
    deg = G.degrees
    nb = G.neighbor_sets
    img = [-1] * n
    used = [False] * n
    out: list[Perm] = []

    def rec(i: int):
        if i == n:
            out.append(tuple(img))
            return
        for v in range(n):
            if used[v] or deg[v] != deg[i]:
                continue
            ok = True
            for u in range(i):
                if (u in nb[i]) != (img[u] in nb[v]):
                    ok = False
                    break
            if not ok:
                continue
            img[i] = v
            used[v] = True
            rec(i + 1)
            used[v] = False
        img[i] = -1

    rec(0)
    return out


def signed_group(perms: Iterable[Perm]) -> list[SignedGroupElement]:
    """aut(G) x Z2 as signed elements, positive copies first."""
    perms = list(perms)
    return [SignedGroupElement(p, 1) for p in perms] + [SignedGroupElement(p, -1) for p in perms]


def act_on_subspace(g: SignedGroupElement | Perm, W: SubspaceDescriptor) -> SubspaceDescriptor:
    if isinstance(g, SignedGroupElement):
        perm, sign = g.perm, g.sign
    else:
        perm, sign = g, 1
    if len(perm) != W.n:
        raise ValueError("permutation size does not match descriptor")
    lab = [0] * W.n
    for j, v in enumerate(W.labels):
        lab[perm[j]] = sign * v
    return SubspaceDescriptor(canonicalize(lab))


@dataclass
class Orbit:
    representative: SubspaceDescriptor
    members: list[SubspaceDescriptor]

    @property
    def size(self) -> int:
        return len(self.members)


def orbit_of(perms: Sequence[Perm], W: SubspaceDescriptor) -> set[SubspaceDescriptor]:
    return {act_on_subspace(p, W) for p in perms}


def orbits(perms: Sequence[Perm], subspaces: Sequence[SubspaceDescriptor]) -> list[Orbit]:
    """Partition ``subspaces`` into aut(G)-orbits.

    Representatives are the lexicographically least rendered strings; the
    result is sorted by representative.
    """
    pool = set(subspaces)
    done: set = set()
    out = []
    for W in subspaces:
        if W in done:
            continue
        orb = orbit_of(perms, W)
        members = sorted((U for U in orb if U in pool), key=SubspaceDescriptor.render)
        done.update(members)
        out.append(Orbit(members[0], members))
    out.sort(key=lambda o: o.representative.render())
    return out


def point_stabilizer(G: Graph, W: SubspaceDescriptor, perms: Sequence[Perm] | None = None) -> list[SignedGroupElement]:
    """Elements of aut(G) x Z2 fixing the generic element of W."""
    if perms is None:
        perms = automorphisms(G)
    lab = W.labels
    out = []
    for sign in (1, -1):
        for p in perms:
            if all(lab[p[j]] == sign * lab[j] for j in range(W.n)):
                out.append(SignedGroupElement(p, sign))
    return out


def fixed_point_subspace(n: int, subgroup: Iterable[SignedGroupElement]) -> SubspaceDescriptor:
    """Fix(subgroup): closure of x_{sigma(j)} = s x_j over all elements."""
    uf = SignedUnionFind(n)
    for g in subgroup:
        for j in range(n):
            uf.union(g.perm[j], j, g.sign)
    return uf.descriptor()


def is_fixed_point_subspace(G: Graph, W: SubspaceDescriptor, perms: Sequence[Perm] | None = None) -> bool:
    return fixed_point_subspace(G.n, point_stabilizer(G, W, perms)) == W


def is_group(elems: Sequence[SignedGroupElement]) -> bool:
    s = set(elems)
    if not s:
        return False
    n = len(next(iter(s)).perm)
    if SignedGroupElement(tuple(range(n)), 1) not in s:
        return False
    return all(a * b in s for a in s for b in s) and all(a.inverse() in s for a in s)
