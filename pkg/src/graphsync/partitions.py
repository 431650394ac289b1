"""Partitions, matched partitions and the polydiagonal subspaces they define.

A polydiagonal subspace is stored as a canonical *signed labeling*: one int
per cell, ``0`` for a cell pinned to zero and ``+k`` / ``-k`` for a cell
carrying ``+x_k`` / ``-x_k`` of the k-th free symbol (k >= 1).  Canonical
means symbols are numbered 1, 2, ... in order of first appearance when the
cells are scanned in order, and every symbol first appears with sign ``+``.
Two labelings denote the same subspace iff their canonical forms agree.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence


class DescriptorError(ValueError):
    pass


def canonicalize(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel symbols by first appearance and make each first sign positive."""
    remap: dict[int, int] = {}
    out = []
    for v in labels:
        if v == 0:
            out.append(0)
            continue
        key = abs(v)
        if key not in remap:
            remap[key] = (len(remap) + 1) * (1 if v > 0 else -1)
        r = remap[key]
        out.append(r if v > 0 else -r)
    return tuple(out)


def symbol_name(k: int) -> str:
    """1 -> 'a', 26 -> 'z', 27 -> 'aa', ..."""
    letters = string.ascii_lowercase
    s = ""
    while k > 0:
        k, r = divmod(k - 1, 26)
        s = letters[r] + s
    return s


@dataclass(frozen=True)
class SubspaceDescriptor:
    """A polydiagonal subspace of V^n in canonical signed-label form."""

    labels: tuple[int, ...]

    def __post_init__(self):
        if canonicalize(self.labels) != self.labels:
            raise DescriptorError(f"labels {self.labels} are not canonical; use from_labels()")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "SubspaceDescriptor":
        return cls(canonicalize(labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def kind(self) -> str:
        return "plain" if all(v > 0 for v in self.labels) else "matched"

    @property
    def is_plain(self) -> bool:
        return self.kind == "plain"

    @cached_property
    def free_dim(self) -> int:
        return max((abs(v) for v in self.labels), default=0)

    @cached_property
    def symbol_cells(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Per symbol, the cells carrying it with sign + and with sign -."""
        plus: list[list[int]] = [[] for _ in range(self.free_dim)]
        minus: list[list[int]] = [[] for _ in range(self.free_dim)]
        for i, v in enumerate(self.labels):
            if v > 0:
                plus[v - 1].append(i)
            elif v < 0:
                minus[-v - 1].append(i)
        return tuple((tuple(p), tuple(m)) for p, m in zip(plus, minus))

    @cached_property
    def zero_cells(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.labels) if v == 0)

    @cached_property
    def is_matched_partition(self) -> bool:
        """True iff the labeling comes from a matched partition.

        Every nonzero class must have a nonempty partner class; a labeling
        such as ``a,0,0`` is polydiagonal but neither plain nor matched.
        """
        if self.is_plain:
            return False
        return all(p and m for p, m in self.symbol_cells)

    def classes(self) -> list[tuple[str, tuple[int, ...]]]:
        """Named cell classes: ``A``, ``B``, ... (plain) or ``A``, ``-A``, ..., ``A0``."""
        out = []
        for k, (p, m) in enumerate(self.symbol_cells, 1):
            name = symbol_name(k).upper()
            out.append((name, p))
            if not self.is_plain:
                out.append(("-" + name, m))
        if not self.is_plain:
            out.append(("A0", self.zero_cells))
        return out

    def render(self) -> str:
        toks = []
        for v in self.labels:
            if v == 0:
                toks.append("0")
            elif v > 0:
                toks.append(symbol_name(v))
            else:
                toks.append("-" + symbol_name(-v))
        return ",".join(toks)

    def tuple_str(self) -> str:
        return "(" + self.render().replace(",", ", ") + ")"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SubspaceDescriptor({self.render()!r})"

    def sort_key(self):
        return self.render()


def parse_descriptor(text: str, n: int | None = None) -> SubspaceDescriptor:
    """Parse ``a,b,-a,0``-style strings (parentheses and spaces allowed)."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    toks = [t.strip().replace("−", "-") for t in body.split(",")]
    if n is not None and len(toks) != n:
        raise DescriptorError(f"expected {n} tokens, got {len(toks)} in {text!r}")
    ids: dict[str, int] = {}
    raw = []
    for t in toks:
        if t == "0":
            raw.append(0)
            continue
        neg = t.startswith("-")
        lab = t[1:] if neg else t
        if not lab:
            raise DescriptorError(f"empty label in {text!r}")
        if not lab.isalnum() or lab == "0":
            raise DescriptorError(f"bad label {t!r} in {text!r}")
        k = ids.setdefault(lab, len(ids) + 1)
        raw.append(-k if neg else k)
    return SubspaceDescriptor.from_labels(raw)


def full_space(n: int) -> SubspaceDescriptor:
    return SubspaceDescriptor(tuple(range(1, n + 1)))


def zero_space(n: int) -> SubspaceDescriptor:
    return SubspaceDescriptor((0,) * n)


def diagonal(n: int) -> SubspaceDescriptor:
    return SubspaceDescriptor((1,) * n)


# --------------------------------------------------------------------------
# Partitions and matched partitions


@dataclass(frozen=True)
class Partition:
    """Set partition stored as a restricted-growth string (block id per cell)."""

    rgs: tuple[int, ...]

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(max(self.rgs) + 1)]
        for i, b in enumerate(self.rgs):
            out[b].append(i)
        return tuple(tuple(b) for b in out)

    @property
    def nblocks(self) -> int:
        return max(self.rgs) + 1

    def descriptor(self) -> SubspaceDescriptor:
        return SubspaceDescriptor(tuple(b + 1 for b in self.rgs))


@dataclass(frozen=True)
class MatchedPartition:
    """A partition plus a sign matching on its blocks.

    ``zero_block`` is the block pinned to zero (``None`` when A0 is empty);
    ``pairs`` lists ``(plus_block, minus_block)`` with ``plus_block`` the
    block seen first in cell order.
    """

    partition: Partition
    zero_block: int | None
    pairs: tuple[tuple[int, int], ...]

    @cached_property
    def block_labels(self) -> tuple[int, ...]:
        lab = [0] * self.partition.nblocks
        for k, (p, m) in enumerate(self.pairs, 1):
            lab[p] = k
            lab[m] = -k
        return tuple(lab)

    def descriptor(self) -> SubspaceDescriptor:
        bl = self.block_labels
        return SubspaceDescriptor(tuple(bl[b] for b in self.partition.rgs))

    @property
    def nclasses(self) -> int:
        """Class count including an empty A0 when present (always odd)."""
        return self.partition.nblocks + (1 if self.zero_block is None else 0)


def enumerate_rgs(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth strings of length n in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = [0] * n

    def rec(i: int, mx: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(mx + 2):
            a[i] = v
            yield from rec(i + 1, max(mx, v))

    a[0] = 0
    yield from rec(1, 0)


def enumerate_partitions(n: int) -> Iterator[Partition]:
    for r in enumerate_rgs(n):
        yield Partition(r)


def perfect_matchings(items: Sequence[int]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Perfect matchings of a sorted sequence; the smallest item picks its partner."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest)):
        partner = rest[k]
        for m in perfect_matchings(rest[:k] + rest[k + 1:]):
            yield ((first, partner),) + m


def matchings_of(p: Partition) -> Iterator[MatchedPartition]:
    b = p.nblocks
    blocks = tuple(range(b))
    if b % 2 == 1:
        for z in blocks:
            for m in perfect_matchings(blocks[:z] + blocks[z + 1:]):
                yield MatchedPartition(p, z, m)
    else:
        for m in perfect_matchings(blocks):
            yield MatchedPartition(p, None, m)


def enumerate_matched_partitions(n: int) -> Iterator[MatchedPartition]:
    for p in enumerate_partitions(n):
        yield from matchings_of(p)


_BLOCK_LABELINGS: dict[int, list[tuple[int, ...]]] = {}


def block_labelings(b: int) -> list[tuple[int, ...]]:
    """Signed block labels for every matching of b blocks, in enumeration order."""
    got = _BLOCK_LABELINGS.get(b)
    if got is None:
        p = Partition(tuple(range(b)))
        got = [m.block_labels for m in matchings_of(p)]
        _BLOCK_LABELINGS[b] = got
    return got


def enumerate_matched_labels(n: int) -> Iterator[tuple[int, ...]]:
    """Canonical signed labelings of all matched partitions (same order as above)."""
    for r in enumerate_rgs(n):
        for bl in block_labelings(max(r) + 1):
            yield tuple([bl[x] for x in r])


def trusted(labels: tuple[int, ...]) -> SubspaceDescriptor:
    """Wrap labels already known to be canonical, skipping the check."""
    d = object.__new__(SubspaceDescriptor)
    object.__setattr__(d, "labels", labels)
    return d


def bell_numbers(nmax: int) -> list[int]:
    """Bell numbers B_0..B_nmax via the Bell triangle."""
    out = [1]
    row = [1]
    for _ in range(nmax):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        out.append(row[0])
    return out


# --------------------------------------------------------------------------
# Constraint closure


class SignedUnionFind:
    """Union-find over cells with relative signs: tracks x_i = s * x_root."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.sign = [1] * n
        self.zero = [False] * n

    def find(self, i: int) -> tuple[int, int]:
        path = []
        while self.parent[i] != i:
            path.append(i)
            i = self.parent[i]
        root = i
        # compress: walk back accumulating sign to root
        acc = 1
        for j in reversed(path):
            acc *= self.sign[j]
            self.sign[j] = acc
            self.parent[j] = root
        return root, (self.sign[path[0]] if path else 1)

    def union(self, i: int, j: int, s: int) -> None:
        """Impose x_i = s * x_j."""
        ri, si = self.find(i)
        rj, sj = self.find(j)
        rel = si * s * sj  # x_ri = rel * x_rj
        if ri == rj:
            if rel == -1:
                self.zero[ri] = True
            return
        self.parent[ri] = rj
        self.sign[ri] = rel
        self.zero[rj] = self.zero[rj] or self.zero[ri]

    def set_zero(self, i: int) -> None:
        self.zero[self.find(i)[0]] = True

    def add_descriptor(self, W: SubspaceDescriptor) -> None:
        for p, m in W.symbol_cells:
            cells = p + m
            c0 = cells[0]
            for c in cells[1:]:
                self.union(c, c0, 1 if W.labels[c] == W.labels[c0] else -1)
        for c in W.zero_cells:
            self.set_zero(c)

    def descriptor(self) -> SubspaceDescriptor:
        raw = []
        for i in range(len(self.parent)):
            r, s = self.find(i)
            raw.append(0 if self.zero[r] else s * (r + 1))
        return SubspaceDescriptor.from_labels(raw)


def intersect(W1: SubspaceDescriptor, W2: SubspaceDescriptor) -> SubspaceDescriptor:
    if W1.n != W2.n:
        raise DescriptorError("descriptors over different cell counts")
    uf = SignedUnionFind(W1.n)
    uf.add_descriptor(W1)
    uf.add_descriptor(W2)
    return uf.descriptor()


def contains(W1: SubspaceDescriptor, W2: SubspaceDescriptor) -> bool:
    """True iff the subspace of W2 lies inside the subspace of W1."""
    if W1.n != W2.n:
        raise DescriptorError("descriptors over different cell counts")
    x = W2.labels  # generic element of W2: x_i = sign * symbol
    for c in W1.zero_cells:
        if x[c] != 0:
            return False
    for p, m in W1.symbol_cells:
        ref = x[p[0]]
        if any(x[c] != ref for c in p) or any(x[c] != -ref for c in m):
            return False
    return True
