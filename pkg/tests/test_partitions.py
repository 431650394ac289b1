import itertools

import pytest
from hypothesis import given, strategies as st

from graphsync.partitions import (
    DescriptorError,
    SignedUnionFind,
    SubspaceDescriptor,
    bell_numbers,
    canonicalize,
    contains,
    enumerate_matched_labels,
    enumerate_matched_partitions,
    enumerate_partitions,
    enumerate_rgs,
    full_space,
    intersect,
    parse_descriptor,
    symbol_name,
    zero_space,
)

from strategies import signed_descriptors

P = parse_descriptor


def _brute_partitions(n):
    # every map cells -> block ids, up to relabeling
    return {canonicalize([x + 1 for x in f]) for f in itertools.product(range(n), repeat=n)}


def _brute_matched(n):
    out = set()
    for f in itertools.product(range(-n, n + 1), repeat=n):
        W = SubspaceDescriptor.from_labels(f)
        if W.is_plain:
            continue
        if W.is_matched_partition:
            out.add(W.labels)
    return out


def test_bell_numbers():
    assert bell_numbers(8) == [1, 1, 2, 5, 15, 52, 203, 877, 4140]


@pytest.mark.parametrize("n", range(1, 7))
def test_partition_count_is_bell(n):
    got = [p.rgs for p in enumerate_partitions(n)]
    assert len(got) == len(set(got)) == bell_numbers(n)[n]


@pytest.mark.parametrize("n", range(1, 5))
def test_partitions_match_brute_force(n):
    got = {p.descriptor().labels for p in enumerate_partitions(n)}
    assert got == _brute_partitions(n)


def test_rgs_lexicographic():
    seq = list(enumerate_rgs(4))
    assert seq == sorted(seq) and seq[0] == (0, 0, 0, 0) and seq[-1] == (0, 1, 2, 3)


def test_rgs_rejects_zero():
    with pytest.raises(ValueError):
        list(enumerate_rgs(0))


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 7), (4, 29), (5, 136)])
def test_matched_counts(n, count):
    ms = [m.descriptor().labels for m in enumerate_matched_partitions(n)]
    assert len(ms) == len(set(ms)) == count


@pytest.mark.parametrize("n", range(1, 5))
def test_matched_match_brute_force(n):
    assert {m.descriptor().labels for m in enumerate_matched_partitions(n)} == _brute_matched(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_fast_matched_labels_agree(n):
    slow = [m.descriptor().labels for m in enumerate_matched_partitions(n)]
    assert list(enumerate_matched_labels(n)) == slow


def test_small_matched_lists():
    assert [m.descriptor().render() for m in enumerate_matched_partitions(1)] == ["0"]
    assert sorted(m.descriptor().render() for m in enumerate_matched_partitions(2)) == ["0,0", "a,-a"]


def test_matched_class_counts_are_odd():
    for m in enumerate_matched_partitions(5):
        assert m.nclasses % 2 == 1


def test_parse_plain():
    W = P("a,b,a", 3)
    assert W.is_plain and dict(W.classes()) == {"A": (0, 2), "B": (1,)}


def test_parse_matched():
    W = P("a,0,-a", 3)
    assert not W.is_plain and W.is_matched_partition
    assert dict(W.classes()) == {"A": (0,), "-A": (2,), "A0": (1,)}
    assert P("-a,0,a") == W


def test_parse_forms():
    assert P("(a, b, -a)") == P("x,y,-x") == P("a,b,−a")
    assert P("foo,bar,foo").render() == "a,b,a"


@pytest.mark.parametrize("text,n", [("a,b", 3), ("a,,b", None), ("a,-,b", None), ("a,b!,c", None)])
def test_parse_rejects(text, n):
    with pytest.raises(DescriptorError):
        P(text, n)


def test_noncanonical_constructor_rejected():
    with pytest.raises(DescriptorError):
        SubspaceDescriptor((2, 1))


def test_polydiagonal_not_matched():
    W = P("a,0,0")
    assert not W.is_plain and not W.is_matched_partition


def test_symbol_names():
    assert [symbol_name(k) for k in (1, 2, 26, 27, 28)] == ["a", "b", "z", "aa", "ab"]


def test_intersect_examples():
    assert intersect(P("a,b,a"), P("a,a,b")) == P("a,a,a")
    assert intersect(P("a,0,-a"), P("a,b,a")) == P("0,0,0")
    assert intersect(P("a,b,-a,-b"), P("a,b,c,d")) == P("a,b,-a,-b")


def test_contains_examples():
    assert contains(P("a,b,c"), P("a,b,a"))
    assert not contains(P("a,b,a"), P("a,0,-a"))
    assert contains(P("a,b,c"), P("a,0,-a"))
    assert contains(P("a,b,-a,-b"), P("a,a,-a,-a"))
    assert not contains(P("a,a,-a,-a"), P("a,b,-a,-b"))


def test_different_sizes_rejected():
    with pytest.raises(DescriptorError):
        intersect(P("a,b"), P("a,b,c"))


def _point(W, vals):
    return [0 if v == 0 else (vals[abs(v) - 1] if v > 0 else -vals[abs(v) - 1]) for v in W.labels]


def _satisfies(W, x):
    # x lies in W iff it meets W's constraints
    for i, v in enumerate(W.labels):
        if v == 0 and x[i] != 0:
            return False
    for p, m in W.symbol_cells:
        ref = x[(p + m)[0]] * (1 if p else -1)
        if any(x[c] != ref for c in p) or any(x[c] != -ref for c in m):
            return False
    return True


@given(signed_descriptors(6))
def test_canonical_roundtrip(W):
    assert P(W.render()) == W
    assert SubspaceDescriptor.from_labels([-v for v in W.labels]) == W


@given(signed_descriptors(6), signed_descriptors(6))
def test_intersection_is_meet(W1, W2):
    M = intersect(W1, W2)
    assert contains(W1, M) and contains(W2, M)
    assert intersect(W1, W2) == intersect(W2, W1)
    assert intersect(M, M) == M
    assert (contains(W1, W2)) == (intersect(W1, W2) == W2)


@given(signed_descriptors(5), signed_descriptors(5), signed_descriptors(5))
def test_intersection_associative(A, B, C):
    assert intersect(intersect(A, B), C) == intersect(A, intersect(B, C))


@given(signed_descriptors(5), signed_descriptors(5))
def test_contains_agrees_with_generic_point(W1, W2):
    # distinct primes make accidental equalities impossible
    x = _point(W2, [2, 3, 5, 7, 11])
    assert contains(W1, W2) == _satisfies(W1, x)


@given(signed_descriptors(6))
def test_full_and_zero_bound_everything(W):
    assert contains(full_space(6), W) and contains(W, zero_space(6))


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.sampled_from([1, -1])), max_size=8))
def test_union_find_closure_satisfied(cons):
    uf = SignedUnionFind(6)
    for i, j, s in cons:
        uf.union(i, j, s)
    W = uf.descriptor()
    x = _point(W, [2, 3, 5, 7, 11, 13])
    for i, j, s in cons:
        assert x[i] == s * x[j]
