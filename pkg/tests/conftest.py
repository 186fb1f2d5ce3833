"""Shared oracles. These re-derive everything from first principles and share no
code with the package's verifier."""
from collections import Counter
from itertools import combinations

import pytest

# Arc lists of the ten classes, positions v0..v6, typed in independently of the package.
CLASS_TABLE = {
    1: "10 12 23 34 45 56 60",
    2: "10 21 23 34 45 56 60",
    3: "10 12 32 34 45 56 60",
    4: "10 12 23 43 45 56 60",
    5: "10 21 32 34 45 56 60",
    6: "10 21 23 34 54 56 60",
    7: "10 12 32 34 45 65 60",
    8: "10 21 23 43 45 56 60",
    9: "10 21 23 34 45 65 60",
    10: "01 12 23 34 45 56 60",
}
CLASS_TABLE = {c: [(int(p[0]), int(p[1])) for p in s.split()] for c, s in CLASS_TABLE.items()}


def oracle_block_arcs(cls, labels):
    return [(labels[t], labels[h]) for t, h in CLASS_TABLE[cls]]


def oracle_directed_ok(n, blocks, classes, part=None, removed_pairs=()):
    """Arc-exact check of a directed design on K*_n (minus within-part and removed pairs)."""
    part = part or (lambda x: x)
    removed = {frozenset(p) for p in removed_pairs}
    want = Counter(
        (a, b) for a in range(n) for b in range(n)
        if a != b and part(a) != part(b) and frozenset((part(a), part(b))) not in removed
    )
    got = Counter()
    for cls, labels in zip(classes, blocks):
        if len(set(labels)) != 7:
            return False
        got.update(oracle_block_arcs(cls, labels))
    return got == want


def oracle_pairs_ok(n, blocks, part=None, missing=()):
    """Edge-exact check of an undirected design; blocks are (kind, labels)."""
    part = part or (lambda x: x)
    skip = {frozenset(e) for e in missing}
    want = Counter(
        frozenset((a, b)) for a, b in combinations(range(n), 2)
        if part(a) != part(b) and frozenset((a, b)) not in skip
    )
    got = Counter()
    for kind, labels in blocks:
        if len(set(labels)) != len(labels):
            return False
        if kind == "C7":
            got.update(frozenset((labels[j], labels[(j + 1) % 7])) for j in range(7))
        else:
            got.update(frozenset(e) for e in combinations(labels, 2))
    return got == want


def as_pairs(ublocks):
    return [(b.kind, b.labels) for b in ublocks]


@pytest.fixture
def fixture_copy(tmp_path, monkeypatch):
    """A private fixture directory holding copies of the shipped fixtures."""
    import shutil
    from heptad import base_designs
    for f in base_designs.fixture_dir().glob("*.json"):
        shutil.copy(f, tmp_path / f.name)
    monkeypatch.setenv("HEPTAD_FIXTURES", str(tmp_path))
    base_designs.derived_record.cache_clear()
    yield tmp_path
    base_designs.derived_record.cache_clear()
