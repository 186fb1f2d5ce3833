"""The ten oriented heptagons, their canonical forms, and reversal.

A block ``D_i[v0, ..., v6]`` places the class pattern on seven labels. Its
orientation word has one bit per cycle edge: bit ``j`` is ``1`` when the arc
on edge ``{v_j, v_{j+1}}`` points from ``v_j`` to ``v_{j+1}`` (indices mod 7).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import InvalidBlock, NotAHeptagon

# Arc lists by position index, D_1 .. D_10.
CLASS_ARCS: dict[int, tuple[tuple[int, int], ...]] = {
    1: ((1, 0), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)),
    2: ((1, 0), (2, 1), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)),
    3: ((1, 0), (1, 2), (3, 2), (3, 4), (4, 5), (5, 6), (6, 0)),
    4: ((1, 0), (1, 2), (2, 3), (4, 3), (4, 5), (5, 6), (6, 0)),
    5: ((1, 0), (2, 1), (3, 2), (3, 4), (4, 5), (5, 6), (6, 0)),
    6: ((1, 0), (2, 1), (2, 3), (3, 4), (5, 4), (5, 6), (6, 0)),
    7: ((1, 0), (1, 2), (3, 2), (3, 4), (4, 5), (6, 5), (6, 0)),
    8: ((1, 0), (2, 1), (2, 3), (4, 3), (4, 5), (5, 6), (6, 0)),
    9: ((1, 0), (2, 1), (2, 3), (3, 4), (4, 5), (6, 5), (6, 0)),
    10: ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)),
}

Arc = tuple[Hashable, Hashable]


def _word_from_positions(arcs: Iterable[tuple[int, int]]) -> str:
    bits = ["0"] * 7
    for tail, head in arcs:
        if head == (tail + 1) % 7:
            bits[tail] = "1"
        elif tail != (head + 1) % 7:
            raise ValueError(f"arc {(tail, head)} is not a cycle edge")
    return "".join(bits)


def _dihedral_images(word: str) -> list[str]:
    reflected = "".join("1" if b == "0" else "0" for b in reversed(word))
    return [w[k:] + w[:k] for w in (word, reflected) for k in range(7)]


def canonical_word(word: str) -> str:
    """Lexicographically least image of ``word`` under rotation and reflection.

    Reflection reverses the traversal direction, so it reverses the bit order
    and complements every bit.
    """
    if len(word) != 7 or set(word) - {"0", "1"}:
        raise ValueError(f"expected a 7-character 0/1 word, got {word!r}")
    return min(_dihedral_images(word))


@dataclass(frozen=True)
class HeptClass:
    id: int
    word: str

    @property
    def name(self) -> str:
        return f"D{self.id}"

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return CLASS_ARCS[self.id]

    def __str__(self) -> str:
        return self.name


CLASSES: dict[int, HeptClass] = {
    i: HeptClass(i, _word_from_positions(arcs)) for i, arcs in CLASS_ARCS.items()
}
_BY_CANONICAL: dict[str, HeptClass] = {canonical_word(c.word): c for c in CLASSES.values()}


def get_class(key: int | str | HeptClass) -> HeptClass:
    """Look up a class by id, by name ("D8" or "8"), or pass one through."""
    if isinstance(key, HeptClass):
        return key
    if isinstance(key, str):
        text = key.strip().upper().removeprefix("D")
        if not text.isdigit():
            raise KeyError(f"unknown heptagon class {key!r}")
        key = int(text)
    if key not in CLASSES:
        raise KeyError(f"unknown heptagon class D{key}")
    return CLASSES[key]


def class_of_word(word: str) -> HeptClass:
    return _BY_CANONICAL[canonical_word(word)]


def reverse_class(cls: int | str | HeptClass) -> HeptClass:
    c = get_class(cls)
    complement = "".join("1" if b == "0" else "0" for b in c.word)
    return class_of_word(complement)


@dataclass(frozen=True)
class Block:
    """``D_cls[labels]``: a labeled copy of an oriented heptagon."""

    cls: int
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.cls not in CLASSES:
            raise InvalidBlock(f"unknown class id {self.cls}")
        if len(self.labels) != 7:
            raise InvalidBlock(f"a block needs 7 labels, got {len(self.labels)}")
        if len(set(self.labels)) != 7:
            raise InvalidBlock(f"repeated label in {self.labels}")

    def arcs(self) -> frozenset[Arc]:
        return arcs_of_block(self)

    def __str__(self) -> str:
        return f"D{self.cls}[{','.join(map(str, self.labels))}]"


def arcs_of_block(block: Block) -> frozenset[Arc]:
    lab = block.labels
    if len(set(lab)) != 7:
        raise InvalidBlock(f"repeated label in {lab}")
    return frozenset((lab[t], lab[h]) for t, h in CLASS_ARCS[block.cls])


def _cycle_order(arcs: frozenset) -> list:
    neighbours: dict = {}
    for tail, head in arcs:
        if tail == head:
            raise NotAHeptagon(f"loop at {tail!r}")
        neighbours.setdefault(tail, []).append(head)
        neighbours.setdefault(head, []).append(tail)
    if len(neighbours) != 7 or any(len(n) != 2 or n[0] == n[1] for n in neighbours.values()):
        raise NotAHeptagon("underlying graph is not a simple 2-regular graph on 7 vertices")
    start = min(neighbours, key=repr)
    order = [start]
    prev, cur = None, start
    while True:
        a, b = neighbours[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    if len(order) != 7:
        raise NotAHeptagon("underlying graph is disconnected")
    return order


def classify_arcs(arcs: Iterable[Arc]) -> tuple[HeptClass, Block]:
    """Identify the class of an oriented 7-cycle and return a witness labeling."""
    arc_list = list(arcs)
    arc_set = frozenset(arc_list)
    if len(arc_list) != 7 or len(arc_set) != 7:
        raise NotAHeptagon(f"expected 7 distinct arcs, got {len(arc_list)}")
    order = _cycle_order(arc_set)
    word = "".join("1" if (order[j], order[(j + 1) % 7]) in arc_set else "0" for j in range(7))
    cls = class_of_word(word)
    for seq in (order, order[::-1]):
        for k in range(7):
            labels = seq[k:] + seq[:k]
            candidate = Block(cls.id, tuple(labels))
            if arcs_of_block(candidate) == arc_set:
                return cls, candidate
    raise AssertionError("canonical class has no matching labeling")  # pragma: no cover


def dihedral_position_maps() -> list[tuple[int, ...]]:
    """The 14 relabelings of cycle positions preserving the 7-cycle."""
    rot = [tuple((j + k) % 7 for j in range(7)) for k in range(7)]
    return rot + [tuple((k - j) % 7 for j in range(7)) for k in range(7)]


@lru_cache(maxsize=None)
def reversal_map(src: int, dst: int) -> tuple[int, ...]:
    """Position map ``p`` with arcs(D_dst[labels[p]]) == reversed arcs(D_src[labels])."""
    if reverse_class(src).id != dst:
        raise ValueError(f"D{dst} is not the reverse of D{src}")
    labels = tuple(range(7))
    target = frozenset((h, t) for t, h in arcs_of_block(Block(src, labels)))
    for p in dihedral_position_maps():
        if arcs_of_block(Block(dst, p)) == target:
            return p
    raise AssertionError("no reversal map")  # pragma: no cover


def arc_arrays(cls: int, blocks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized arcs_of_block for a ``(B, 7)`` label array: tails and heads, each ``(B, 7)``."""
    pattern = np.array(CLASS_ARCS[cls])
    blocks = np.asarray(blocks)
    return blocks[:, pattern[:, 0]], blocks[:, pattern[:, 1]]


@lru_cache(maxsize=None)
def _word_table() -> np.ndarray:
    """Class id for each of the 128 orientation words, indexed by the word read as bits b_0 b_1 ...."""
    table = np.zeros(128, dtype=np.int64)
    for code in range(128):
        word = "".join(str((code >> j) & 1) for j in range(7))
        table[code] = class_of_word(word).id
    return table


def classify_many(tails: np.ndarray, heads: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Classify many blocks at once from their arcs.

    ``order`` gives, per block, a traversal of the claimed vertex set. A block
    is a heptagon iff its 7 labels are distinct and every traversal edge carries
    exactly one of the block's arcs; the returned id is then read off the arcs.
    Rows that are not heptagons get class 0.
    """
    order = np.asarray(order)
    nxt = np.roll(order, -1, axis=1)
    ok = np.all(np.diff(np.sort(order, axis=1), axis=1) != 0, axis=1)
    code = np.zeros(len(order), dtype=np.int64)
    for j in range(7):
        a = order[:, j : j + 1]
        b = nxt[:, j : j + 1]
        fwd = np.sum((tails == a) & (heads == b), axis=1)
        bwd = np.sum((tails == b) & (heads == a), axis=1)
        ok &= (fwd + bwd) == 1
        code |= fwd.astype(np.int64) << j
    return np.where(ok, _word_table()[code], 0)


def all_words() -> list[str]:
    return [format(code, "07b") for code in range(128)]

