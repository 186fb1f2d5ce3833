import random
from itertools import product

import pytest

from heptad.catalog import (CLASSES, Block, arcs_of_block, canonical_word, classify_arcs,
                            get_class, reversal_map, reverse_class)
from heptad.errors import InvalidBlock, NotAHeptagon

from conftest import CLASS_TABLE, oracle_block_arcs

WORDS = ["".join(bits) for bits in product("01", repeat=7)]


def test_stored_words_match_figure():
    for cls, arcs in CLASS_TABLE.items():
        bits = ["0"] * 7
        for t, h in arcs:
            if h == (t + 1) % 7:
                bits[t] = "1"
        assert CLASSES[cls].word == "".join(bits)


def test_arcs_of_block_d3_letters():
    got = arcs_of_block(Block(3, tuple("abcdefg")))
    assert got == {("b", "a"), ("b", "c"), ("d", "c"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "a")}


def test_arcs_of_block_directed_cycle():
    assert arcs_of_block(Block(10, range(7))) == {(j, (j + 1) % 7) for j in range(7)}


def test_repeated_label_is_invalid():
    with pytest.raises(InvalidBlock):
        Block(1, (0, 0, 1, 2, 3, 4, 5))


def test_all_ones_canonicalizes_to_all_zeros():
    assert canonical_word("1111111") == "0000000"


def test_ten_canonical_forms():
    assert len({canonical_word(w) for w in WORDS}) == 10


def test_canonical_word_idempotent():
    for w in WORDS:
        assert canonical_word(canonical_word(w)) == canonical_word(w)


def test_distinct_classes_have_distinct_canonical_words():
    assert len({canonical_word(c.word) for c in CLASSES.values()}) == 10


@pytest.mark.parametrize("bad", ["010", "01234567", "abcdefg"])
def test_canonical_word_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        canonical_word(bad)


def test_reverse_pairs():
    assert reverse_class(8).id == 9
    assert reverse_class(9).id == 8
    for i in [1, 2, 3, 4, 5, 6, 7, 10]:
        assert reverse_class(i).id == i


def test_reverse_is_involution():
    for c in CLASSES.values():
        assert reverse_class(reverse_class(c)) == c


def test_each_label_has_degree_two():
    for arcs in CLASS_TABLE.values():
        degree = [0] * 7
        for t, h in arcs:
            degree[t] += 1
            degree[h] += 1
        assert degree == [2] * 7


def test_classify_round_trip_d4():
    cls, witness = classify_arcs(arcs_of_block(Block(4, (3, 1, 4, 0, 5, 2, 6))))
    assert cls.id == 4
    assert arcs_of_block(witness) == arcs_of_block(Block(4, (3, 1, 4, 0, 5, 2, 6)))


def test_classify_random_relabelings():
    rng = random.Random(7)
    for cls in range(1, 11):
        for _ in range(30):
            labels = rng.sample(range(50), 7)
            found, witness = classify_arcs(oracle_block_arcs(cls, labels))
            assert found.id == cls
            assert set(oracle_block_arcs(cls, labels)) == arcs_of_block(witness)


def test_disconnected_arcs_are_not_a_heptagon():
    arcs = {(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)}
    with pytest.raises(NotAHeptagon):
        classify_arcs(arcs)


def test_antiparallel_pair_is_not_a_heptagon():
    arcs = {(0, 1), (1, 0), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)}
    with pytest.raises(NotAHeptagon):
        classify_arcs(arcs)


def test_flipping_one_arc_never_keeps_the_labeled_d8():
    labels = (10, 11, 12, 13, 14, 15, 16)
    original = arcs_of_block(Block(8, labels))
    for arc in original:
        flipped = (original - {arc}) | {(arc[1], arc[0])}
        cls, witness = classify_arcs(flipped)
        assert arcs_of_block(witness) != original


def test_complement_symmetry_over_all_words():
    # a word and its complement land in one class iff the class is self-reverse
    for w in WORDS:
        comp = "".join("1" if b == "0" else "0" for b in w)
        same = canonical_word(w) == canonical_word(comp)
        cls = next(c for c in CLASSES.values() if canonical_word(c.word) == canonical_word(w))
        assert same == (reverse_class(cls) == cls)


def test_reversal_map_reverses_arcs():
    for cls in range(1, 11):
        dst = reverse_class(cls).id
        p = reversal_map(cls, dst)
        labels = tuple(range(20, 27))
        rev = {(h, t) for t, h in oracle_block_arcs(cls, labels)}
        assert set(oracle_block_arcs(dst, [labels[i] for i in p])) == rev


def test_get_class_names():
    assert get_class("D8").id == 8
    assert get_class("d10").id == 10
    assert get_class(3).name == "D3"
    with pytest.raises(KeyError):
        get_class("D11")
