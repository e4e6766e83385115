
import pytest
from hypothesis import given, strategies as st

from ncdomains.words import (EMPTY, check_word, concat, enumerate_words,
                             reverse, word_key, words_of_lengths)


def test_empty_alphabet_rejected():
    with pytest.raises(ValueError):
        enumerate_words(0, 3)
    with pytest.raises(ValueError):
        enumerate_words(2, -1)


def test_enumeration_order_n2_level2():
    table = enumerate_words(2, 2)
    assert table.words == [(), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert len(table) == 7
    assert table.index[(2, 1)] == 5


def test_counts():
    for n in (1, 2, 3):
        for N in range(5):
            table = enumerate_words(n, N)
            assert len(table) == sum(n**m for m in range(N + 1))
            assert table.max_level_index(N) == len(table)


def test_level_slice():
    table = enumerate_words(2, 3)
    sl = table.level_slice(2)
    assert table.words[sl] == [(1, 1), (1, 2), (2, 1), (2, 2)]
    with pytest.raises(ValueError):
        table.level_slice(4)


def test_graded_lex_is_sorted_by_key():
    table = enumerate_words(3, 3)
    assert table.words == sorted(table.words, key=word_key)


def test_check_word():
    check_word((1, 2), 2)
    with pytest.raises(ValueError):
        check_word((0,), 2)
    with pytest.raises(ValueError):
        check_word((3,), 2)


def test_words_of_lengths():
    ws = words_of_lengths(2, 1, 2)
    assert ws == [(1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]


words_st = st.lists(st.integers(1, 3), max_size=6).map(tuple)


@given(words_st, words_st)
def test_concat_reverse_antihomomorphism(u, v):
    assert reverse(concat(u, v)) == concat(reverse(v), reverse(u))
    assert reverse(reverse(u)) == u


@given(words_st)
def test_reverse_preserves_length(u):
    assert len(reverse(u)) == len(u)
    assert concat(u, EMPTY) == u == concat(EMPTY, u)
