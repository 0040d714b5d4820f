import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet_wiener.words import (
    LatticePoint,
    LevelCapError,
    Word,
    WordParseError,
    build_vertex_table,
    compare_words,
    format_word,
    iter_words,
    parse_word,
    word_to_point,
)

from conftest import carved_carpet, table


def words(max_level=6):
    return st.integers(1, max_level).flatmap(
        lambda n: st.builds(
            Word,
            st.sampled_from("abcd"),
            st.lists(st.integers(0, 7), min_size=n - 1, max_size=n - 1).map(tuple),
        )
    )


def test_parse_worked_example():
    w = parse_word("a670", 4)
    assert w == Word("a", (6, 7, 0))
    assert w.level == 4


def test_parse_level_one():
    assert parse_word("a", 1) == Word("a", ())


@pytest.mark.parametrize(
    "text, level, position",
    [
        ("a67", 4, 3),
        ("a6700", 4, 4),
        ("e670", 4, 0),
        ("a690", 4, 2),
        ("", 2, 0),
        ("A", 1, 0),
    ],
)
def test_parse_errors_name_position(text, level, position):
    with pytest.raises(WordParseError) as info:
        parse_word(text, level)
    assert info.value.position == position
    if text:
        assert f"position {position}" in str(info.value)


@given(words())
def test_format_round_trip(w):
    assert parse_word(format_word(w), w.level) == w


@pytest.mark.parametrize(
    "text, point",
    [
        ("a670", (0, 5)),
        ("b432", (27, 5)),
        ("a", (0, 0)),
        ("c45", (6, 9)),
        ("d64", (6, 9)),
        ("a41", (5, 2)),
        ("a45", (5, 8)),
    ],
)
def test_word_to_point(text, point):
    assert word_to_point(parse_word(text, len(text))) == point


@given(words())
def test_points_inside_square(w):
    p = word_to_point(w)
    side = 3 ** (w.level - 1)
    assert 0 <= p.x <= side and 0 <= p.y <= side
    assert word_to_point(w) == p


@pytest.mark.parametrize("level", [1, 2, 3, 4, 5])
def test_bottom_left_word_is_origin(level):
    assert word_to_point(Word("a", (0,) * (level - 1))) == (0, 0)


@pytest.mark.parametrize(
    "a, b, expected",
    [("c45", "d64", -1), ("a01", "a10", -1), ("b432", "b432", 0), ("d00", "c77", 1)],
)
def test_compare_words(a, b, expected):
    w1, w2 = parse_word(a, len(a)), parse_word(b, len(b))
    assert compare_words(w1, w2) == expected
    assert compare_words(w2, w1) == -expected


def test_compare_level_mismatch():
    with pytest.raises(ValueError):
        compare_words(parse_word("a0", 2), parse_word("a00", 3))


@pytest.mark.parametrize("level, count", [(1, 4), (2, 16), (3, 96), (4, 688)])
def test_vertex_counts(level, count):
    assert table(level).count == count


def test_level3_count_is_grid_minus_hole():
    # 10x10 lattice points minus the 4 interior points of the central 3x3 hole
    assert table(3).count == 10 * 10 - 4


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_table_matches_brute_force(level):
    best = {}
    for w in iter_words(level):
        p = word_to_point(w)
        if p not in best or w < best[p]:
            best[p] = w
    assert table(level).entries == best


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_point_classes_are_graph_vertices(level):
    assert set(table(level).point_index) == set(carved_carpet(level).nodes)


def test_canonical_of_c45_and_d64():
    t = table(3)
    assert t.lookup((6, 9)) == parse_word("c45", 3)
    assert t.canonical(parse_word("d64", 3)) == parse_word("c45", 3)


@given(words(max_level=5))
def test_canonical_idempotent(w):
    t = table(w.level)
    c = t.canonical(w)
    assert t.canonical(c) == c
    assert word_to_point(c) == word_to_point(w)
    assert compare_words(c, w) <= 0


@pytest.mark.parametrize("level", [2, 3, 4])
def test_canonical_is_minimal_over_all_words(level):
    t = table(level)
    for w in itertools.islice(iter_words(level), 0, None, 7):
        c = t.canonical(w)
        assert word_to_point(c) == word_to_point(w)
        assert compare_words(c, w) <= 0


def test_table_rows_sorted_by_word():
    ws = table(4).words()
    assert ws == sorted(ws)


def test_table_is_deterministic():
    a, b = build_vertex_table(4), build_vertex_table(4)
    assert np.array_equal(a.points, b.points) and np.array_equal(a.digits, b.digits)


def test_level_cap():
    with pytest.raises(LevelCapError):
        build_vertex_table(9)
    assert build_vertex_table(2, max_level=2).count == 16


def test_lattice_point_is_a_tuple():
    assert LatticePoint(1, 2) == (1, 2)
