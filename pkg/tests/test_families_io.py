import random

import pytest

from zlq import Family, FamilyFormatError, parse_family, serialize_family
from zlq.families import FORMAT_HEADER

from conftest import random_family


def test_serialize_reference_shape():
    fam = Family.from_edges(3, [((0, 1, 2), (0, 3, 1)), ((1, 3, 2), (2, 3, 0))])
    text = serialize_family(fam)
    lines = text.splitlines()
    assert lines[0] == FORMAT_HEADER
    assert lines[1] == "q 3"
    assert lines[2:] == ["edge 0 1 2 ; 0 3 1", "edge 1 3 2 ; 2 3 0"]
    assert text.endswith("\n")


def test_empty_family_serializes_header_only():
    text = serialize_family(Family.from_edges(4, []))
    assert text == f"{FORMAT_HEADER}\nq 4\n"
    assert parse_family(text) == Family.from_edges(4, [])


def test_round_trip_is_identity():
    rng = random.Random(11)
    for _ in range(50):
        fam = random_family(rng, rng.choice([3, 4, 5]), 6)
        text = serialize_family(fam)
        assert parse_family(text) == fam
        assert serialize_family(parse_family(text)) == text


def test_parse_accepts_either_half_order():
    swapped = "q 3\nedge 2 3 0 ; 1 3 2\nedge 3 0 1 ; 0 1 2\n"
    fam = parse_family(swapped)
    assert fam.edges == (((0, 1, 2), (0, 3, 1)), ((1, 3, 2), (2, 3, 0)))


def test_parse_ignores_comments_and_blanks():
    text = "# a comment\n\nq 3  # trailing\nedge 0 1 2 ; 0 3 1\n"
    assert len(parse_family(text)) == 1


@pytest.mark.parametrize(
    "body,fragment",
    [
        ("q 3\nedge 0 1 0 ; 2 3 1\n", "1-edge"),  # cell (01,0) is occupied
        ("q 3\nedge 0 1 2 ; 0 1 2\n", "distinct"),
        ("q 3\nedge 0 1 2 ; 0 3 1\nedge 0 3 1 ; 0 1 2\n", "duplicate 2-edge"),
        ("q 3\nedge 0 1 9 ; 2 3 1\n", "column"),
        ("q 3\nedge 0 0 2 ; 2 3 1\n", "differ"),
        ("q 3\nedge 0 1 2 0 3 1\n", "edge line"),
        ("q 3\nwidget 1 2\n", "unrecognized"),
        ("edge 0 1 2 ; 0 3 1\n", "before q"),
        ("q 3\nq 4\n", "duplicate q"),
        ("q one\n", "integer"),
        ("q 1\n", "at least 2"),
        ("# nothing\n", "no q line"),
    ],
)
def test_parse_errors(body, fragment):
    with pytest.raises(FamilyFormatError) as err:
        parse_family(body)
    assert fragment in str(err.value)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(FamilyFormatError) as err:
        parse_family("q 3\nedge 0 1 2 ; 0 3 1\nedge 0 1 0 ; 2 3 1\n")
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_double_digit_vertices_round_trip():
    # decimal vertex labels keep boards beyond q=9 representable
    fam = Family.from_edges(10, [((0, 10, 5), (1, 9, 10))])
    text = serialize_family(fam)
    assert "edge 0 10 5 ; 1 9 10" in text
    assert parse_family(text) == fam
