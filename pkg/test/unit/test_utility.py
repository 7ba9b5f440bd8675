# :coding: utf-8

import pytest

import smtflow.utility


@pytest.mark.parametrize("mapping1, mapping2, expected", [
    ({"A": 1}, {"B": 2}, {"A": 1, "B": 2}),
    ({"A": {"B": 2}}, {"A": {"C": 3}}, {"A": {"B": 2, "C": 3}}),
    ({"A": {"B": 2}}, {"A": 5}, {"A": 5}),
    ({"A": 5}, {"A": {"B": 2}}, {"A": {"B": 2}}),
], ids=[
    "simple",
    "nested",
    "overwrite-mapping",
    "overwrite-value",
])
def test_deep_update(mapping1, mapping2, expected):
    """Recursively update mapping."""
    assert smtflow.utility.deep_update(mapping1, mapping2) == expected


@pytest.mark.parametrize("value, expected", [
    (2.5, 3),
    (2.49, 2),
    (-2.5, -2),
    (18.40216, 18),
    (0.0, 0),
], ids=[
    "half",
    "below-half",
    "negative-half",
    "delay",
    "zero",
])
def test_round_half_up(value, expected):
    """Round values with halves rounded up."""
    assert smtflow.utility.round_half_up(value) == expected


def test_units():
    """Convert between micrometers and nanometers."""
    assert smtflow.utility.to_nanometers(1.2346) == 1235
    assert smtflow.utility.to_nanometers(0.0004) == 0
    assert smtflow.utility.to_micrometers(1500) == 1.5


def test_centroid():
    """Compute centroid of points."""
    assert smtflow.utility.centroid(
        [(0, 0), (2000, 0), (4000, 0)]
    ) == (2000, 0)
    assert smtflow.utility.centroid([(0, 0), (1, 0)]) == (1, 0)


def test_star_length():
    """Compute star length to a center."""
    assert smtflow.utility.star_length(
        [(0, 0), (2000, 0), (4000, 1000)], (2000, 0)
    ) == 2000 + 0 + 3000


@pytest.mark.parametrize("points, expected", [
    ([(0, 0), (3000, 4000)], 7000),
    ([(0, 0), (2000, 0), (0, 5000)], 7000),
    ([(1000, 1000), (1000, 1000)], 0),
    ([], 0),
], ids=[
    "two-points",
    "three-points",
    "coincident",
    "empty",
])
def test_half_perimeter(points, expected):
    """Compute half-perimeter of bounding box."""
    assert smtflow.utility.half_perimeter(points) == expected


def test_morton_codes():
    """Interleave bits of coordinates."""
    assert smtflow.utility.morton_codes(
        [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (3, 3)]
    ) == [0, 1, 2, 3, 4, 15]


def test_morton_codes_with_origin():
    """Shift coordinates by origin before interleaving."""
    assert smtflow.utility.morton_codes(
        [(10, 10), (11, 11)], origin=(10, 10)
    ) == [0, 3]


def test_morton_codes_empty():
    """Return no code for no point."""
    assert smtflow.utility.morton_codes([]) == []


def test_morton_order():
    """Sort identifiers in Morton order, ties broken by identifier."""
    assert smtflow.utility.morton_order(
        ["c", "b", "a", "d"],
        [(1, 1), (0, 0), (0, 0), (1, 0)]
    ) == ["a", "b", "d", "c"]


def test_stable_hash():
    """Hash identifiers from the SHA-1 digest."""
    # sha1("") = da39a3ee5e6b4b0d...
    assert smtflow.utility.stable_hash("") == 0xda39a3ee5e6b4b0d
    assert smtflow.utility.stable_hash("n1") == (
        smtflow.utility.stable_hash("n1")
    )
    assert smtflow.utility.stable_hash("n1") != (
        smtflow.utility.stable_hash("n2")
    )


def test_splitmix64():
    """Scramble values on 64 bits."""
    assert smtflow.utility.splitmix64(0) == 0xe220a8397b1dcdaf

    for value in [1, 2 ** 63, 2 ** 64 - 1]:
        assert 0 <= smtflow.utility.splitmix64(value) < 2 ** 64


def test_unit_interval():
    """Return deterministic values in [0, 1)."""
    values = [
        smtflow.utility.unit_interval(seed, "n{}".format(index))
        for seed in [0, 1, 2 ** 64 - 1]
        for index in range(100)
    ]

    assert all(0.0 <= value < 1.0 for value in values)
    assert len(set(values)) > 250
    assert smtflow.utility.unit_interval(3, "n1") == (
        smtflow.utility.unit_interval(3, "n1")
    )


def test_compute_hash():
    """Compute hash independently of key order."""
    assert smtflow.utility.compute_hash({"a": 1, "b": [1, 2]}) == (
        smtflow.utility.compute_hash({"b": [1, 2], "a": 1})
    )
    assert smtflow.utility.compute_hash({"a": 1}) != (
        smtflow.utility.compute_hash({"a": 2})
    )
