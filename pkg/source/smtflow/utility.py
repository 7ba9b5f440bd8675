# :coding: utf-8

import collections.abc
import hashlib
import math

import numpy
import ujson

#: Mask keeping integers on 64 bits.
_MASK_64 = 0xFFFFFFFFFFFFFFFF


def deep_update(mapping1, mapping2):
    """Recursively update *mapping1* from *mapping2*.

    Contrary to :meth:`dict.update`, this function will attempt to update
    sub-dictionaries defined in both mappings instead of overwriting the value
    defined in *mapping1*::

        >>> deep_update({"A": {"B": 2}}, {"A": {"C": 3}})
        {"A": {"B": 2, "C": 3}}

    :param mapping1: Mapping to update

    :param mapping2: Mapping to update *mapping1* from

    :return: *mapping1* mutated.

    .. note::

        *mapping1* will be mutated, but *mapping2* will not.

    """
    for key, value in mapping2.items():
        if isinstance(value, collections.abc.Mapping):
            current = mapping1.get(key)
            if not isinstance(current, collections.abc.Mapping):
                current = {}
            mapping1[key] = deep_update(current, value)
        else:
            mapping1[key] = value
    return mapping1


def round_half_up(value):
    """Return *value* rounded to the nearest integer, halves rounded up.

    Example::

        >>> round_half_up(2.5)
        3

        >>> round_half_up(-2.5)
        -2

    """
    return int(math.floor(value + 0.5))


def to_nanometers(value):
    """Return integer nanometers from *value* in micrometers."""
    return round_half_up(value * 1000.0)


def to_micrometers(value):
    """Return micrometers from *value* in integer nanometers."""
    return value / 1000.0


def manhattan(point1, point2):
    """Return Manhattan distance between two (x, y) points."""
    return abs(point1[0] - point2[0]) + abs(point1[1] - point2[1])


def centroid(points):
    """Return centroid of integer *points*, rounded to the nearest integer.

    Example::

        >>> centroid([(0, 0), (2000, 0), (4000, 0)])
        (2000, 0)

    :param points: Non empty list of (x, y) integer tuples.

    :return: (x, y) integer tuple.

    """
    count = len(points)
    return (
        round_half_up(sum(point[0] for point in points) / float(count)),
        round_half_up(sum(point[1] for point in points) / float(count)),
    )


def star_length(points, center):
    """Return sum of Manhattan distances from *points* to *center*."""
    return sum(manhattan(point, center) for point in points)


def half_perimeter(points):
    """Return half-perimeter of the bounding box of *points*.

    Example::

        >>> half_perimeter([(0, 0), (2, 0), (0, 5)])
        7

    """
    if len(points) == 0:
        return 0

    xs = [point[0] for point in points]
    ys = [point[1] for point in points]
    return (max(xs) - min(xs)) + (max(ys) - min(ys))


def morton_codes(points, origin=(0, 0)):
    """Return Morton (Z-order) codes of integer *points*.

    Coordinates are shifted by *origin* and bits of both coordinates are
    interleaved, x on even bits and y on odd bits.

    :param points: List of (x, y) integer tuples.

    :param origin: (x, y) integer tuple subtracted from each point so that
        coordinates are non-negative. Default is (0, 0).

    :return: List of integer codes.

    """
    if len(points) == 0:
        return []

    coordinates = numpy.array(points, dtype=numpy.int64)
    coordinates -= numpy.array(origin, dtype=numpy.int64)
    coordinates = numpy.clip(coordinates, 0, None).astype(numpy.uint64)

    codes = (
        _part1by1(coordinates[:, 0])
        | (_part1by1(coordinates[:, 1]) << numpy.uint64(1))
    )
    return [int(code) for code in codes.tolist()]


def _part1by1(values):
    """Spread the lower 32 bits of *values* onto even bit positions.

    Based on the binary magic numbers method from
    http://graphics.stanford.edu/~seander/bithacks.html#InterleaveBMN

    """
    values = values & numpy.uint64(0x00000000FFFFFFFF)
    values = (values | (values << numpy.uint64(16))) & numpy.uint64(
        0x0000FFFF0000FFFF
    )
    values = (values | (values << numpy.uint64(8))) & numpy.uint64(
        0x00FF00FF00FF00FF
    )
    values = (values | (values << numpy.uint64(4))) & numpy.uint64(
        0x0F0F0F0F0F0F0F0F
    )
    values = (values | (values << numpy.uint64(2))) & numpy.uint64(
        0x3333333333333333
    )
    values = (values | (values << numpy.uint64(1))) & numpy.uint64(
        0x5555555555555555
    )
    return values


def morton_order(identifiers, points, origin=(0, 0)):
    """Return *identifiers* sorted by Morton code of *points*.

    Ties are broken by ascending identifier.

    """
    codes = morton_codes(points, origin=origin)
    return [
        identifier for _, identifier in sorted(zip(codes, identifiers))
    ]


def stable_hash(identifier):
    """Return 64-bit hash of *identifier* which is stable across processes.

    The first 8 bytes of the :term:`SHA-1` digest of the UTF-8 encoded
    identifier are read as a big-endian integer.

    """
    digest = hashlib.sha1(identifier.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def splitmix64(value):
    """Return *value* scrambled by the SplitMix64 finalizer."""
    value = (value + 0x9E3779B97F4A7C15) & _MASK_64
    value = ((value ^ (value >> 30)) * 0xBF58476D1CE4E5B9) & _MASK_64
    value = ((value ^ (value >> 27)) * 0x94D049BB133111EB) & _MASK_64
    return value ^ (value >> 31)


def unit_interval(seed, identifier):
    """Return deterministic number in [0, 1) from *seed* and *identifier*.

    The top 53 bits of ``splitmix64(seed XOR stable_hash(identifier))`` are
    divided by 2^53 so that the value is exact and strictly below 1.

    """
    mixed = splitmix64((seed ^ stable_hash(identifier)) & _MASK_64)
    return (mixed >> 11) / float(1 << 53)


def compute_hash(mapping):
    """Return :term:`SHA-1` hexadecimal digest of serialized *mapping*."""
    serialized = ujson.dumps(mapping, sort_keys=True).encode("utf-8")
    return hashlib.sha1(serialized).hexdigest()
