"""Geometry of the Hamming torus: vertices, subtori, distances, enclosings.

The Hamming torus H(d, n) has vertex set {0..n-1}^d with an edge between two
vertices whenever they differ in exactly one coordinate, so each axis line of
n vertices is a clique and every vertex has degree d*(n-1).

A subtorus is the vertex set obtained by fixing some coordinates and leaving
the rest free.  Subtori are the shapes that threshold-2 bootstrap growth
produces, and the whole closure algebra in `spanning` is built from the three
primitives here: distance between subtori, the smallest enclosing subtorus of
a pair, and containment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BudgetExceededError

Vertex = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Dimensions:
    """Shape of a Hamming torus: d coordinates, each ranging over {0..n-1}."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"torus needs d >= 2 coordinates, got d={self.d}")
        if self.n < 2:
            raise ValueError(f"torus needs n >= 2 values per axis, got n={self.n}")

    @property
    def volume(self) -> int:
        # exact big integer, n**d routinely exceeds 64 bits
        return self.n**self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d


def check_vertex(dims: Dimensions, v) -> Vertex:
    """Validate coordinates and return the vertex as a plain tuple of ints."""
    t = tuple(int(c) for c in v)
    if len(t) != dims.d:
        raise ValueError(f"vertex {t} has {len(t)} coordinates, expected {dims.d}")
    for c in t:
        if not 0 <= c < dims.n:
            raise ValueError(f"vertex {t} has coordinate {c} outside [0, {dims.n})")
    return t


@dataclass(frozen=True)
class Subtorus:
    """An axis-aligned subtorus: some coordinates fixed to values, the rest free.

    `fixed` is canonically stored as a tuple of (index, value) pairs sorted by
    index, so equality, hashing, and ordering are structural.
    """

    dims: Dimensions
    fixed: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted((int(i), int(v)) for i, v in self.fixed))
        seen = set()
        for i, v in pairs:
            if not 0 <= i < self.dims.d:
                raise ValueError(f"fixed index {i} outside [0, {self.dims.d})")
            if not 0 <= v < self.dims.n:
                raise ValueError(f"fixed value {v} outside [0, {self.dims.n})")
            if i in seen:
                raise ValueError(f"coordinate {i} fixed more than once")
            seen.add(i)
        object.__setattr__(self, "fixed", pairs)

    @property
    def dimension(self) -> int:
        return self.dims.d - len(self.fixed)

    @property
    def volume(self) -> int:
        return self.dims.n**self.dimension

    def fixed_map(self) -> dict[int, int]:
        return dict(self.fixed)

    def canonical_key(self):
        """Total order used for deterministic merge scheduling."""
        return (self.dims.d - self.dimension, self.fixed)


def whole_torus(dims: Dimensions) -> Subtorus:
    return Subtorus(dims, ())


def point_subtorus(dims: Dimensions, v) -> Subtorus:
    """The zero-dimensional subtorus holding exactly one vertex."""
    t = check_vertex(dims, v)
    return Subtorus(dims, tuple(enumerate(t)))


def make_subtorus(dims: Dimensions, fixed) -> Subtorus:
    """Build a subtorus from a {coordinate index: value} mapping."""
    return Subtorus(dims, tuple(fixed.items()))


def vertex_distance(u, v) -> int:
    """Hamming distance: the number of differing coordinates."""
    if len(u) != len(v):
        raise ValueError(f"vertices have different lengths {len(u)} and {len(v)}")
    return sum(1 for a, b in zip(u, v) if a != b)


def subtorus_distance(s: Subtorus, t: Subtorus) -> int:
    """Minimum Hamming distance between the two vertex sets.

    Equals the number of coordinates fixed by both subtori at differing
    values: every shared fixed coordinate that disagrees forces one mismatch,
    and all the other coordinates can be matched.
    """
    if s.dims != t.dims:
        raise ValueError(f"subtori live on different tori {s.dims} and {t.dims}")
    tm = t.fixed_map()
    return sum(1 for i, v in s.fixed if i in tm and tm[i] != v)


def point_distance(s: Subtorus, v) -> int:
    """Hamming distance from a vertex to the nearest vertex of the subtorus."""
    t = check_vertex(s.dims, v)
    return sum(1 for i, val in s.fixed if t[i] != val)


def enclosing(s: Subtorus, t: Subtorus) -> Subtorus:
    """Smallest subtorus containing both arguments.

    Keeps exactly the coordinates fixed by both at equal values; any other
    coordinate already takes at least two values across the union, hence must
    be free.
    """
    if s.dims != t.dims:
        raise ValueError(f"subtori live on different tori {s.dims} and {t.dims}")
    tm = t.fixed_map()
    kept = tuple((i, v) for i, v in s.fixed if tm.get(i) == v)
    return Subtorus(s.dims, kept)


def contains(s: Subtorus, x) -> bool:
    """Whether the subtorus contains a vertex or a whole subtorus."""
    if isinstance(x, Subtorus):
        if s.dims != x.dims:
            raise ValueError(f"subtori live on different tori {s.dims} and {x.dims}")
        xm = x.fixed_map()
        return all(i in xm and xm[i] == v for i, v in s.fixed)
    return point_distance(s, x) == 0


def vertices(s: Subtorus, budget: int) -> list[Vertex]:
    """All vertices of the subtorus, row-major over the free coordinates.

    The caller supplies an explicit enumeration budget; a subtorus with more
    than `budget` vertices raises before any work is done.
    """
    if s.volume > budget:
        raise BudgetExceededError(
            f"subtorus has {s.volume} vertices, budget is {budget}"
        )
    fm = s.fixed_map()
    axes = [(fm[i],) if i in fm else range(s.dims.n) for i in range(s.dims.d)]
    return list(itertools.product(*axes))
