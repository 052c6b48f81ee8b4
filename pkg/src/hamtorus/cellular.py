"""Bootstrap dynamics on the dense grid: synchronous rounds to the fixpoint.

A closed vertex opens when at least `theta` of its neighbors are open; open
vertices never close.  Two engines compute the same fixpoint: `evolve`
rescans the whole grid each round using axis sums, `evolve_incremental`
keeps one open counter per axis line and only rechecks vertices on lines
that changed.  Outputs and productive round counts agree exactly.  Both are
oracles for the fast subtorus closure in `spanning`, so they stay simple and
are only meant for grids that fit the dense budget.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceededError
from .torus import Dimensions, Vertex, check_vertex

DENSE_BUDGET = 10**8  # vertex visits per evolve call


class Configuration:
    """Open-vertex set stored as a flat boolean array over row-major rank."""

    def __init__(self, dims: Dimensions, open_vertices=()):
        if dims.volume > DENSE_BUDGET:
            raise BudgetExceededError(
                f"dense grid with {dims.volume} vertices exceeds budget {DENSE_BUDGET}"
            )
        self.dims = dims
        self.open = np.zeros(dims.volume, dtype=bool)
        for v in open_vertices:
            self.open[self.rank(v)] = True

    @classmethod
    def _from_array(cls, dims: Dimensions, flat: np.ndarray) -> "Configuration":
        c = cls.__new__(cls)
        c.dims = dims
        c.open = flat
        return c

    def rank(self, v) -> int:
        t = check_vertex(self.dims, v)
        r = 0
        for c in t:
            r = r * self.dims.n + c
        return r

    def unrank(self, r: int) -> Vertex:
        n = self.dims.n
        out = []
        for _ in range(self.dims.d):
            r, c = divmod(r, n)
            out.append(c)
        return tuple(reversed(out))

    def grid(self) -> np.ndarray:
        return self.open.reshape(self.dims.shape)

    def is_open(self, v) -> bool:
        return bool(self.open[self.rank(v)])

    def open_count(self) -> int:
        return int(self.open.sum())

    def open_vertices(self) -> set[Vertex]:
        return {self.unrank(int(r)) for r in np.nonzero(self.open)[0]}

    def copy(self) -> "Configuration":
        return Configuration._from_array(self.dims, self.open.copy())


def neighbors(dims: Dimensions, v):
    """Yield the d*(n-1) neighbors: all vertices differing in one coordinate."""
    t = check_vertex(dims, v)
    for i in range(dims.d):
        for val in range(dims.n):
            if val != t[i]:
                yield t[:i] + (val,) + t[i + 1 :]


def _check_theta(theta: int):
    if theta < 1:
        raise ValueError(f"threshold must be >= 1, got {theta}")


def step(config: Configuration, theta: int) -> Configuration:
    """One synchronous round: open every closed vertex with >= theta open neighbors.

    For a closed vertex the open-neighbor count is the sum of open counts of
    its d lines, because the vertex itself contributes nothing while closed.
    """
    _check_theta(theta)
    g = config.grid()
    counts = np.zeros(g.shape, dtype=np.int64)
    for ax in range(config.dims.d):
        counts += g.sum(axis=ax, keepdims=True)
    newly = (~g) & (counts >= theta)
    return Configuration._from_array(config.dims, config.open | newly.ravel())


def evolve(config: Configuration, theta: int, budget: int = DENSE_BUDGET):
    """Iterate `step` to the fixpoint; returns (final, productive_rounds)."""
    _check_theta(theta)
    cost = config.dims.d * config.dims.volume
    visits = 0
    cur = config.copy()
    rounds = 0
    while True:
        visits += cost
        if visits > budget:
            raise BudgetExceededError(
                f"evolve needed more than {budget} vertex visits"
            )
        nxt = step(cur, theta)
        if nxt.open_count() == cur.open_count():
            return cur, rounds
        cur = nxt
        rounds += 1


def evolve_incremental(config: Configuration, theta: int, budget: int = DENSE_BUDGET):
    """Fixpoint via per-line open counters and a dirty-line work queue.

    Keeps d*n^(d-1) counters, one per axis line.  Each round rechecks only
    closed vertices lying on lines whose counter changed, opens them all
    simultaneously, then marks the lines through the newly opened vertices
    dirty for the next round.  Agrees with `evolve` on the final open set and
    on the number of productive rounds.
    """
    _check_theta(theta)
    dims = config.dims
    d, n = dims.d, dims.n
    open_ = config.open.copy()
    strides = [n ** (d - 1 - i) for i in range(d)]
    line_counts = [np.zeros(dims.volume // n, dtype=np.int32) for _ in range(d)]
    offsets = [np.arange(n, dtype=np.int64) * strides[ax] for ax in range(d)]

    def line_ids(flat, ax):
        s = strides[ax]
        return (flat // (s * n)) * s + flat % s

    occupied = np.nonzero(open_)[0]
    dirty = []
    for ax in range(d):
        lids = line_ids(occupied, ax)
        np.add.at(line_counts[ax], lids, 1)
        dirty.append(np.unique(lids))

    rounds = 0
    visits = 0
    while any(len(q) for q in dirty):
        member_blocks = []
        for ax in range(d):
            if len(dirty[ax]) == 0:
                continue
            s = strides[ax]
            base = (dirty[ax] // s) * (s * n) + dirty[ax] % s
            member_blocks.append((base[:, None] + offsets[ax][None, :]).ravel())
        cand = np.unique(np.concatenate(member_blocks))
        visits += cand.size
        if visits > budget:
            raise BudgetExceededError(
                f"evolve_incremental needed more than {budget} vertex visits"
            )
        cand = cand[~open_[cand]]
        if cand.size:
            counts = np.zeros(cand.size, dtype=np.int64)
            for ax in range(d):
                counts += line_counts[ax][line_ids(cand, ax)]
            newly = cand[counts >= theta]
        else:
            newly = cand
        if newly.size == 0:
            break
        rounds += 1
        open_[newly] = True
        dirty = []
        for ax in range(d):
            lids = line_ids(newly, ax)
            np.add.at(line_counts[ax], lids, 1)
            dirty.append(np.unique(lids))
    return Configuration._from_array(dims, open_), rounds
