"""Closed forms for the critical regime and combinatorial oracles.

At threshold 2 with seed density p = a * n^(-d/(j+1) - j), the count of
internally spanned 2j-dimensional subtori converges to a Poisson law whose
mean `poisson_intensity(j, d, a)` depends only on (j, d, a).  This module
holds those reference formulas, exact small-case counters the Monte Carlo
harness is validated against, and the distribution utilities (Poisson pmf,
total variation) the experiment summaries use.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError


def j_max(d: int) -> int:
    """Largest j with j*(j+1) < d: the deepest critically scaled level."""
    if d <= 2:
        raise ValueError(f"no critical level exists for d={d}, need d >= 3")
    j = 1
    while (j + 1) * (j + 2) < d:
        j += 1
    return j


def _check_scale(j: int, d: int, a: float):
    if j < 1:
        raise ValueError(f"level must satisfy j >= 1, got {j}")
    if 2 * j > d:
        raise ValueError(f"level j={j} needs d >= {2 * j}, got d={d}")
    if not a > 0:
        raise ValueError(f"amplitude must be positive, got {a}")


def poisson_intensity(j: int, d: int, a: float) -> float:
    """Limiting mean count of spanned 2j-subtori: C(d,2j) (2j)! a^(j+1) / 2^(j+1)."""
    _check_scale(j, d, a)
    return math.comb(d, 2 * j) * math.factorial(2 * j) * float(a) ** (j + 1) / 2 ** (j + 1)


def critical_exponent(j: int, d: int) -> Fraction:
    """Exact exponent e with critical density p = a * n^(-e)."""
    if j < 1 or 2 * j > d:
        raise ValueError(f"invalid level j={j} for d={d}")
    return Fraction(d, j + 1) + j


def critical_p(j: int, d: int, a: float, n: int) -> float:
    """Seed density at the critical scale for level j."""
    if not a > 0:
        raise ValueError(f"amplitude must be positive, got {a}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    p = float(a) * float(n) ** (-float(critical_exponent(j, d)))
    if p > 1:
        raise ValueError(f"density {p} exceeds 1; amplitude {a} too large for n={n}")
    return p


def predicted_spanning_limit(j: int, d: int, a: float) -> float:
    """Limit probability that some 2j-subtorus is internally spanned."""
    return 1 - math.exp(-poisson_intensity(j, d, a))


def m2i_leading(n: int, p: float, i: int) -> float:
    """Leading-order probability that a fixed 2i-subtorus is internally spanned.

    (2i)! 2^-(i+1) n^(i(i+3)) p^(i+1); the true value is this times
    (1 + O(1/n)) in the critical window.
    """
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    if not 0 < p <= 1:
        raise ValueError(f"need a density in (0, 1], got {p}")
    return math.factorial(2 * i) / 2 ** (i + 1) * float(n) ** (i * (i + 3)) * float(p) ** (i + 1)


def line_span_prob(n: int, p: float) -> float:
    """Probability a single line is spanned by its own seeds: P(Bin(n,p) >= 2)."""
    if not 0 <= p <= 1:
        raise ValueError(f"need a probability, got {p}")
    q = 1.0 - p
    return 1.0 - q**n - n * p * q ** (n - 1)


def perfect_count_plane(n: int) -> int:
    """Unordered seed pairs spanning the n x n plane: all non-collinear pairs."""
    return math.comb(n * n, 2) - 2 * n * math.comb(n, 2)


def perfect_lower_bound(n: int, i: int) -> float:
    """Asserted lower bound (2i)! 2^-(i+1) n^(i(i+3)) (1 - 2^i/n) on perfect counts.

    Vacuous (non-positive) when 2^i >= n.
    """
    return math.factorial(2 * i) / 2 ** (i + 1) * float(n) ** (i * (i + 3)) * (1 - 2**i / n)


def parity(x: int) -> int:
    """x - 2*floor(x/2), i.e. 0 for even x and 1 for odd x."""
    if x < 0:
        raise ValueError(f"need x >= 0, got {x}")
    return x - 2 * (x // 2)


@dataclass(frozen=True)
class ExponentEntry:
    """Decay exponents (major, minor) for a t-step merge chain hitting rank r."""

    t: int
    r: int
    major: int
    minor: int


def exponent_table(t: int, r: int) -> ExponentEntry:
    """Exponent bookkeeping for merge chains, split by the parities of t and r."""
    if not 0 <= r < t:
        raise ValueError(f"need 0 <= r < t, got t={t}, r={r}")
    i = (t + 1) // 2
    m = (r + 1) // 2
    if parity(t) == 0 and parity(r) == 0:
        major, minor = i - m, 0
    elif parity(t) == 1 and parity(r) == 0:
        major, minor = i - m - 1, 0
    elif parity(t) == 0 and parity(r) == 1:
        major, minor = 2 * i, 1
    else:
        major, minor = 0, 0
    return ExponentEntry(t, r, major, minor)


def poisson_pmf(lam: float, k: int) -> float:
    """Poisson probability mass, computed in log space for stability."""
    if lam < 0:
        raise ValueError(f"need a nonnegative mean, got {lam}")
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    if lam == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def tv_distance(p, q) -> float:
    """Total variation distance between two distributions on the integers.

    Both arguments are mappings {value: probability} and must each sum to 1
    within 1e-9.
    """
    for name, dist in (("first", p), ("second", q)):
        total = math.fsum(dist.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"{name} distribution sums to {total}, not 1")
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def tv_to_poisson(dist, lam: float) -> float:
    """Total variation between a finite empirical distribution and Poisson(lam).

    The Poisson support is truncated 10 terms past the largest observed value
    and the remaining tail mass is folded into one extra bucket, which leaves
    the distance exact because the empirical side carries no mass there.
    """
    top = max(dist, default=0) + 10
    q = {k: poisson_pmf(lam, k) for k in range(top + 1)}
    q[top + 1] = max(0.0, 1.0 - math.fsum(q.values()))
    return tv_distance(dist, q)


def _local_span_of_points(n: int, rows) -> bool:
    """Whether the points span the full torus [n]^width, by pairwise merging.

    Tiny self-contained closure used by the brute-force counter; the main
    engine in `spanning` has its own richer implementation, and tests check
    the two agree.
    """
    members = [(np.ones(len(r), dtype=bool), np.asarray(r)) for r in rows]
    while len(members) > 1:
        merged_any = False
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                mx, vx = members[x]
                my, vy = members[y]
                both = mx & my
                if (both & (vx != vy)).sum() > 2:
                    continue
                keep = both & (vx == vy)
                members = [m for z, m in enumerate(members) if z not in (x, y)]
                members.append((keep, vx))
                merged_any = True
                break
            if merged_any:
                break
        if not merged_any:
            break
    if len(members) != 1:
        return False
    return int(members[0][0].sum()) == 0


def perfect_bruteforce(n: int, i: int, budget: int = 10**9) -> int:
    """Count perfect seed collections of the full 2i-torus by direct search.

    A collection of i+1 vertices is perfect when it spans the whole torus,
    vertex k is at Hamming distance 2(k-1) from every earlier vertex, and
    the first two vertices are in lexicographic order.  Each qualifying
    unordered set admits exactly one such ordering, so the search counts
    ordered tuples with early pruning on the distance pattern.
    """
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    width = 2 * i
    if math.comb(n**width, i + 1) > budget:
        raise BudgetExceededError(
            f"enumeration of C({n**width}, {i + 1}) subsets exceeds budget {budget}"
        )
    verts = np.array(list(itertools.product(range(n), repeat=width)), dtype=np.int16)
    count = 0

    def ham_to_all(row):
        return (verts != row).sum(axis=1)

    # The search folds vertices into a running subtorus: `agree` marks the
    # coordinates every prefix vertex shares, which are the fixed coordinates
    # of the span so far as long as each fold step bridged a distance <= 2
    # (`valid`).  When a step stalls the leaf falls back to a full closure.
    def extend(prefix, dists, agree, valid, depth):
        nonlocal count
        target = 2 * depth  # required distance from every earlier vertex
        cand = dists[0] == target
        for dv in dists[1:]:
            cand &= dv == target
        if depth == 1:
            cand[: prefix[0] + 1] = False  # lexicographic tie-break for the pair
        idxs = np.nonzero(cand)[0]
        if idxs.size == 0:
            return
        base = verts[prefix[0]]
        if depth == i:
            if valid:
                k = int(agree.sum())
                mism = (verts[idxs][:, agree] != base[agree]).sum(axis=1)
                if k <= 2:
                    # merge always applies; spans iff no shared coordinate survives
                    count += int((mism == k).sum())
                else:
                    # mism <= 2 leaves shared coordinates fixed, so no span there
                    for idx in idxs[mism > 2]:
                        rows = [verts[q] for q in prefix] + [verts[int(idx)]]
                        count += _local_span_of_points(n, rows)
            else:
                for idx in idxs:
                    rows = [verts[q] for q in prefix] + [verts[int(idx)]]
                    count += _local_span_of_points(n, rows)
            return
        for idx in idxs:
            nxt = verts[int(idx)]
            if valid and int((agree & (nxt != base)).sum()) <= 2:
                extend(prefix + [int(idx)], dists + [ham_to_all(nxt)],
                       agree & (nxt == base), True, depth + 1)
            else:
                extend(prefix + [int(idx)], dists + [ham_to_all(nxt)],
                       agree, False, depth + 1)

    for first in range(len(verts)):
        extend([first], [ham_to_all(verts[first])], np.ones(width, dtype=bool), True, 1)
    return count
