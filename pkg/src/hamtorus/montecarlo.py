"""Reproducible Monte Carlo experiments at the critical seed density.

Each trial draws a Bernoulli(p) seed configuration on the torus, computes
the threshold-2 closure through the subtorus engine (or the dense automaton
for other thresholds on small grids), and records spanning and coverage
events plus counts of internally spanned subtori.  Trials are reproducible
bit for bit regardless of worker count: trial t of an experiment uses a
counter-based Philox stream addressed by (master_seed, t), so results are a
pure function of the configuration.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import theory
from .cellular import Configuration, evolve, evolve_incremental
from .errors import BudgetExceededError
from .spanning import (
    SeedSet,
    closure,
    generated_family,
    is_internally_spanned,
    seed_set,
    DEFAULT_FAMILY_CAP,
)
from .torus import (
    Dimensions,
    Subtorus,
    contains,
    point_distance,
    subtorus_distance,
    vertex_distance,
    vertices,
    whole_torus,
)

_MASK64 = (1 << 64) - 1
_EXACT_BINOMIAL_LIMIT = 1 << 62
_LECAM_TOLERANCE = 1e-3
_FULL_GRID_LIMIT = 10**7  # p = 1 materializes every vertex; keep that sane
_SEED_CAP = 10**6  # single-trial seed draws beyond this are a config mistake
Z95 = 1.959963984540054


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one trial.

    Philox is counter based, so giving every trial its own high counter word
    under a shared key yields non-overlapping streams without any sequential
    seeding; results cannot depend on scheduling or worker count.
    """
    if not 0 <= master_seed < 2**64:
        raise ValueError(f"master seed must fit in 64 bits, got {master_seed}")
    if not 0 <= trial_index < 2**64:
        raise ValueError(f"trial index must fit in 64 bits, got {trial_index}")
    return np.random.Generator(
        np.random.Philox(key=master_seed, counter=[0, 0, 0, trial_index])
    )


def _aux_rng(master_seed: int, tag: int) -> np.random.Generator:
    # third counter word separates auxiliary streams from all trial streams
    return np.random.Generator(
        np.random.Philox(key=master_seed, counter=[0, 0, tag, 0])
    )


def _mix64(seed: int, k: int) -> int:
    """splitmix64 finalizer; derives per-cell seeds for sweeps."""
    x = (seed + (k + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _draw_count(rng: np.random.Generator, population: int, p: float) -> int:
    """Seed count: exact Binomial while the population fits 64 bits, else
    a Poisson approximation permitted only when population * p^2 < 1e-3
    (which bounds the total variation error of the swap)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"need a probability, got {p}")
    if p == 0.0:
        return 0
    if p == 1.0:
        return population
    if population < _EXACT_BINOMIAL_LIMIT:
        return int(rng.binomial(population, p))
    if float(population) * p * p >= _LECAM_TOLERANCE:
        raise ValueError(
            f"population {population} too large for exact binomial sampling and "
            f"population*p^2 = {float(population) * p * p:.3g} too large for the "
            "Poisson approximation"
        )
    return int(rng.poisson(float(population) * p))


def _sampler_kind(population: int, p: float) -> str:
    return "binomial-exact" if population < _EXACT_BINOMIAL_LIMIT else "poisson-lecam"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: torus shape, critical scale, trial count, seeding."""

    dims: Dimensions
    trials: int
    master_seed: int
    j: int = 1
    amplitude: float | None = 1.0
    p: float | None = None
    theta: int = 2
    mode: str = "exact"
    conditional_open: Subtorus | None = None
    record_dims: tuple[int, ...] = ()
    family_cap: int = DEFAULT_FAMILY_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master seed must fit in 64 bits, got {self.master_seed}")
        if self.theta < 1:
            raise ValueError(f"threshold must be >= 1, got {self.theta}")
        if self.mode not in ("exact", "maximal"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.j < 1 or 2 * self.j > self.dims.d:
            raise ValueError(f"level j={self.j} invalid for d={self.dims.d}")
        if self.p is None:
            if self.amplitude is None or not self.amplitude > 0:
                raise ValueError("need a positive amplitude when no explicit density is given")
            derived = theory.critical_p(self.j, self.dims.d, self.amplitude, self.dims.n)
            if not 0.0 < derived < 1.0:
                raise ValueError(f"derived density {derived} outside (0, 1)")
        elif not 0.0 <= self.p <= 1.0:
            raise ValueError(f"explicit density must be in [0, 1], got {self.p}")
        if self.conditional_open is not None and self.conditional_open.dims != self.dims:
            raise ValueError("conditional subtorus lives on a different torus")
        if self.family_cap < 1:
            raise ValueError(f"family cap must be positive, got {self.family_cap}")
        dims_set = {2 * self.j, self.dims.d}
        for i in self.record_dims:
            if not 0 <= i <= self.dims.d:
                raise ValueError(f"recorded dimension {i} outside [0, {self.dims.d}]")
            dims_set.add(int(i))
        object.__setattr__(self, "record_dims", tuple(sorted(dims_set)))

    def probability(self) -> float:
        if self.p is not None:
            return float(self.p)
        return theory.critical_p(self.j, self.dims.d, self.amplitude, self.dims.n)

    def intensity(self) -> float:
        """Limit mean of the spanned 2j-subtorus count at this density."""
        p = self.probability()
        if p == 0.0:
            return 0.0
        exponent = float(theory.critical_exponent(self.j, self.dims.d))
        a_eff = p * float(self.dims.n) ** exponent
        return theory.poisson_intensity(self.j, self.dims.d, a_eff)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "d": cfg.dims.d,
        "n": cfg.dims.n,
        "trials": cfg.trials,
        "master_seed": cfg.master_seed,
        "j": cfg.j,
        "a": cfg.amplitude,
        "p": cfg.p,
        "theta": cfg.theta,
        "mode": cfg.mode,
        "conditional_open": (
            None
            if cfg.conditional_open is None
            else [list(pair) for pair in cfg.conditional_open.fixed]
        ),
        "record_dims": list(cfg.record_dims),
        "family_cap": cfg.family_cap,
    }


def config_from_dict(data: dict) -> ExperimentConfig:
    known = {
        "d", "n", "trials", "master_seed", "j", "a", "p", "theta", "mode",
        "conditional_open", "record_dims", "family_cap",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown configuration keys {sorted(unknown)}")
    for key in ("d", "n", "trials", "master_seed"):
        if key not in data:
            raise ValueError(f"configuration is missing {key!r}")
    dims = Dimensions(int(data["d"]), int(data["n"]))
    cond = data.get("conditional_open")
    amplitude = data.get("a")
    if amplitude is None and data.get("p") is None:
        amplitude = 1.0
    return ExperimentConfig(
        dims=dims,
        trials=int(data["trials"]),
        master_seed=int(data["master_seed"]),
        j=int(data.get("j", 1)),
        amplitude=None if amplitude is None else float(amplitude),
        p=None if data.get("p") is None else float(data["p"]),
        theta=int(data.get("theta", 2)),
        mode=str(data.get("mode", "exact")),
        conditional_open=(
            None if cond is None else Subtorus(dims, tuple((int(i), int(v)) for i, v in cond))
        ),
        record_dims=tuple(int(i) for i in data.get("record_dims", ())),
        family_cap=int(data.get("family_cap", DEFAULT_FAMILY_CAP)),
    )


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    seed_count: int
    y_exact: dict[int, int] | None
    y_maximal: dict[int, int]
    spanned: dict[int, bool]
    covered: dict[int, bool]
    max_open_dim: int
    truncated: bool
    ms: float


def sample_seeds(cfg: ExperimentConfig, trial_index: int) -> SeedSet:
    """Bernoulli(p) seed set for one trial: a Binomial (or Le Cam Poisson)
    count followed by that many distinct uniform vertices, drawn by rejection."""
    rng = trial_rng(cfg.master_seed, trial_index)
    dims = cfg.dims
    m = _draw_count(rng, dims.volume, cfg.probability())
    if m > _SEED_CAP:
        raise BudgetExceededError(
            f"trial {trial_index} drew {m} seeds, over the cap {_SEED_CAP}"
        )
    pre = frozenset() if cfg.conditional_open is None else frozenset((cfg.conditional_open,))
    if m == dims.volume:
        if dims.volume > _FULL_GRID_LIMIT:
            raise BudgetExceededError(
                f"refusing to materialize all {dims.volume} vertices"
            )
        pts = frozenset(itertools.product(range(dims.n), repeat=dims.d))
        return SeedSet(dims, pts, pre)
    picked: dict[tuple, None] = {}
    while len(picked) < m:
        batch = rng.integers(0, dims.n, size=(max(16, 2 * (m - len(picked))), dims.d))
        for row in batch:
            t = tuple(int(c) for c in row)
            if t not in picked:
                picked[t] = None
                if len(picked) == m:
                    break
    return SeedSet(dims, frozenset(picked), pre)


def _observe_merge_engine(cfg: ExperimentConfig, s: SeedSet) -> dict:
    dec = closure(s)
    max_dim = dec.max_dimension()
    covered = {i: max_dim >= i for i in cfg.record_dims}
    y_maximal = {i: dec.count_of_dimension(i) for i in cfg.record_dims if i % 2 == 0}
    truncated = False
    y_exact = None
    spanned = None
    if cfg.mode == "exact":
        fam = generated_family(s, cap=cfg.family_cap)
        truncated = fam.truncated
        if not truncated:
            spanned = {}
            y_exact = {}
            for i in cfg.record_dims:
                members = [t for t in fam.tori if t.dimension == i]
                hits = sum(1 for t in members if is_internally_spanned(t, s))
                spanned[i] = hits > 0
                if i % 2 == 0:
                    y_exact[i] = hits
    if spanned is None:
        # maximal fallback: spanned subtori hidden inside larger members are
        # not visible; summaries report how often this matters
        spanned = {i: dec.count_of_dimension(i) > 0 for i in cfg.record_dims}
    return {
        "y_exact": y_exact,
        "y_maximal": y_maximal,
        "spanned": spanned,
        "covered": covered,
        "max_open_dim": max_dim,
        "truncated": truncated,
    }


def _enumerate_subtori(dims: Dimensions, dim: int):
    """Every subtorus of the given dimension."""
    for free in itertools.combinations(range(dims.d), dim):
        fixed_idx = [i for i in range(dims.d) if i not in free]
        for vals in itertools.product(range(dims.n), repeat=len(fixed_idx)):
            yield Subtorus(dims, tuple(zip(fixed_idx, vals)))


def _observe_dense_engine(cfg: ExperimentConfig, s: SeedSet) -> dict:
    """General-threshold observables via the dense automaton; small tori only."""
    dims = cfg.dims
    scan_cost = dims.volume * (dims.n + 1) ** dims.d
    if scan_cost > 10**8:
        raise BudgetExceededError(
            f"dense subtorus scan would cost about {scan_cost} visits"
        )
    start = Configuration(dims, s.points)
    for t in s.pre_open:
        for v in vertices(t, dims.volume):
            start.open[start.rank(v)] = True
    final, _ = evolve(start, cfg.theta)
    fully_open = {
        dim: [
            t
            for t in _enumerate_subtori(dims, dim)
            if all(final.open[final.rank(v)] for v in vertices(t, dims.volume))
        ]
        for dim in range(dims.d + 1)
    }
    max_dim = max((dim for dim, ts in fully_open.items() if ts), default=-1)
    covered = {i: max_dim >= i for i in cfg.record_dims}

    def maximal(t, dim):
        return not any(
            contains(big, t) for bd in range(dim + 1, dims.d + 1) for big in fully_open[bd]
        )

    y_maximal = {
        i: sum(1 for t in fully_open[i] if maximal(t, i))
        for i in cfg.record_dims
        if i % 2 == 0
    }

    def internally_spanned(t):
        inside = [v for v in s.points if point_distance(t, v) == 0]
        for pre_t in s.pre_open:
            if contains(t, pre_t):
                inside.extend(vertices(pre_t, dims.volume))
        if not inside:
            return False
        grown, _ = evolve(Configuration(dims, inside), cfg.theta)
        return grown.open_vertices() == set(vertices(t, dims.volume))

    spanned = {}
    y_exact = {}
    for i in cfg.record_dims:
        hits = sum(1 for t in _enumerate_subtori(dims, i) if internally_spanned(t))
        spanned[i] = hits > 0
        if i % 2 == 0:
            y_exact[i] = hits
    return {
        "y_exact": y_exact,
        "y_maximal": y_maximal,
        "spanned": spanned,
        "covered": covered,
        "max_open_dim": max_dim,
        "truncated": False,
    }


def run_trial(cfg: ExperimentConfig, trial_index: int, seeds: SeedSet | None = None) -> TrialResult:
    """One trial; `seeds` overrides the sampled configuration for testing."""
    t0 = time.perf_counter()
    s = sample_seeds(cfg, trial_index) if seeds is None else seeds
    if cfg.theta == 2:
        obs = _observe_merge_engine(cfg, s)
    else:
        obs = _observe_dense_engine(cfg, s)
    ms = (time.perf_counter() - t0) * 1e3
    return TrialResult(
        trial_index=trial_index, seed_count=len(s.points), ms=ms, **obs
    )


def _run_block(args) -> list[TrialResult]:
    cfg, start, stop = args
    return [run_trial(cfg, t) for t in range(start, stop)]


def run_trials(cfg: ExperimentConfig, workers: int = 1) -> list[TrialResult]:
    """All trials, in trial order; identical output for any worker count."""
    if workers <= 1:
        return [run_trial(cfg, t) for t in range(cfg.trials)]
    chunk = max(1, math.ceil(cfg.trials / (workers * 8)))
    blocks = [
        (cfg, start, min(start + chunk, cfg.trials))
        for start in range(0, cfg.trials, chunk)
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_block, blocks))
    return [r for part in parts for r in part]


@dataclass(frozen=True)
class EventEstimate:
    hits: int
    trials: int
    estimate: float
    se: float
    lo95: float
    hi95: float

    def to_dict(self) -> dict:
        return {
            "hits": self.hits,
            "trials": self.trials,
            "estimate": self.estimate,
            "se": self.se,
            "lo95": self.lo95,
            "hi95": self.hi95,
        }


def wilson_interval(hits: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval; well behaved for proportions near 0 and 1."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= hits <= trials:
        raise ValueError(f"hits {hits} outside [0, {trials}]")
    ph = hits / trials
    denom = 1.0 + z * z / trials
    center = (ph + z * z / (2 * trials)) / denom
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / denom
    # the interval touches an endpoint exactly when the sample is degenerate
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == trials else min(1.0, center + half)
    return lo, hi


def event_estimate(hits: int, trials: int) -> EventEstimate:
    ph = hits / trials
    lo, hi = wilson_interval(hits, trials)
    return EventEstimate(
        hits=hits,
        trials=trials,
        estimate=ph,
        se=math.sqrt(ph * (1 - ph) / trials),
        lo95=lo,
        hi95=hi,
    )


@dataclass(frozen=True)
class Summary:
    """Aggregated experiment results; serializes deterministically."""

    config: dict
    sampler: str
    trials: int
    truncated_trials: int
    mean_seeds: float
    y_dim: int
    events: dict[str, EventEstimate]
    y_distribution: dict[int, int]
    y_maximal_distribution: dict[int, int]
    lambda_theory: float
    lambda_hat: float
    lambda_se: float
    tv_poisson: float
    tv_poisson_se: float
    disagreement_rate: float | None

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "sampler": self.sampler,
            "trials": self.trials,
            "truncated_trials": self.truncated_trials,
            "mean_seeds": self.mean_seeds,
            "y_dim": self.y_dim,
            "events": {k: v.to_dict() for k, v in sorted(self.events.items())},
            "y_distribution": {str(k): v for k, v in sorted(self.y_distribution.items())},
            "y_maximal_distribution": {
                str(k): v for k, v in sorted(self.y_maximal_distribution.items())
            },
            "lambda_theory": self.lambda_theory,
            "lambda_hat": self.lambda_hat,
            "lambda_se": self.lambda_se,
            "tv_poisson": self.tv_poisson,
            "tv_poisson_se": self.tv_poisson_se,
            "disagreement_rate": self.disagreement_rate,
        }


def _bootstrap_tv_se(counts: Counter, total: int, lam: float, master_seed: int, reps: int = 200) -> float:
    if total < 2 or len(counts) == 0:
        return 0.0
    rng = _aux_rng(master_seed, 1)
    support = sorted(counts)
    probs = np.array([counts[k] for k in support], dtype=float)
    probs /= probs.sum()
    tvs = []
    for _ in range(reps):
        resampled = rng.multinomial(total, probs)
        dist = {k: int(c) / total for k, c in zip(support, resampled) if c}
        tvs.append(theory.tv_to_poisson(dist, lam))
    return float(np.std(tvs, ddof=1))


def summarize(cfg: ExperimentConfig, results: list[TrialResult]) -> Summary:
    trials = len(results)
    if trials == 0:
        raise ValueError("no trials to summarize")
    rec = cfg.record_dims
    y_dim = 2 * cfg.j

    events: dict[str, EventEstimate] = {}
    for i in rec:
        events[f"I_{i}"] = event_estimate(sum(r.spanned[i] for r in results), trials)
        events[f"C_{i}"] = event_estimate(sum(r.covered[i] for r in results), trials)
        events[f"C_{i}_not_I_{i}"] = event_estimate(
            sum(r.covered[i] and not r.spanned[i] for r in results), trials
        )
    for i in rec:
        for k in rec:
            if i != k:
                events[f"I_{i}_not_I_{k}"] = event_estimate(
                    sum(r.spanned[i] and not r.spanned[k] for r in results), trials
                )

    exact_rows = [r for r in results if r.y_exact is not None]
    if cfg.mode == "exact" and exact_rows:
        primary = Counter(r.y_exact[y_dim] for r in exact_rows)
        primary_total = len(exact_rows)
    else:
        primary = Counter(r.y_maximal[y_dim] for r in results)
        primary_total = trials
    maximal_counts = Counter(r.y_maximal[y_dim] for r in results)

    lam_theory = cfg.intensity()
    values = list(primary.elements())
    lambda_hat = float(np.mean(values))
    lambda_se = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    dist = {k: c / primary_total for k, c in primary.items()}
    tv = theory.tv_to_poisson(dist, lam_theory) if lam_theory > 0 else float("nan")
    tv_se = (
        _bootstrap_tv_se(primary, primary_total, lam_theory, cfg.master_seed)
        if lam_theory > 0
        else float("nan")
    )

    disagreement = None
    if exact_rows:
        disagreement = sum(
            1 for r in exact_rows if r.y_exact[y_dim] != r.y_maximal[y_dim]
        ) / len(exact_rows)

    return Summary(
        config=config_to_dict(cfg),
        sampler=_sampler_kind(cfg.dims.volume, cfg.probability()),
        trials=trials,
        truncated_trials=sum(r.truncated for r in results),
        mean_seeds=float(np.mean([r.seed_count for r in results])),
        y_dim=y_dim,
        events=events,
        y_distribution={int(k): int(v) for k, v in primary.items()},
        y_maximal_distribution={int(k): int(v) for k, v in maximal_counts.items()},
        lambda_theory=lam_theory,
        lambda_hat=lambda_hat,
        lambda_se=lambda_se,
        tv_poisson=tv,
        tv_poisson_se=tv_se,
        disagreement_rate=disagreement,
    )


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> Summary:
    return summarize(cfg, run_trials(cfg, workers))


def sweep(cfg: ExperimentConfig, parameter: str, values, workers: int = 1):
    """Independent experiments along n or a; cell seeds derive from the
    master seed and cell index, so the whole sweep is reproducible."""
    out = []
    for k, value in enumerate(values):
        cell_seed = _mix64(cfg.master_seed, k)
        if parameter == "n":
            cell = replace(
                cfg, dims=Dimensions(cfg.dims.d, int(value)), master_seed=cell_seed
            )
        elif parameter == "a":
            cell = replace(cfg, amplitude=float(value), p=None, master_seed=cell_seed)
        else:
            raise ValueError(f"unknown sweep parameter {parameter!r}")
        out.append((value, run_experiment(cell, workers)))
    return out


def estimate_spanning_probability(
    sub: Subtorus, p: float, trials: int, master_seed: int
) -> EventEstimate:
    """Monte Carlo estimate of the probability that one fixed subtorus is
    internally spanned by Bernoulli(p) seeds drawn inside it."""
    dims = sub.dims
    fm = sub.fixed_map()
    free = [i for i in range(dims.d) if i not in fm]
    population = dims.n ** len(free)
    hits = 0
    for t in range(trials):
        rng = trial_rng(master_seed, t)
        m = _draw_count(rng, population, p)
        if m > _SEED_CAP:
            raise BudgetExceededError(f"trial {t} drew {m} seeds, over the cap {_SEED_CAP}")
        if m == 0 or (m == 1 and sub.dimension > 0):
            continue  # a single seed cannot span a positive-dimensional subtorus
        picked: dict[tuple, None] = {}
        if m == population:
            if population > _FULL_GRID_LIMIT:
                raise BudgetExceededError(
                    f"refusing to materialize all {population} vertices"
                )
            picked = dict.fromkeys(itertools.product(range(dims.n), repeat=len(free)))
        while len(picked) < m:
            batch = rng.integers(0, dims.n, size=(max(16, 2 * (m - len(picked))), len(free)))
            for row in batch:
                key = tuple(int(c) for c in row)
                if key not in picked:
                    picked[key] = None
                    if len(picked) == m:
                        break
        pts = []
        for key in picked:
            v = [0] * dims.d
            for i, val in fm.items():
                v[i] = val
            for i, val in zip(free, key):
                v[i] = val
            pts.append(tuple(v))
        if is_internally_spanned(sub, seed_set(dims, pts)):
            hits += 1
    return event_estimate(hits, trials)


@dataclass
class VerifyReport:
    suite: str
    cases: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def _closure_matches_automaton(dims: Dimensions, pts) -> bool:
    dec = closure(seed_set(dims, pts))
    grown, _ = evolve(Configuration(dims, pts), 2)
    return dec.open_vertices(dims.volume) == grown.open_vertices()


def _reproducer(dims: Dimensions, pts) -> str:
    return f"d={dims.d} n={dims.n} seeds={sorted(pts)}"


def verify_oracle(
    cases: int = 1000,
    master_seed: int = 0,
    sizes=None,
    max_points: int = 8,
    include_exhaustive: bool = True,
) -> VerifyReport:
    """Merge engine versus dense automaton on identical seed sets.

    Runs every two-seed configuration of the 3x3x3 torus exhaustively, then
    randomized seed sets across the given sizes.  Failures carry a minimal
    reproducer (torus shape plus seed list)."""
    failures = []
    total = 0
    if include_exhaustive:
        dims = Dimensions(3, 3)
        allv = list(itertools.product(range(3), repeat=3))
        for pair in itertools.combinations(allv, 2):
            total += 1
            if not _closure_matches_automaton(dims, pair):
                failures.append("exhaustive pair: " + _reproducer(dims, pair))
    if sizes is None:
        sizes = [Dimensions(d, n) for d in (3, 4) for n in (3, 4, 5)]
    for case in range(cases):
        rng = trial_rng(master_seed, case)
        dims = sizes[int(rng.integers(len(sizes)))]
        k = int(rng.integers(1, max_points + 1))
        pts = set()
        while len(pts) < k:
            pts.add(tuple(int(c) for c in rng.integers(0, dims.n, size=dims.d)))
        total += 1
        if not _closure_matches_automaton(dims, pts):
            failures.append("randomized: " + _reproducer(dims, pts))
    return VerifyReport("oracle", total, failures)


def _random_subtorus(rng, dims: Dimensions) -> Subtorus:
    k = int(rng.integers(0, dims.d + 1))
    idx = sorted(int(i) for i in rng.choice(dims.d, size=k, replace=False))
    return Subtorus(dims, tuple((i, int(rng.integers(dims.n))) for i in idx))


def verify_properties(cases: int = 400, master_seed: int = 1) -> VerifyReport:
    """Structural invariants on randomized instances.

    Covers: dense versus incremental automaton (including round counts),
    automaton monotonicity, closure confluence across merge orders, closure
    idempotence, vectorized versus reference pair scans, and the distance
    formula against brute-force minimum vertex distance."""
    failures = []
    total = 0
    quarter = max(1, cases // 4)

    for case in range(quarter):
        rng = trial_rng(master_seed, case)
        dims = Dimensions(int(rng.integers(2, 4)), int(rng.integers(3, 7)))
        theta = int(rng.integers(2, 4))
        k = int(rng.integers(1, 9))
        pts = {tuple(int(c) for c in rng.integers(0, dims.n, size=dims.d)) for _ in range(k)}
        start = Configuration(dims, pts)
        total += 1
        a, ra = evolve(start, theta)
        b, rb = evolve_incremental(start, theta)
        if not (np.array_equal(a.open, b.open) and ra == rb):
            failures.append(f"incremental mismatch: theta={theta} " + _reproducer(dims, pts))
        extra = {tuple(int(c) for c in rng.integers(0, dims.n, size=dims.d))}
        grown, _ = evolve(Configuration(dims, pts | extra), theta)
        total += 1
        if not (a.open <= grown.open).all():
            failures.append(f"monotonicity: theta={theta} " + _reproducer(dims, pts | extra))

    for case in range(quarter):
        rng = trial_rng(master_seed, 10_000 + case)
        dims = Dimensions(int(rng.integers(3, 5)), int(rng.integers(3, 6)))
        k = int(rng.integers(2, 9))
        pts = {tuple(int(c) for c in rng.integers(0, dims.n, size=dims.d)) for _ in range(k)}
        pre = {_random_subtorus(rng, dims)} if rng.random() < 0.3 else set()
        s = seed_set(dims, pts, pre)
        base = closure(s)
        total += 1
        for rule in ("last", int(case)):
            if closure(s, pair_rule=rule).tori != base.tori:
                failures.append(f"confluence rule={rule!r}: " + _reproducer(dims, pts))
                break
        total += 1
        again = closure(SeedSet(dims, frozenset(), frozenset(base.tori)))
        if again.tori != base.tori:
            failures.append("idempotence: " + _reproducer(dims, pts))
        total += 1
        if closure(s, scan="basic").tori != base.tori:
            failures.append("scan basic/fast closure: " + _reproducer(dims, pts))
        total += 1
        fam_fast = generated_family(s)
        if generated_family(s, scan="basic").tori != fam_fast.tori:
            failures.append("scan basic/fast family: " + _reproducer(dims, pts))
        total += 1
        if not base.tori <= fam_fast.tori:
            failures.append("family misses maximal member: " + _reproducer(dims, pts))

    for case in range(quarter):
        rng = trial_rng(master_seed, 20_000 + case)
        dims = Dimensions(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        a, b = _random_subtorus(rng, dims), _random_subtorus(rng, dims)
        total += 1
        brute = min(
            vertex_distance(u, v)
            for u in vertices(a, dims.volume)
            for v in vertices(b, dims.volume)
        )
        if subtorus_distance(a, b) != brute:
            failures.append(f"distance formula: d={dims.d} n={dims.n} {a.fixed} {b.fixed}")

    return VerifyReport("properties", total, failures)


def _perfect_raw_count(n: int, i: int) -> int:
    """Independent perfect-collection counter: filter every vertex subset."""
    width = 2 * i
    dims = Dimensions(width, n)
    allv = list(itertools.product(range(n), repeat=width))
    targets = Counter(2 * k for k in range(1, i + 1) for _ in range(k))
    count = 0
    for combo in itertools.combinations(allv, i + 1):
        dists = Counter(
            vertex_distance(u, v) for u, v in itertools.combinations(combo, 2)
        )
        if dists != targets:
            continue
        if closure(seed_set(dims, combo)).tori == frozenset((whole_torus(dims),)):
            count += 1
    return count


def verify_perfect() -> VerifyReport:
    """Perfect-collection counter against the plane closed form and an
    independent subset filter, plus the asserted lower bound where it holds."""
    failures = []
    total = 0
    for n in (2, 3, 4, 5):
        total += 1
        got = theory.perfect_bruteforce(n, 1)
        want = theory.perfect_count_plane(n)
        if got != want:
            failures.append(f"plane count n={n}: bruteforce {got} != closed form {want}")
        total += 1
        if got < theory.perfect_lower_bound(n, 1):
            failures.append(f"plane bound n={n}: {got} < {theory.perfect_lower_bound(n, 1)}")
    total += 1
    got = theory.perfect_bruteforce(3, 2)
    raw = _perfect_raw_count(3, 2)
    if got != raw:
        failures.append(f"i=2 n=3: pruned search {got} != subset filter {raw}")
    for n in (3, 4):
        total += 1
        bound = theory.perfect_lower_bound(n, 2)
        got = theory.perfect_bruteforce(n, 2)
        if got < bound:
            failures.append(f"i=2 bound n={n}: {got} < {bound}")
    return VerifyReport("perfect", total, failures)
