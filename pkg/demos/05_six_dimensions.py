#!/usr/bin/env python3
"""Intermediate scales in six dimensions: planes, 4-subtori, the full torus.

In three dimensions a spanned plane almost always snowballs into the whole
torus, because a plane is within merging distance of everything.  In six
dimensions the picture is richer: the same density that makes spanned
planes common leaves room for trials whose growth stops at an intermediate
scale — a plane that never reaches any 4-dimensional subtorus, or a spanned
4-subtorus in a torus that stays unspanned.

The script measures all of these events in one run (d=6, n=12, a=0.5) and
then builds, by hand, a three-seed configuration whose closure is exactly a
4-dimensional subtorus: growth provably stuck at the middle scale.
"""

from hamtorus import (
    Dimensions,
    ExperimentConfig,
    closure,
    is_internally_spanned,
    make_subtorus,
    run_experiment,
    seed_set,
    whole_torus,
)

EVENTS = [
    ("I_2", "some plane internally spanned"),
    ("I_2_not_I_4", "spanned plane, no spanned 4-subtorus"),
    ("I_4", "some 4-subtorus internally spanned"),
    ("I_4_not_I_6", "spanned 4-subtorus, torus unspanned"),
    ("I_6", "whole torus internally spanned"),
    ("I_6_not_I_4", "torus spanned with no spanned 4-subtorus"),
]


def main():
    cfg = ExperimentConfig(
        dims=Dimensions(6, 12),
        trials=800,
        master_seed=41,
        amplitude=0.5,
        record_dims=(2, 4, 6),
    )
    print(f"d=6, n=12, a=0.5 -> p={cfg.probability():.3e}, "
          f"mean seeds per trial = {cfg.probability() * cfg.dims.volume:.0f}")
    summary = run_experiment(cfg)
    print(f"{cfg.trials} trials, spanned-plane mean {summary.lambda_hat:.3f} "
          f"(limit mean {summary.lambda_theory:.3f})\n")

    width = max(len(text) for _, text in EVENTS)
    for key, text in EVENTS:
        ev = summary.events[key]
        print(f"  {text:<{width}}  {ev.estimate:>7.4f}  "
              f"[{ev.lo95:.4f}, {ev.hi95:.4f}]  ({ev.hits}/{ev.trials})")

    print("\nA closure stuck at the middle scale, built by hand:")
    dims = cfg.dims
    target = make_subtorus(dims, {4: 0, 5: 0})
    pts = [(0, 0, 0, 0, 0, 0), (1, 1, 0, 0, 0, 0), (2, 2, 2, 2, 0, 0)]
    seeds = seed_set(dims, pts)
    dec = closure(seeds)
    (member,) = dec.tori
    print(f"  seeds {pts}")
    print(f"  closure = one subtorus of dimension {member.dimension} "
          f"(fixes {dict(member.fixed)})")
    print(f"  spans the 4-subtorus: {is_internally_spanned(target, seeds)}")
    print(f"  spans the whole torus: {is_internally_spanned(whole_torus(dims), seeds)}")


if __name__ == "__main__":
    main()
