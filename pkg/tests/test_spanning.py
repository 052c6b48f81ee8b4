import itertools

import pytest

from hamtorus import (
    BudgetExceededError,
    Configuration,
    Dimensions,
    SeedSet,
    closure,
    conditional_closure,
    event_covered,
    event_spanned,
    evolve,
    generated_family,
    is_internally_spanned,
    make_subtorus,
    point_subtorus,
    seed_set,
    spanned_count,
    vertices,
    whole_torus,
)
from hamtorus.spanning import _pairs_within_basic, _pairs_within_fast
from hamtorus.torus import Subtorus


def all_subtori(dims):
    for k in range(dims.d + 1):
        for idx in itertools.combinations(range(dims.d), k):
            for vals in itertools.product(range(dims.n), repeat=k):
                yield Subtorus(dims, tuple(zip(idx, vals)))


def ca_open_set(dims, pts):
    final, _ = evolve(Configuration(dims, pts), 2)
    return final.open_vertices()


def ca_internally_spanned(dims, sub, pts):
    inside = [v for v in pts if all(v[i] == x for i, x in sub.fixed)]
    if not inside:
        return False
    return ca_open_set(dims, inside) == set(vertices(sub, dims.volume))


def test_closure_of_two_points():
    dims = Dimensions(3, 4)
    a, b = (0, 0, 0), (0, 0, 2)
    dec = closure(seed_set(dims, [a, b]))
    assert dec.tori == frozenset((make_subtorus(dims, {0: 0, 1: 0}),))
    dec = closure(seed_set(dims, [(0, 0, 0), (1, 1, 0)]))
    assert dec.tori == frozenset((make_subtorus(dims, {2: 0}),))
    far = closure(seed_set(dims, [(0, 0, 0), (1, 1, 1)]))
    assert far.tori == frozenset(
        (point_subtorus(dims, (0, 0, 0)), point_subtorus(dims, (1, 1, 1)))
    )
    assert far.max_dimension() == 0


def test_closure_matches_automaton_on_all_pairs():
    dims = Dimensions(3, 3)
    allv = list(itertools.product(range(3), repeat=3))
    for pair in itertools.combinations(allv, 2):
        dec = closure(seed_set(dims, pair))
        assert dec.open_vertices(dims.volume) == ca_open_set(dims, pair)


def test_closure_empty_and_single():
    dims = Dimensions(3, 5)
    assert closure(seed_set(dims, [])).tori == frozenset()
    assert closure(seed_set(dims, [])).max_dimension() == -1
    single = closure(seed_set(dims, [(1, 2, 3)]))
    assert single.tori == frozenset((point_subtorus(dims, (1, 2, 3)),))


def test_closure_confluent_and_idempotent():
    import numpy as np

    rng = np.random.default_rng(17)
    for case in range(40):
        d = int(rng.integers(3, 5))
        n = int(rng.integers(3, 6))
        dims = Dimensions(d, n)
        pts = {tuple(int(c) for c in rng.integers(0, n, size=d))
               for _ in range(int(rng.integers(2, 9)))}
        s = seed_set(dims, pts)
        base = closure(s)
        assert closure(s, pair_rule="last").tori == base.tori
        assert closure(s, pair_rule=case).tori == base.tori
        assert closure(s, scan="basic").tori == base.tori
        again = closure(SeedSet(dims, frozenset(), frozenset(base.tori)))
        assert again.tori == base.tori


def test_fast_and_basic_pair_scans_agree():
    import numpy as np

    rng = np.random.default_rng(3)
    dims = Dimensions(4, 4)
    for _ in range(25):
        members = []
        for _ in range(int(rng.integers(0, 14))):
            k = int(rng.integers(0, 5))
            idx = sorted(int(i) for i in rng.choice(4, size=k, replace=False))
            members.append(
                Subtorus(dims, tuple((i, int(rng.integers(4))) for i in idx))
            )
        members = sorted(set(members), key=Subtorus.canonical_key)
        assert _pairs_within_fast(dims, members) == _pairs_within_basic(dims, members)


def test_pre_open_subtorus_participates():
    dims = Dimensions(3, 4)
    line = make_subtorus(dims, {0: 0, 1: 0})
    near = (0, 1, 0)
    dec = closure(seed_set(dims, [near], [line]))
    assert dec.tori == frozenset((make_subtorus(dims, {0: 0}),))
    dec2 = conditional_closure(line, seed_set(dims, [near]))
    assert dec2.tori == dec.tori


def test_is_internally_spanned_examples():
    dims = Dimensions(3, 4)
    plane = make_subtorus(dims, {2: 0})
    assert is_internally_spanned(plane, seed_set(dims, [(0, 0, 0), (1, 1, 0)]))
    # seeds outside the subtorus do not help
    assert not is_internally_spanned(plane, seed_set(dims, [(0, 0, 0), (1, 1, 1)]))
    line = make_subtorus(dims, {0: 0, 1: 0})
    assert not is_internally_spanned(line, seed_set(dims, [(0, 0, 0)]))
    assert is_internally_spanned(line, seed_set(dims, [(0, 0, 0), (0, 0, 3)]))


def test_exact_counts_match_automaton_reference():
    import numpy as np

    rng = np.random.default_rng(29)
    dims = Dimensions(3, 3)
    tori = list(all_subtori(dims))
    for _ in range(60):
        pts = {tuple(int(c) for c in rng.integers(0, 3, size=3))
               for _ in range(int(rng.integers(1, 6)))}
        s = seed_set(dims, pts)
        for dim in range(4):
            want = sum(
                1 for t in tori if t.dimension == dim and ca_internally_spanned(dims, t, pts)
            )
            assert spanned_count(s, dim, mode="exact") == want
            assert event_spanned(s, dim) == (want > 0)
        dec = closure(s)
        for dim in range(4):
            assert spanned_count(s, dim, mode="maximal") == dec.count_of_dimension(dim)
            assert event_covered(s, dim) == (dec.max_dimension() >= dim)


def test_spanned_implies_covered():
    import numpy as np

    rng = np.random.default_rng(31)
    dims = Dimensions(4, 3)
    for _ in range(30):
        pts = {tuple(int(c) for c in rng.integers(0, 3, size=4))
               for _ in range(int(rng.integers(1, 7)))}
        s = seed_set(dims, pts)
        for dim in range(5):
            if event_spanned(s, dim):
                assert event_covered(s, dim)


def test_generated_family_contains_all_internally_spanned():
    import numpy as np

    rng = np.random.default_rng(41)
    dims = Dimensions(3, 3)
    tori = list(all_subtori(dims))
    for _ in range(40):
        pts = {tuple(int(c) for c in rng.integers(0, 3, size=3))
               for _ in range(int(rng.integers(1, 6)))}
        fam = generated_family(seed_set(dims, pts))
        assert not fam.truncated
        spanned = {t for t in tori if ca_internally_spanned(dims, t, pts)}
        assert spanned <= fam.tori
        assert closure(seed_set(dims, pts)).tori <= fam.tori


def test_family_truncation_is_flagged():
    dims = Dimensions(3, 3)
    pts = list(itertools.product(range(3), repeat=3))
    fam = generated_family(seed_set(dims, pts), cap=10)
    assert fam.truncated
    assert len(fam.tori) <= 10
    with pytest.raises(BudgetExceededError):
        spanned_count(seed_set(dims, pts), 2, mode="exact", cap=10)


def test_full_grid_spans_whole_torus():
    dims = Dimensions(2, 4)
    pts = list(itertools.product(range(4), repeat=2))
    dec = closure(seed_set(dims, pts))
    assert dec.tori == frozenset((whole_torus(dims),))


def test_seed_set_validation():
    dims = Dimensions(2, 3)
    with pytest.raises(ValueError):
        seed_set(dims, [(0, 0, 0)])
    with pytest.raises(ValueError):
        seed_set(dims, [(0, 3)])
    other = make_subtorus(Dimensions(2, 4), {0: 0})
    with pytest.raises(ValueError):
        seed_set(dims, [], [other])
