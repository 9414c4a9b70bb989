import random
from fractions import Fraction

import pytest

from tropgrass.cluster import (CompiledPath, FrozenMutation, PointInChart, Seed, apply_path,
                               mutate_A, mutate_X, mutate_matrix, p_map, random_seed)
from tropgrass.semifield import Trop, monomial, neg_val


def test_matrix_mutation_examples():
    B = [[0, 1], [-1, 0]]
    assert mutate_matrix(B, 0)[0][1] == -1
    B3 = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
    M = mutate_matrix(B3, 1)
    assert (M[0][2], M[2][0], M[0][1], M[1][2]) == (1, -1, -1, -1)


def test_matrix_mutation_is_involutive_and_skew_symmetrizable():
    rng = random.Random(1)
    for _ in range(200):
        s = random_seed(rng, rng.randint(1, 6), rng.randint(0, 2))
        for k in s.mutable:
            s2 = s.mutate(k)
            s2.validate()
            assert s2.mutate(k).B == s.B


def test_frozen_mutation_rejected():
    s = Seed([0, 1], {1}, [[0, 1], [-1, 0]])
    with pytest.raises(FrozenMutation):
        s.mutate(1)
    with pytest.raises(FrozenMutation):
        mutate_A(PointInChart(s, [Fraction(1), Fraction(1)]), 1)


def test_gr24_exchange():
    # chart P13 | P12 P23 P34 P14 on the columns (1,0),(1,1),(1,2),(1,3)
    s = Seed(["13", "12", "23", "34", "14"], {"12", "23", "34", "14"},
             [[0, 1, -1, 1, -1], [-1, 0, 0, 0, 0], [1, 0, 0, 0, 0], [-1, 0, 0, 0, 0], [1, 0, 0, 0, 0]])
    pt = PointInChart(s, [Fraction(2), Fraction(1), Fraction(1), Fraction(1), Fraction(3)])
    assert mutate_A(pt, "13")["13"] == 2


def test_tropical_exchange_at_zero():
    s = Seed([0, 1, 2], {1, 2}, [[0, 1, -1], [-1, 0, 0], [1, 0, 0]])
    out = mutate_A(PointInChart(s, [Trop(0)] * 3), 0)
    assert out[0] == Trop(0)


def test_x_mutation_examples():
    s = Seed([0, 1], set(), [[0, 1], [-1, 0]])
    pt = PointInChart(s, [Fraction(2), Fraction(3)], "X")
    out = mutate_X(pt, 1)
    assert out[0] == Fraction(3, 2)
    assert out[1] == Fraction(1, 3)
    assert mutate_X(out, 1).coords == pt.coords


def test_x_mutation_tropical_formula_matches_series():
    rng = random.Random(2)
    for _ in range(50):
        s = random_seed(rng, 4)
        xs = [Fraction(rng.randint(-5, 5), rng.choice((1, 2))) for _ in range(4)]
        trop = PointInChart(s, [Trop(x) for x in xs], "X")
        ser = PointInChart(s, [monomial(rng.randint(1, 4), -x) for x in xs], "X")
        k = rng.choice(s.mutable)
        assert [c.value for c in mutate_X(trop, k).coords] == [neg_val(c) for c in mutate_X(ser, k).coords]


def test_path_identities():
    rng = random.Random(3)
    s = random_seed(rng, 3, 1)
    pt = PointInChart(s, [Fraction(rng.randint(1, 9)) for _ in range(4)])
    assert apply_path(pt, []) == pt
    assert apply_path(pt, [0, 0]).coords == pt.coords


def test_p_map_trivial_and_commutes_with_mutation():
    rng = random.Random(4)
    for _ in range(100):
        s = random_seed(rng, rng.randint(1, 5), rng.randint(0, 3))
        ones = PointInChart(s, [Fraction(1)] * len(s))
        assert all(x in (None, 1) for x in p_map(ones).coords)
        pt = PointInChart(s, [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(len(s))])
        k = rng.choice(s.mutable)
        assert p_map(mutate_A(pt, k)).coords == mutate_X(p_map(pt), k).coords


def test_compiled_path_matches_mutation():
    rng = random.Random(5)
    for _ in range(50):
        s = random_seed(rng, 5, 2)
        path = [rng.choice(s.mutable) for _ in range(6)]
        xs = [Fraction(rng.randint(-4, 4)) for _ in range(len(s))]
        slow = apply_path(PointInChart(s, [Trop(x) for x in xs]), path)
        cp = CompiledPath.build(s, path)
        assert cp.run(xs) == [c.value for c in slow.coords]
        assert cp.final.B == slow.chart.B


def test_seed_json_round_trip():
    rng = random.Random(6)
    s = random_seed(rng, 4, 2)
    assert Seed.from_json(s.to_json()) == s
