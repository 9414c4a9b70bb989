import random
from fractions import Fraction

import pytest

from tropgrass.building import (LatticeRep, config_from_flags, dominates, elementary_divisors,
                                f_on_config, f_trop_bruteforce, lattice_distance, metric_f_min,
                                omega_dot, same_lattice, valuation_minimizing_check)
from tropgrass.hive import random_hive_point
from tropgrass.realize import flags_from_fan_chart
from tropgrass.seeds import Triangulation, vectors_to_flags
from tropgrass.semifield import GenSeries, monomial
from tropgrass.trop import lift_to_series

F = Fraction


def random_lattice(rng, k, lo=-3, hi=3, mode="PGL"):
    while True:
        gens = [[GenSeries({rng.randint(lo, hi): rng.randint(-2, 2)}) if rng.random() < 0.8 else GenSeries()
                 for _ in range(k)] for _ in range(k)]
        try:
            return LatticeRep(gens, mode)
        except ValueError:
            pass


def test_distance_examples():
    L = LatticeRep.standard(2)
    assert lattice_distance(L, L) == [0, 0]
    D = LatticeRep([[monomial(1, -2), 0], [0, monomial(1, 1)]])
    assert elementary_divisors(L, D) == [-2, 1]
    assert lattice_distance(L, D, "GL") == [2, -1]
    assert lattice_distance(L, D) == [F(3, 2), F(-3, 2)]
    assert lattice_distance(LatticeRep.standard(3), LatticeRep.from_coweight([1, -4, 3])) == [3, 1, -4]


def test_distance_is_scale_invariant_in_pgl():
    rng = random.Random(1)
    L1, L2 = random_lattice(rng, 3), random_lattice(rng, 3)
    assert lattice_distance(L1.scaled(2), L2) == lattice_distance(L1, L2)


def test_sl_lattice_needs_unit_determinant():
    with pytest.raises(ValueError):
        LatticeRep([[monomial(1, 1), 0], [0, 1]], "SL")
    with pytest.raises(ValueError):
        LatticeRep([[1, 1], [1, 1]])


def test_antisymmetry():
    rng = random.Random(2)
    for k in (2, 3, 4):
        for _ in range(10):
            L1, L2 = random_lattice(rng, k), random_lattice(rng, k)
            assert lattice_distance(L2, L1) == [-m for m in reversed(lattice_distance(L1, L2))]


def test_triangle_inequality_in_dominance_order():
    rng = random.Random(3)
    for k in (2, 3):
        for _ in range(15):
            p, q, r = (random_lattice(rng, k) for _ in range(3))
            pq, qr, pr = lattice_distance(p, q), lattice_distance(q, r), lattice_distance(p, r)
            assert dominates([a + b for a, b in zip(pq, qr)], pr)


def test_same_lattice():
    L = LatticeRep([[1, 0], [1, 1]])
    assert same_lattice(L, LatticeRep.standard(2))
    assert not same_lattice(L.scaled(1), L)


def test_bruteforce_examples():
    for k in (2, 3):
        std = LatticeRep.standard(k)
        assert f_trop_bruteforce([std] * k, [1] * k).value == 0
    res = f_trop_bruteforce([LatticeRep.standard(2)] * 2, [1, 1], bound=2)
    assert res.stable and res.value == 0


def test_edge_identity():
    rng = random.Random(4)
    for k in (2, 3):
        for _ in range(15):
            L1, L2 = random_lattice(rng, k), random_lattice(rng, k)
            mu = lattice_distance(L1, L2)
            for i in range(1, k):
                assert f_trop_bruteforce([L1, L2], [i, k - i]).value == omega_dot(k - i, mu)


def test_combination_search_never_beats_generators():
    rng = random.Random(5)
    for _ in range(5):
        lats = [random_lattice(rng, 2, -2, 2) for _ in range(2)]
        res = f_trop_bruteforce(lats, [1, 1], bound=1)
        assert all(v is None or v <= res.raw for _, v in res.search)


def test_metric_min_examples():
    std = LatticeRep.standard(3)
    assert metric_f_min([std], [3], window=1, pairs=False)[0] == 0
    assert metric_f_min([std, std], [1, 2], window=1, pairs=False)[0] == 0


def test_metric_min_agrees_with_bruteforce_pgl2():
    rng = random.Random(6)
    for _ in range(6):
        lats = [random_lattice(rng, 2, -2, 2) for _ in range(2)]
        assert metric_f_min(lats, [1, 1])[0] == f_trop_bruteforce(lats, [1, 1]).value


def test_identity_flags_give_standard_lattices():
    C = vectors_to_flags([[[1, 0], [0, 1]]])
    cfg = config_from_flags(C, check_all=True)
    assert cfg.independent
    assert all(same_lattice(L, LatticeRep.standard(2, "SL")) for L in cfg.lattices)


def test_valuation_minimizing_check_examples():
    rng = random.Random(9)
    x = random_hive_point(rng, 2, 4)
    cfg = config_from_flags(flags_from_fan_chart(lift_to_series(x).by_label(), 2, 4))
    assert valuation_minimizing_check(cfg.lattices, cfg.bases).ok
    bases = [list(b) for b in cfg.bases]
    bases[0] = [[-x for x in bases[0][0]]] + bases[0][1:]
    rep = valuation_minimizing_check(cfg.lattices, bases)
    assert not rep.ok and any(f[2] == "sign" for f in rep.failures)


def test_oracle_reproduces_chart_coordinates():
    rng = random.Random(7)
    for k, n in [(2, 4), (3, 4)]:
        x = random_hive_point(rng, k, n)
        C = flags_from_fan_chart(lift_to_series(x, rng).by_label(), k, n)
        cfg = config_from_flags(C, check_all=True)
        assert cfg.independent
        for lab, v in x.by_label().items():
            assert f_on_config(cfg, lab).value == v
        assert valuation_minimizing_check(cfg.lattices, cfg.bases, Triangulation.fan(n)).ok


def test_lattice_json_round_trip():
    rng = random.Random(8)
    L = random_lattice(rng, 3)
    assert LatticeRep.from_json(L.to_json()) == L
