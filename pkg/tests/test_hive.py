import random
from fractions import Fraction
from itertools import combinations

import pytest

from tropgrass.hive import (ReductionOverflow, act_lineality, all_keyeqn_ok, all_monomials,
                            all_plucker_zero, boundary_from_chart, boundary_from_frozen,
                            boundary_of, cone_check, distinguished_lift, dual_section,
                            frozen_from_boundary, frozen_values, hive_check, integrality_check,
                            keyeqn_check, keyeqn_instances, l_lamination, l_scaling,
                            lamination_lift, lineality_representative, monomial_value,
                            plucker_from_json, plucker_json, random_hive_point, reduce_any_order,
                            reduce_to_plucker, rw_normalize, sample_hive_face, triangle_rhombi,
                            weight_report)
from tropgrass.labels import FlagMonomial, Plucker
from tropgrass.seeds import Triangulation, confA_seed, flip_sequence
from tropgrass.trop import TropPoint, act_T, change_chart, chart_ref_confA, pushforward_pi, random_plucker_vector

F = Fraction
FM = FlagMonomial.of


def test_frozen_from_boundary_examples():
    assert frozen_from_boundary([2, 2, 2, 2], 2) == [1, 1, 1, 1]
    a = [0, 1, 0, 0, 0, 0, 0, 0]
    assert frozen_from_boundary(a, 4) == [F(1, 4), 0, 0, 0, 0, 0, F(3, 4), F(1, 2)]
    assert frozen_from_boundary([0] * 6, 3) == [0] * 6


def test_boundary_from_frozen_examples():
    assert boundary_from_frozen([1, 1, 1, 1], 2) == [2, 2, 2, 2]
    F8 = [F(1, 4), 0, 0, 0, 0, 0, F(3, 4), F(1, 2)]
    assert boundary_from_frozen(F8, 4) == [0, 1, 0, 0, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        boundary_from_frozen([1, 2, 3], 3)


def test_frozen_round_trip_all_sizes():
    rng = random.Random(1)
    for n in range(3, 13):
        for k in range(2, n):
            a = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
            assert boundary_from_frozen(frozen_from_boundary(a, k), k) == a
            Fv = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
            assert frozen_from_boundary(boundary_from_frozen(Fv, k), k) == Fv


def test_reduce_examples():
    a = [F(x) for x in (3, 5, 7, 11, 13, 17, 19, 23)]
    n = 8
    assert reduce_to_plucker(FM({3: 2, 5: 1, 6: 1}), a, n) == (Plucker((2, 3, 5, 6)), -a[2] / 4)
    assert reduce_to_plucker(FM({1: 1, 4: 1, 6: 1, 8: 1}), a, n) == (Plucker((1, 4, 6, 8)), 0)
    k = 4
    for i in range(1, n + 1):
        v = (i + k - 2) % n + 1
        J, off = reduce_to_plucker(FM({v: k}), a, n)
        assert J == Plucker(tuple((i + j - 1) % n + 1 for j in range(k)))
        assert off == -sum(F(j, k) * a[(i + j - 1) % n] for j in range(1, k))


def test_reduction_order_independent():
    rng = random.Random(2)
    for k, n in [(3, 5), (4, 8), (3, 7)]:
        a = [F(rng.randint(0, 9)) for _ in range(n)]
        for m in all_monomials(k, n):
            ref = reduce_to_plucker(m, a, n)
            assert reduce_any_order(m, a, n, min) == ref
            assert reduce_any_order(m, a, n, lambda h: rng.choice(h)) == ref


def test_reduction_needs_k_below_n():
    with pytest.raises(ValueError):
        reduce_to_plucker(FM({1: 2, 2: 1}), [0, 0, 0], 3)
    assert issubclass(ReductionOverflow, ArithmeticError)


def test_hive_check_examples():
    for k, n in [(3, 3), (4, 5)]:
        seed = confA_seed(k, n)
        zero = TropPoint(seed, [0] * len(seed), chart_ref_confA(k, n))
        rep = hive_check(zero)
        assert rep.member and rep.min_slack() == 0
    seed = confA_seed(3, 3)
    bumped = {lab: F(0) for lab in seed.labels}
    bumped[FM({1: 1, 2: 1, 3: 1})] = F(1)
    rep = hive_check(bumped, 3, 3)
    assert not rep.member
    assert rep.violated and all(r[0][0] == "hive" for r in rep.violated)


def test_rhombus_count():
    for k in range(1, 6):
        assert len(triangle_rhombi(k)) == 3 * k * (k - 1) // 2


def test_random_hive_points_are_strict():
    rng = random.Random(3)
    for k, n in [(2, 4), (3, 5), (4, 3)]:
        x = random_hive_point(rng, k, n, margin=1)
        rep = hive_check(x)
        assert rep.member and rep.min_slack() > 0


def test_lift_of_zero_and_section_property_k2():
    for n in (4, 5):
        y = all_plucker_zero(2, n)
        assert set(distinguished_lift(y, 2, n).coords) == {0}
    rng = random.Random(4)
    for n in (4, 5, 6):
        y = random_plucker_vector(rng, 2, n)
        x = distinguished_lift(y, 2, n)
        assert pushforward_pi(x, full=True) == y
        assert all_keyeqn_ok(x)
        assert hive_check(x).member == cone_check(y, 2, n).member


def _honest(rng, k, n, sides=None, T=None):
    x, a = sample_hive_face(rng, k, n, sides, T)
    assert hive_check(x).member
    return x, a


def test_honest_points_are_consistent():
    rng = random.Random(5)
    for k, n in [(3, 4), (3, 5), (4, 5)]:
        x, a = _honest(rng, k, n)
        assert boundary_from_chart(x, k, n) == a
        assert all_keyeqn_ok(x, a)
        y = pushforward_pi(x, full=True)
        assert boundary_of(y, k, n) == a
        assert distinguished_lift(y, k, n).coords == x.coords
        assert cone_check(y, k, n).member


def test_lift_is_triangulation_independent():
    rng = random.Random(6)
    x, _ = _honest(rng, 3, 5)
    y = pushforward_pi(x, full=True)
    T = Triangulation.fan(5)
    for d in T.diagonals:
        T2, path, rel = flip_sequence(T, d, 3)
        moved = change_chart(distinguished_lift(y, 3, 5, T), path)
        direct = distinguished_lift(y, 3, 5, T2).by_label()
        assert all(moved.coords[moved.chart.pos(i)] == direct[rel[i]] for i in moved.chart.indices)


def test_one_sided_triangle_keyeqn():
    rng = random.Random(7)
    k = 4
    T = Triangulation(3, [(1, 2, 3)])
    x, a = _honest(rng, k, 3, {3}, T)
    vals = x.by_label()
    val = lambda m: F(0) if FM(m).is_pure() else vals[FM(m)]
    for i1 in range(k + 1):
        for i2 in range(k + 1 - i1):
            i3 = k - i1 - i2
            if i3 == 0:
                continue  # C must be present for the relation to apply
            assert val({1: i1, 2: i2, 3: i3}) == val({1: i1, 3: i2 + i3}) + a[2] * i2 / k
    for i in range(1, k):
        assert val({2: i, 3: k - i}) == a[2] * i / k


def test_perturbing_a_lift_breaks_keyeqn():
    rng = random.Random(8)
    x, a = _honest(rng, 3, 4)
    for p in range(len(x.coords)):
        c = list(x.coords)
        c[p] += F(1, 3)
        assert keyeqn_check(x.with_coords(c), a)


def test_cone_check_examples():
    y = all_plucker_zero(3, 6)
    rep = cone_check(y, 3, 6)
    assert rep.member and all(r[3] == 0 for r in rep.rows)
    alpha = [0, -1, 0, 0]
    y = {Plucker(J): F(sum(alpha[i - 1] for i in J)) for J in combinations(range(1, 5), 2)}
    assert not cone_check(y, 2, 4).member
    assert not hive_check(distinguished_lift(y, 2, 4)).member


def test_l_lamination_examples():
    l1 = l_lamination(1, 4, 8)
    assert l1[Plucker((1, 2, 3, 4))] == F(3, 2)
    assert l1[Plucker((4, 5, 6, 7))] == 0
    assert frozen_values(l1, 4, 8) == frozen_from_boundary([1, 1, 1, 1, 0, 0, 0, 0], 4)
    for i in range(1, 9):
        li = l_lamination(i, 4, 8)
        assert act_T(all_plucker_zero(4, 8), l_scaling(i, 4, 8)) == li


def test_l_lifts_are_consistent_hive_points():
    for k, n in [(3, 5), (4, 8)]:
        for i in (1, 2):
            x = lamination_lift([1 if j == i else 0 for j in range(1, n + 1)], k, n)
            assert hive_check(x).member
            assert pushforward_pi(x, full=True) == l_lamination(i, k, n)


def test_act_lineality():
    rng = random.Random(9)
    y = random_plucker_vector(rng, 3, 6)
    assert act_lineality(y, [0] * 6, 3, 6) == y
    c = [F(rng.randint(-3, 3)) for _ in range(6)]
    lhs = distinguished_lift(act_lineality(y, c, 3, 6), 3, 6)
    rhs = distinguished_lift(y, 3, 6) + lamination_lift(c, 3, 6)
    assert lhs.coords == rhs.coords


def test_lineality_representative_reaches_the_cone():
    rng = random.Random(10)
    for k, n in [(2, 5), (3, 6), (4, 8)]:
        y = random_plucker_vector(rng, k, n)
        for method in ("uniform", "lp"):
            c = lineality_representative(y, k, n, method)
            assert cone_check(act_lineality(y, c, k, n), k, n).member


def test_integrality_and_weights():
    assert integrality_check(all_plucker_zero(3, 5), 3, 5).integral
    rep = integrality_check(l_lamination(1, 4, 8), 4, 8)
    assert rep.integral and not rep.plucker_integral and 4 in rep.denominators
    y = act_T(all_plucker_zero(2, 4), [F(1, 2)] * 4)
    assert frozen_values(y, 2, 4) == [1, 1, 1, 1]
    assert integrality_check(y, 2, 4).integral
    assert weight_report(y, 2, 4) == {"weights": [2, 2, 2, 2], "r": 8, "trivial": False}
    assert weight_report(all_plucker_zero(2, 4), 2, 4)["trivial"]
    assert weight_report(l_lamination(1, 4, 8), 4, 8)["weights"] == [1, 1, 1, 1, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        weight_report(act_T(all_plucker_zero(2, 4), [F(1, 3), 0, 0, 0]), 2, 4)


def test_rw_normalize():
    rng = random.Random(11)
    y = random_plucker_vector(rng, 3, 5)
    assert rw_normalize(y, [0] * 5, 3) == y
    shifted = rw_normalize(y, [1, 0, 0, 0, 0], 3)
    assert shifted == act_T(y, [0, F(1, 3), F(1, 3), F(1, 3), F(1, 3)])


def test_dual_section_experimental():
    rng = random.Random(12)
    y = random_plucker_vector(rng, 2, 5)
    assert dual_section(y, 2, 5).coords == distinguished_lift(y, 2, 5).coords
    x, _ = _honest(rng, 3, 5)
    y = pushforward_pi(x, full=True)
    d = dual_section(y, 3, 5)
    assert pushforward_pi(d, full=True) == y
    assert hive_check(d).member


def test_keyeqn_instances_shape():
    for inst in keyeqn_instances(3, 4):
        m, m2, v, b = inst
        assert m.k == m2.k == 3 and m2.exp(v) == m.exp(v) + b


def test_monomial_value_of_pure_label():
    assert monomial_value({}, FM({2: 3}), [1, 2, 3, 4], 4) == 0


def test_plucker_json_round_trip():
    rng = random.Random(13)
    y = random_plucker_vector(rng, 3, 6, denom=2)
    assert plucker_from_json(plucker_json(y)) == y
