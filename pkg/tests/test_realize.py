import random
from fractions import Fraction

import pytest

from tropgrass.realize import flags_from_fan_chart, matrix_from_gr_chart, pair_frame
from tropgrass.seeds import (Triangulation, confA_chart_values, confA_seed, f_eval, gr_chart_values,
                             grassmannian_seed, pluecker_eval, random_rational_flags)


def test_matrix_from_gr_chart_round_trip():
    rng = random.Random(1)
    for k, n in [(2, 5), (3, 6), (4, 8)]:
        seed = grassmannian_seed(k, n)
        vals = {lab: Fraction(rng.randint(1, 20), rng.randint(1, 5)) for lab in seed.labels}
        M = matrix_from_gr_chart(vals, k, n)
        assert gr_chart_values(seed, M).by_label() == vals


def test_flags_from_fan_chart_round_trip():
    rng = random.Random(2)
    for k, n, base in [(2, 5, 1), (3, 5, 1), (3, 6, 3), (4, 6, 2)]:
        seed = confA_seed(k, n, Triangulation.fan(n, base))
        vals = {lab: Fraction(rng.randint(1, 20), rng.randint(1, 5)) for lab in seed.labels}
        C = flags_from_fan_chart(vals, k, n, base)
        assert confA_chart_values(seed, C).by_label() == vals


def test_realized_flags_reproduce_a_configuration():
    rng = random.Random(3)
    C = random_rational_flags(rng, 3, 5)
    seed = confA_seed(3, 5)
    D = flags_from_fan_chart(confA_chart_values(seed, C).by_label(), 3, 5)
    # same chart values, hence the same value on every other flag monomial
    for lab in confA_seed(3, 5, Triangulation.fan(5, 3)).labels:
        assert f_eval(D, lab) == f_eval(C, lab)


def test_pair_frame_needs_standard_frame():
    G = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]
    with pytest.raises(ValueError):
        pair_frame(G, G, Fraction(1))
    F = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    g = pair_frame(F, [[Fraction(1), Fraction(3)], [Fraction(0), Fraction(1)]], Fraction(1))
    assert g[0][0] == 1 and g[1][1] == 1
