import math
from fractions import Fraction as F

import numpy as np
import pytest

from bczmap.core import bcz_step
from bczmap.farey import (
    counting_bound_check,
    empirical_integral,
    farey_bruteforce,
    farey_cardinality,
    farey_orbit,
    h_spacing_proportion,
    index_values,
    index_values_via_kappa,
    interval_count,
    moment_sum,
    orbit_flow_period,
    spacing_proportion,
    totient,
)
from bczmap.measure import MAX_PEAK_INTEGRAL, MIN_PEAK_INTEGRAL, grid_measure, hall_cdf

PI2_3 = math.pi**2 / 3


def test_cardinality():
    assert farey_cardinality(1) == 1
    assert farey_cardinality(3) == 4
    assert farey_cardinality(4) == 6
    assert farey_cardinality(5) == 10
    # against a gcd-counting totient
    for q in range(1, 60):
        assert totient(q) == sum(1 for p in range(1, q + 1) if math.gcd(p, q) == 1)


def test_bruteforce_small():
    assert [str(f) for f in farey_bruteforce(2).fractions()] == ["0", "1/2"]
    f5 = farey_bruteforce(5).fractions()
    assert [str(f) for f in f5] == [
        "0", "1/5", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "4/5",
    ]


def test_orbit_q5_denominators():
    assert farey_orbit(5).denominators.tolist() == [1, 5, 4, 3, 5, 2, 5, 3, 4, 5]


def test_orbit_q1_fixed_point():
    seq = farey_orbit(1)
    assert len(seq) == 1 and seq.denominators.tolist() == [1]


def test_orbit_matches_exact_bcz_iteration():
    # the integer recurrence is the BCZ map with denominators cleared
    for Q in (2, 7, 12, 30):
        seq = farey_orbit(Q)
        p = (F(1, Q), F(1))
        for i in range(len(seq)):
            assert p[0] * Q == seq.denominators[i]
            p = bcz_step(p)
        assert p == (F(1, Q), F(1))


def test_oracle_equivalence_medium():
    for Q in range(1, 61):
        assert farey_orbit(Q).denominators.tolist() == farey_bruteforce(Q).denominators.tolist()


def test_flow_period_medium():
    for Q in range(1, 61):
        assert orbit_flow_period(Q) == Q * Q


def test_neighbor_identities():
    for Q in list(range(2, 121)) + [300]:
        seq = farey_orbit(Q)
        p, q = seq.numerators, seq.denominators
        pn, qn = np.roll(p, -1), np.roll(q, -1)
        pn[-1], qn[-1] = 1, 1  # gamma_{N+1} = 1/1
        assert np.all(pn * q - p * qn == 1)
        assert np.all(q + qn > Q)


def test_large_kappa_neighbor_structure():
    # a large index n >= 4r+2 forces kappa = 1 next door and kappa = 2 at
    # offsets 1 < |i| <= r, along every Farey orbit
    for Q in range(2, 301):
        q = farey_orbit(Q).denominators
        qm = np.roll(q, 1)
        kap = (Q + qm) // q  # kappa at orbit position associated with gamma_i
        n = len(kap)
        for j in np.nonzero(kap >= 6)[0]:
            r = (int(kap[j]) - 2) // 4
            assert kap[(j + 1) % n] == 1 and kap[(j - 1) % n] == 1
            for off in range(2, r + 1):
                assert kap[(j + off) % n] == 2
                assert kap[(j - off) % n] == 2


def test_index_values():
    for Q in list(range(2, 121)) + [200, 300]:
        assert np.array_equal(index_values(Q), index_values_via_kappa(Q))
    nu = index_values(1000)
    assert nu.max() <= 2000
    assert abs(nu.mean() - 3) < 1e-2


def test_index_distribution_matches_tile_masses():
    # equidistribution over tiles: freq(nu = k) -> m(Omega_k)
    from bczmap.measure import tile_measure

    nu = index_values(1000)
    n = len(nu)
    for k in (1, 2, 3, 4, 5, 10):
        freq = np.count_nonzero(nu == k) / n
        assert abs(freq - float(tile_measure(k))) < 1e-3


def test_index_interval_selection():
    # I = [1/4, 1/3] at Q = 5 selects exactly {1/4, 1/3} (closed endpoints)
    assert interval_count(5, (F(1, 4), F(1, 3))) == 2
    assert len(index_values(5, (F(1, 4), F(1, 3)))) == 2
    with pytest.raises(ValueError):
        index_values(1)


def test_interval_mask_huge_denominators():
    # exact selection survives bounds whose cross-products overflow int64
    eps = F(1, 10**17)
    assert interval_count(40, (F(1, 4) - eps, F(1, 4) + eps)) == 1
    assert interval_count(40, (F(1, 4) + eps, F(1, 3) - eps)) == \
        interval_count(40, (F(1, 4), F(1, 3))) - 2


def test_spacing_trivial_windows():
    assert spacing_proportion(200, (0, 1), 0, math.inf) == 1.0
    # normalized gaps never fall below 3|I|/pi^2
    assert spacing_proportion(200, (0, 1), 0, 3 / math.pi**2) == 0.0
    assert spacing_proportion(150, (F(1, 4), F(3, 4)), 0, 0.5 * 3 / math.pi**2) == 0.0


def test_spacing_matches_limit_q2000():
    assert abs(spacing_proportion(2000, (0, 1), 0, 1.0) - hall_cdf(1.0)) < 1e-2


def test_h_spacing_reduces_to_spacing():
    for win in [(0.0, 1.0), (0.5, 2.0)]:
        a = h_spacing_proportion(500, (0, 1), [win])
        b = spacing_proportion(500, (0, 1), *win)
        assert a == b


def test_h_spacing_trivial_box():
    assert h_spacing_proportion(300, (0, 1), [(0, math.inf)] * 3) == 1.0


def test_h_spacing_pair_box_vs_grid_quadrature():
    # mass of {R in B1, R o T in B2} by midpoint grid, B = (0, 1) rescaled
    scale = math.pi**2 / 3

    def pair_indicator(A, B):
        R1 = 1.0 / (A * B)
        kap = np.floor((1.0 + A) / B)
        B2 = kap * B - A
        with np.errstate(divide="ignore", invalid="ignore"):
            R2 = 1.0 / (B * B2)
        return (R1 < scale) & (B2 > 0) & (R2 < scale)

    expected = grid_measure(pair_indicator, n=4000)
    got = h_spacing_proportion(2000, (0, 1), [(0.0, 1.0), (0.0, 1.0)])
    assert abs(got - expected) < 2e-2


def test_moment_sum_telescoping():
    for Q in (50, 400):
        v = moment_sum(Q, (0, 1), -1, -1)
        assert v == pytest.approx(Q * Q / farey_cardinality(Q), rel=1e-12)


def test_moment_sums_q1000():
    assert abs(moment_sum(1000, (0, 1), 1, 0) - 2 / 3) < 5e-3
    assert abs(moment_sum(1000, (0, 1), -1, 0) - 2) < 1e-2


def test_moment_sum_complex():
    v = moment_sum(300, (0, 1), complex(1, 0), complex(0, 0))
    assert v.imag == pytest.approx(0.0)
    assert v.real == pytest.approx(moment_sum(300, (0, 1), 1, 0))


def test_empirical_measure_support():
    from bczmap.farey import empirical_measure
    from bczmap.core import in_section

    m = empirical_measure(40, (F(1, 4), F(1, 2)))
    assert len(m) == interval_count(40, (F(1, 4), F(1, 2)))
    assert len(m) * m.weight == pytest.approx(1.0)
    pts = m.support()
    assert all(in_section(p) for p in pts)
    # support points are genuine orbit points: denominators q_i, q_{i+1}
    assert pts[0][0].denominator <= 40


def test_empirical_integral():
    assert empirical_integral(500, (0, 1), lambda a, b: np.ones_like(a)) == 1.0
    mx = empirical_integral(
        1000, (0, 1), lambda a, b: np.maximum(np.maximum(a, b), 1 / (a + b))
    )
    mn = empirical_integral(
        1000, (0, 1), lambda a, b: np.minimum(np.minimum(1 / a, 1 / b), a + b)
    )
    assert abs(mx - MAX_PEAK_INTEGRAL) < 1e-2
    assert abs(mn - MIN_PEAK_INTEGRAL) < 1e-2


def test_counting_bound():
    for Q in (10, 100, 500):
        assert counting_bound_check(Q, (0, 1))
    assert counting_bound_check(100, (F(3, 10), F(31, 100)))
    n = interval_count(2000, (0, 1))
    assert abs(n / (3 / math.pi**2 * 2000**2) - 1) < 1e-2


def test_counting_bound_empty_selection():
    with pytest.raises(ValueError):
        counting_bound_check(3, (F(2, 7), F(3, 10)))  # no level-3 fraction inside


def test_spacing_empty_selection():
    with pytest.raises(ValueError):
        spacing_proportion(3, (F(2, 7), F(3, 10)), 0, 1)
