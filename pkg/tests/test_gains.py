import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from infogain.errors import DomainError
from infogain.gains import (
    diff_gain,
    diff_gain_asymptotic,
    diff_gain_values,
    expected_gain,
    expected_gain_asymptotic,
    expected_gain_values,
    gain_report,
    rel_gain,
    rel_gain_asymptotic,
    rel_gain_values,
)
from infogain.model import BetaPrior, Outcome, TossSummary

HEAD, TAIL = Outcome.HEAD, Outcome.TAIL


def H(n):
    return float(sum(Fraction(1, k) for k in range(1, n + 1)))


# alpha = 0, N = 10, h = 0: psi(2) - psi(13) = H_1 - H_12
BLACK_SWAN_REL = H(1) - H(12) + math.log(12.0)
BLACK_SWAN_DIFF = BLACK_SWAN_REL - 10.0 / 12.0


def grid_points(alphas, max_n):
    a, n, h = [], [], []
    for alpha in alphas:
        for nn in range(0, max_n + 1):
            a.append(np.full(nn + 1, alpha))
            n.append(np.full(nn + 1, nn))
            h.append(np.arange(nn + 1))
    return np.concatenate(a), np.concatenate(n), np.concatenate(h)


priors = st.floats(-0.99, 5.0)


@st.composite
def summaries(draw, max_n=2000):
    n = draw(st.integers(0, max_n))
    return TossSummary(n, draw(st.integers(0, n)))


class TestDiffGain:
    def test_first_toss_uniform(self):
        assert diff_gain(BetaPrior(0.0), TossSummary(0, 0), HEAD) == pytest.approx(math.log(2) - 0.5, abs=1e-13)

    def test_black_swan(self):
        value = diff_gain(BetaPrior(0.0), TossSummary(10, 0), HEAD)
        assert value == pytest.approx(BLACK_SWAN_DIFF, abs=1e-12)
        assert value == pytest.approx(-0.4516, abs=1e-4)

    def test_jeffreys_concentrates(self):
        value = diff_gain(BetaPrior(-0.5), TossSummary(10_000, 5000), HEAD)
        assert value == pytest.approx(1.0 / (2 * 10_001), abs=1e-6)

    def test_tail_branch_by_hand(self):
        # alpha = 0, N = 10, h = 0, Tail: psi(12) - psi(13) + 10/11 - 10/12 + ln(12/11)
        expected = -1.0 / 12.0 + 10 / 11 - 10 / 12 + math.log(12 / 11)
        assert diff_gain(BetaPrior(0.0), TossSummary(10, 0), TAIL) == pytest.approx(expected, abs=1e-12)

    def test_vectorised_matches_scalar(self):
        h = np.arange(31)
        vec = diff_gain_values(0.3, 30, h, TAIL)
        for k in h:
            assert vec[k] == diff_gain(BetaPrior(0.3), TossSummary(30, int(k)), TAIL)

    def test_validation(self):
        with pytest.raises(DomainError):
            diff_gain_values(-1.0, 3, 1)
        with pytest.raises(DomainError):
            diff_gain_values(0.0, 3, 4)


class TestRelGain:
    def test_first_toss_uniform(self):
        assert rel_gain(BetaPrior(0.0), TossSummary(0, 0), HEAD) == pytest.approx(math.log(2) - 0.5, abs=1e-13)

    def test_black_swan(self):
        value = rel_gain(BetaPrior(0.0), TossSummary(10, 0), HEAD)
        assert value == pytest.approx(BLACK_SWAN_REL, abs=1e-12)
        assert value == pytest.approx(0.3817, abs=1e-4)

    def test_large_n_jeffreys(self):
        # (N - h) / (2 h N) = 5000 / (2 * 5000 * 1e4) = 5e-5
        value = rel_gain(BetaPrior(-0.5), TossSummary(10_000, 5000), HEAD)
        assert value == pytest.approx(5e-5, abs=2e-6)

    def test_non_negative_on_grid(self):
        alphas = np.round(np.arange(-0.9, 0.91, 0.05), 10)
        a, n, h = grid_points(alphas, 200)
        assert np.all(rel_gain_values(a, n, h, HEAD) >= 0.0)
        assert np.all(rel_gain_values(a, n, h, TAIL) >= 0.0)


class TestIdentities:
    @given(priors, summaries())
    def test_head_tail_symmetry(self, alpha, data):
        prior = BetaPrior(alpha)
        assert abs(diff_gain(prior, data, HEAD) - diff_gain(prior, data.mirrored(), TAIL)) <= 1e-12
        assert abs(rel_gain(prior, data, HEAD) - rel_gain(prior, data.mirrored(), TAIL)) <= 1e-12

    @given(priors, st.sampled_from([HEAD, TAIL]))
    def test_n_zero_coincidence(self, alpha, outcome):
        prior, data = BetaPrior(alpha), TossSummary(0, 0)
        assert diff_gain(prior, data, outcome) == rel_gain(prior, data, outcome)

    @given(priors, summaries())
    def test_bridge(self, alpha, data):
        prior = BetaPrior(alpha)
        bridge = data.h / (data.h + alpha + 1) - data.n / (data.n + 2 * alpha + 2)
        assert abs(diff_gain(prior, data, HEAD) - rel_gain(prior, data, HEAD) - bridge) <= 1e-12

    @given(priors, summaries())
    def test_relative_gain_non_negative(self, alpha, data):
        for outcome in (HEAD, TAIL):
            assert rel_gain(BetaPrior(alpha), data, outcome) >= 0.0

    @given(priors, summaries())
    def test_expected_equals_weighted_branches(self, alpha, data):
        prior = BetaPrior(alpha)
        p = (data.h + alpha + 1) / (data.n + 2 * alpha + 2)
        q = (data.n - data.h + alpha + 1) / (data.n + 2 * alpha + 2)
        direct = expected_gain(prior, data)
        via_diff = p * diff_gain(prior, data, HEAD) + q * diff_gain(prior, data, TAIL)
        via_rel = p * rel_gain(prior, data, HEAD) + q * rel_gain(prior, data, TAIL)
        assert abs(direct - via_diff) <= 1e-12
        assert abs(direct - via_rel) <= 1e-12


class TestExpectedGain:
    def test_first_toss(self):
        assert expected_gain(BetaPrior(0.0), TossSummary(0, 0)) == pytest.approx(math.log(2) - 0.5, abs=1e-13)

    def test_black_swan_state_by_hand(self):
        tail_diff = -1.0 / 12.0 + 10 / 11 - 10 / 12 + math.log(12 / 11)
        expected = BLACK_SWAN_DIFF / 12 + 11 * tail_diff / 12
        assert expected_gain(BetaPrior(0.0), TossSummary(10, 0)) == pytest.approx(expected, abs=1e-12)

    def test_moderate_n(self):
        # alpha = 0, N = 100, h = 50: psi(52) - psi(103) + ln 2 = H_51 - H_102 + ln 2
        expected = H(51) - H(102) + math.log(2.0)
        value = expected_gain(BetaPrior(0.0), TossSummary(100, 50))
        assert value == pytest.approx(expected, abs=1e-12)
        # the 1/(2N) asymptote is only good to ~2.5% here
        assert value == pytest.approx(1 / 200, rel=0.03)

    def test_positive(self):
        a, n, h = grid_points([-0.9, -0.5, 0.0, 2.0], 80)
        assert np.all(expected_gain_values(a, n, h) > 0.0)


class TestAsymptotic:
    @given(summaries(), st.sampled_from([HEAD, TAIL]))
    def test_jeffreys_diff_exact(self, data, outcome):
        value = diff_gain_asymptotic(BetaPrior(-0.5), data, outcome)
        assert value == pytest.approx(1.0 / (2 * (data.n + 1)), rel=1e-12, abs=1e-15)

    def test_diff_arithmetic(self):
        value = diff_gain_asymptotic(BetaPrior(0.0), TossSummary(10, 5), HEAD)
        assert value == pytest.approx(1 / 24, abs=1e-15)

    def test_diff_converges(self):
        data = TossSummary(10**6, 5 * 10**5)
        assert abs(diff_gain(BetaPrior(0.0), data) - diff_gain_asymptotic(BetaPrior(0.0), data)) <= 1e-9

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
    def test_diff_monotone_convergence(self, alpha):
        prior = BetaPrior(alpha)
        gaps = [abs(diff_gain(prior, TossSummary(n, n // 2)) - diff_gain_asymptotic(prior, TossSummary(n, n // 2)))
                for n in (100, 1000, 10_000)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_rel_arithmetic(self):
        assert rel_gain_asymptotic(TossSummary(100, 50), HEAD) == pytest.approx(5e-3)
        assert rel_gain_asymptotic(TossSummary(100, 100), HEAD) == 0.0
        assert rel_gain_asymptotic(TossSummary(100, 20), TAIL) == pytest.approx(20 / (2 * 80 * 100))

    def test_rel_black_swan_corner(self):
        with pytest.raises(DomainError):
            rel_gain_asymptotic(TossSummary(10, 0), HEAD)
        with pytest.raises(DomainError):
            rel_gain_asymptotic(TossSummary(10, 10), TAIL)

    def test_rel_converges(self):
        def rel_err(n, h):
            exact = rel_gain(BetaPrior(0.0), TossSummary(n, h))
            return abs(rel_gain_asymptotic(TossSummary(n, h)) - exact) / exact

        # leading correction is O(1/h): ~1.3e-3 at h = 1e3, below 1e-4 at h = 1e5
        assert rel_err(10**4, 10**3) == pytest.approx(1.2724e-3, rel=1e-3)
        assert rel_err(10**6, 10**5) <= 1e-4

    def test_expected(self):
        assert expected_gain_asymptotic(TossSummary(1, 0)) == 0.5
        assert expected_gain_asymptotic(TossSummary(1000, 0)) == 5e-4
        exact = expected_gain(BetaPrior(0.0), TossSummary(10**4, 5000))
        assert expected_gain_asymptotic(TossSummary(10**4, 5000)) == pytest.approx(exact, rel=0.02)
        with pytest.raises(DomainError):
            expected_gain_asymptotic(TossSummary(0, 0))


class TestGainReport:
    def test_fields(self):
        r = gain_report(BetaPrior(-0.5), TossSummary(100, 42), HEAD)
        assert set(r.as_dict()) == {"i_diff", "i_rel", "i_expected", "i_diff_asym", "i_rel_asym", "i_expected_asym"}
        assert r.i_rel >= 0
        bridge = 42 / 42.5 - 100 / 101
        assert abs(r.i_diff - r.i_rel - bridge) <= 1e-12

    def test_corner_asymptotes(self):
        r = gain_report(BetaPrior(0.0), TossSummary(0, 0), HEAD)
        assert r.i_rel_asym is None
        assert r.i_expected_asym is None
