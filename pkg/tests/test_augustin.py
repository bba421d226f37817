import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sconverse import (
    Channel,
    ConvergenceError,
    Distribution,
    DomainError,
    augustin_fixed_point_map,
    augustin_info_derivative,
    bsc,
    i1_of_tilted,
    kl_decomposition,
    solve_augustin,
)
from tests.conftest import channels, random_channel, random_input
from tests import oracles

ORDERS = [0.5, 1.0, 1.5, 2.0, 4.0, 8.0]


def identical_rows():
    return Channel([[0.2, 0.3, 0.5]] * 3)


class TestGolden:
    def test_closed_forms_pinned(self):
        # the closed forms themselves, frozen
        assert oracles.bsc_info(0.1, 1) == pytest.approx(0.36806420716849714, abs=1e-15)
        assert oracles.bsc_info(0.1, 2) == pytest.approx(0.49469624183610705, abs=1e-15)

    @pytest.mark.parametrize("alpha", ORDERS + [1.01, 32.0])
    def test_bsc_uniform(self, alpha, bsc01, uniform2):
        sol = solve_augustin(alpha, bsc01, uniform2)
        assert np.allclose(sol.q, [0.5, 0.5], atol=1e-13)
        assert sol.info == pytest.approx(oracles.bsc_info(0.1, alpha), abs=1e-13)

    @pytest.mark.parametrize("alpha", ORDERS)
    def test_identical_rows(self, alpha):
        ch = identical_rows()
        sol = solve_augustin(alpha, ch, Distribution([0.2, 0.3, 0.5]))
        assert sol.info == pytest.approx(0, abs=1e-13)
        assert np.allclose(sol.q, ch.matrix[0], atol=1e-13)

    def test_derivative_golden(self, bsc01, uniform2):
        want = oracles.bsc_exponent_at(0.1, 2)
        assert want == pytest.approx(0.066295001391, abs=1e-11)
        assert augustin_info_derivative(2, bsc01, uniform2) == pytest.approx(want, abs=1e-13)

    def test_i1_of_tilted_golden(self, bsc01, uniform2):
        want = math.log(2) - oracles.h(0.01 / 0.82)
        assert want == pytest.approx(0.627286244618, abs=1e-11)
        assert i1_of_tilted(2, bsc01, uniform2) == pytest.approx(want, abs=1e-13)

    def test_i1_of_tilted_near_one(self, bsc01, uniform2):
        assert i1_of_tilted(1 + 1e-4, bsc01, uniform2) == pytest.approx(oracles.bsc_info(0.1, 1), abs=1e-3)

    def test_identical_rows_derivative_and_rate(self):
        ch, p = identical_rows(), Distribution([0.5, 0.25, 0.25])
        for a in (0.5, 1, 3):
            assert augustin_info_derivative(a, ch, p) == pytest.approx(0, abs=1e-13)
        assert i1_of_tilted(3, ch, p) == pytest.approx(0, abs=1e-13)


class TestFixedPointMap:
    def test_order_one_gives_marginal(self, bsc01):
        p = Distribution([0.3, 0.7])
        out = augustin_fixed_point_map(1, bsc01, p, Distribution([0.5, 0.5]))
        assert np.allclose(out.probs, p.probs @ bsc01.matrix, atol=1e-15)

    def test_symmetric_bsc(self, bsc01, uniform2):
        out = augustin_fixed_point_map(2, bsc01, uniform2, uniform2)
        assert np.allclose(out.probs, [0.5, 0.5], atol=1e-15)

    def test_single_input_iterates_to_row(self):
        ch = Channel([[0.1, 0.6, 0.3]])
        q = Distribution([1 / 3] * 3)
        for _ in range(200):
            q = augustin_fixed_point_map(0.5, ch, Distribution([1.0]), q)
        assert np.allclose(q.probs, ch.matrix[0], atol=1e-12)


class TestAgainstOptimizer:
    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("alpha", [0.5, 2.0, 4.0])
    def test_info_matches_generic_minimizer(self, seed, alpha):
        rng = np.random.default_rng(seed)
        ch, p = random_channel(rng, 3, 3), random_input(rng, 3)
        sol = solve_augustin(alpha, ch, p)
        ref, _ = oracles.augustin_by_minimize(alpha, ch.matrix, p.probs)
        # the solver is the better minimizer; it can only be below the reference
        assert sol.info <= ref + 1e-10
        assert sol.info == pytest.approx(ref, abs=1e-7)


class TestProperties:
    @given(channels(), st.sampled_from(ORDERS))
    def test_certificate_and_identities(self, cp, alpha):
        ch, p = cp
        sol = solve_augustin(alpha, ch, p)
        assert sol.fixed_point_residual <= 1e-12
        assert sol.certificate_margin >= -1e-8 and sol.upper_certificate_margin >= -1e-8
        c1, i1v = kl_decomposition(sol, ch, p)
        if alpha != 1:
            assert sol.info == pytest.approx(alpha / (1 - alpha) * c1 + i1v, abs=1e-8)
        assert i1_of_tilted(alpha, ch, p, solution=sol) == pytest.approx(i1v, abs=1e-8)

    @given(channels(max_in=3, max_out=3))
    def test_monotone_in_order(self, cp):
        ch, p = cp
        grid = [1.0, 1.25, 1.5, 2, 3, 5, 8, 16]
        infos = [solve_augustin(a, ch, p, n_probes=0).info for a in [0.25, 0.5] + grid]
        assert all(b >= a - 1e-10 for a, b in zip(infos, infos[1:]))
        rates = [i1_of_tilted(r, ch, p) for r in grid[1:]]
        assert all(b >= a - 1e-10 for a, b in zip(rates, rates[1:]))

    def test_sparse_channels(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            ch = random_channel(rng, 4, 4, sparse=0.4)
            v = np.where(rng.random(4) < 0.3, 0, rng.random(4) + 0.1)
            v[rng.integers(4)] += 0.5
            p = Distribution(v / v.sum())
            for a in ORDERS:
                sol = solve_augustin(a, ch, p)
                used = (p.probs[:, None] * ch.matrix).sum(axis=0) > 0
                assert np.all(sol.q[~used] == 0)


class TestErrors:
    def test_bad_order(self, bsc01, uniform2):
        with pytest.raises(DomainError):
            solve_augustin(-1, bsc01, uniform2)

    def test_iteration_budget(self):
        rng = np.random.default_rng(0)
        ch, p = random_channel(rng, 4, 4), random_input(rng, 4)
        with pytest.raises(ConvergenceError) as exc:
            solve_augustin(0.5, ch, p, max_iter=1)
        assert exc.value.residual > 0


def test_bsc_other_input():
    # asymmetric input: order-one information equals mutual information
    ch, p = bsc(0.2), Distribution([0.3, 0.7])
    out = p.probs @ ch.matrix
    mi = sum(px * oracles.kl(row, out) for px, row in zip(p.probs, ch.matrix))
    assert solve_augustin(1, ch, p).info == pytest.approx(mi, abs=1e-14)
