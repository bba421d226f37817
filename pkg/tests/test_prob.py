import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sconverse import (
    Channel,
    Composition,
    Distribution,
    DomainError,
    StructureError,
    UndefinedTiltError,
    absolutely_continuous_part,
    bsc,
    conditional_renyi_divergence,
    kl_divergence,
    noiseless,
    product_log_likelihood_ratio,
    renyi_divergence,
    tilted_channel,
    tilted_measure,
    total_variation,
)
from tests.conftest import prob_vectors
from tests.oracles import kl


def D(p):
    return Distribution(p)


class TestDistribution:
    def test_renormalizes_within_ingest_tolerance(self):
        d = D([0.5, 0.5 + 5e-10])
        assert abs(d.probs.sum() - 1) < 1e-15

    def test_rejects_bad_sums_and_negatives(self):
        with pytest.raises(StructureError):
            D([0.5, 0.6])
        with pytest.raises(StructureError):
            D([1.2, -0.2])

    def test_read_only(self):
        d = D([0.25, 0.75])
        with pytest.raises(ValueError):
            d.probs[0] = 1.0

    def test_channel_rows_checked(self):
        with pytest.raises(StructureError, match="row 1"):
            Channel([[0.5, 0.5], [0.2, 0.2]])

    def test_composition_counts(self):
        c = Composition.from_distribution(D([0.25, 0.75]), 8)
        assert c.counts == (2, 6) and c.n == 8
        assert np.array_equal(c.base.probs, [0.25, 0.75])

    def test_composition_non_integral_names_symbol(self):
        p = Distribution([0.5, 0.5], ["a", "b"])
        with pytest.raises(StructureError, match=r"P\(a\)"):
            Composition.from_distribution(p, 3)


class TestRenyi:
    def test_identical_is_zero(self):
        assert renyi_divergence(2, D([0.5, 0.5]), D([0.5, 0.5])) == 0

    def test_point_mass_vs_uniform(self):
        assert renyi_divergence(2, D([1, 0]), D([0.5, 0.5])) == pytest.approx(math.log(2), abs=1e-15)

    def test_infinite_off_support(self):
        assert renyi_divergence(2, D([0.5, 0.5]), D([1, 0])) == math.inf
        assert kl_divergence(D([0.5, 0.5]), D([1, 0])) == math.inf

    def test_below_one_finite_off_support(self):
        # only the common support contributes: (1/(a-1)) ln(0.5^a)
        got = renyi_divergence(0.5, D([0.5, 0.5]), D([1, 0]))
        assert got == pytest.approx(math.log(2), abs=1e-14)

    def test_kl_golden(self):
        want = 0.75 * math.log(1.5) + 0.25 * math.log(0.5)
        assert want == pytest.approx(0.130812035941, abs=1e-12)
        assert kl_divergence(D([0.75, 0.25]), D([0.5, 0.5])) == pytest.approx(want, abs=1e-15)

    def test_domain_and_structure_errors(self):
        with pytest.raises(DomainError):
            renyi_divergence(0, D([0.5, 0.5]), D([0.5, 0.5]))
        with pytest.raises(StructureError):
            renyi_divergence(2, D([0.5, 0.5]), Distribution([0.5, 0.5], ["x", "y"]))

    @given(prob_vectors(size=3), prob_vectors(size=3, zeros=False), st.sampled_from([0.5, 1.0, 2.0, 4.0]))
    def test_nonnegative_zero_iff_equal(self, w, q, a):
        d = renyi_divergence(a, D(w), D(q))
        assert d >= -1e-12
        assert renyi_divergence(a, D(q), D(q)) == pytest.approx(0, abs=1e-12)

    @given(prob_vectors(size=4), prob_vectors(size=4, zeros=False),
           st.lists(st.floats(0.05, 20), min_size=2, max_size=2))
    def test_nondecreasing_in_order(self, w, q, orders):
        a, b = sorted(orders)
        assert renyi_divergence(a, D(w), D(q)) <= renyi_divergence(b, D(w), D(q)) + 1e-10


class TestConditional:
    def test_bsc_uniform_order_two(self, bsc01, uniform2):
        want = math.log(2) + math.log(0.1 ** 2 + 0.9 ** 2)
        got = conditional_renyi_divergence(2, bsc01, uniform2, uniform2)
        assert want == pytest.approx(0.494696241836, abs=1e-11)
        assert got == pytest.approx(want, abs=1e-14)

    def test_point_mass_input(self, bsc01):
        q = D([0.3, 0.7])
        got = conditional_renyi_divergence(1.5, bsc01, q, D([0, 1]))
        assert got == pytest.approx(renyi_divergence(1.5, bsc01.row(1), q), abs=1e-15)

    def test_single_input_against_its_row(self):
        ch = Channel([[0.2, 0.3, 0.5]])
        assert conditional_renyi_divergence(3, ch, ch.row(0), D([1])) == pytest.approx(0, abs=1e-15)


class TestTilt:
    def test_order_one_is_identity_when_ac(self):
        t, m = tilted_measure(1, D([0.2, 0.8]), D([0.5, 0.5]))
        assert m == 1.0 and np.allclose(t.probs, [0.2, 0.8], atol=1e-15)

    def test_order_two_golden(self):
        t, m = tilted_measure(2, D([0.5, 0.5]), D([0.25, 0.75]))
        assert m == 1.0 and np.allclose(t.probs, [0.75, 0.25], atol=1e-15)

    def test_singular_part_dropped(self):
        t, m = tilted_measure(2, D([0.5, 0.5]), D([1, 0]))
        assert m == 0.5 and np.array_equal(t.probs, [1, 0])
        ac = absolutely_continuous_part(D([0.5, 0.5]), D([1, 0]))
        assert ac.total == 0.5

    def test_undefined_tilt(self):
        with pytest.raises(UndefinedTiltError):
            tilted_measure(2, D([1, 0]), D([0, 1]))

    def test_tilted_channel_bsc(self, bsc01, uniform2):
        V = tilted_channel(2, bsc01, uniform2).matrix
        assert np.allclose(V[0], [0.81 / 0.82, 0.01 / 0.82], atol=1e-15)
        assert np.allclose(V[1], V[0][::-1], atol=1e-15)

    def test_tilted_channel_noiseless_fixed(self, uniform2):
        for a in (0.5, 2, 7):
            assert np.array_equal(tilted_channel(a, noiseless(2), uniform2).matrix, np.eye(2))

    def test_tilted_channel_names_input(self):
        ch = Channel([[1, 0], [0, 1]], ["x0", "x1"])
        with pytest.raises(UndefinedTiltError, match="x1"):
            tilted_channel(2, ch, D([1, 0]))

    @given(prob_vectors(size=4), prob_vectors(size=4), st.floats(0.1, 8))
    def test_tilt_of_normalized_ac_part(self, w, q, a):
        if not np.any((w > 0) & (q > 0)):
            return
        t, m = tilted_measure(a, D(w), D(q))
        w1 = np.where(q > 0, w, 0) / m
        t2, m2 = tilted_measure(a, D(w1), D(q))
        assert m2 == pytest.approx(1.0)
        assert np.allclose(t.probs, t2.probs, atol=1e-12)

    def test_tv_to_ac_part_shrinks_as_order_falls_to_one(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            w = rng.dirichlet(np.ones(4))
            q = rng.dirichlet(np.ones(4))
            q[0] = 0
            q /= q.sum()
            w1 = np.where(q > 0, w, 0) / w[q > 0].sum()
            tv = [total_variation(tilted_measure(1 + e, D(w), D(q))[0], w1)
                  for e in (1.0, 0.3, 0.1, 0.03, 0.01)]
            assert all(b <= a + 1e-15 for a, b in zip(tv, tv[1:]))


def test_product_llr_matches_direct():
    rng = np.random.default_rng(0)
    for n in (1, 5, 20):
        ws = [rng.dirichlet(np.ones(3)) for _ in range(n)]
        qs = [rng.dirichlet(np.ones(3)) for _ in range(n)]
        ys = rng.integers(3, size=n)
        direct = math.log(math.prod(w[y] for w, y in zip(ws, ys)) / math.prod(q[y] for q, y in zip(qs, ys)))
        assert product_log_likelihood_ratio(ws, qs, ys) == pytest.approx(direct, abs=1e-9)


def test_oracle_kl_agrees():
    assert kl([0.75, 0.25], [0.5, 0.5]) == pytest.approx(kl_divergence(D([0.75, 0.25]), D([0.5, 0.5])))


def test_bsc_constructor():
    assert np.array_equal(bsc(0.25).matrix, [[0.75, 0.25], [0.25, 0.75]])
