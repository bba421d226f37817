from math import comb

import numpy as np
import pytest

from sconverse import CodeSpec, bsc
from sconverse.validate import (
    _word_of_rank,
    code_suite,
    ht_achievability_suite,
    ht_converse_suite,
    random_codes,
    random_ht_instances,
    run_suite,
)


def test_word_ranks_enumerate_type_class():
    words = [tuple(_word_of_rank(5, 2, r)) for r in range(comb(5, 2))]
    assert len(set(words)) == 10
    assert words == sorted(words)
    assert all(sum(w) == 2 for w in words)


def test_random_codes_are_constant_composition():
    rng = np.random.default_rng(3)
    for _, code in random_codes(rng, [bsc(0.1)], count=40):
        assert 2 <= code.M <= 8 and code.n <= 6 and code.L in (1, 2)
        assert len(set(code.codewords)) == code.M


def test_random_instances_shape():
    inst = random_ht_instances(np.random.default_rng(0), count=10)
    assert [i.n for i in inst[6:]] == [100, 1000, 100, 1000]
    assert all(i.n <= 12 for i in inst[:6])


def test_converse_suite_small():
    rep = ht_converse_suite(seed=1, n_instances=10, betas=np.logspace(-2, 2, 3))
    assert rep["passed"] and rep["violations"] == 0
    assert rep["min_margin"] >= -1e-12
    assert rep["checked"] > 0


def test_converse_suite_deterministic():
    a = ht_converse_suite(seed=2, n_instances=6, rhos=(2.0,), betas=[1.0])
    b = ht_converse_suite(seed=2, n_instances=6, rhos=(2.0,), betas=[1.0])
    assert a == b


def test_achievability_suite_windows():
    rep = ht_achievability_suite(seed=0, n_random=0)
    assert rep["passed"]
    assert {(s["n"], s["rho"]) for s in rep["skipped_detail"]} == {(100, 1.5), (100, 2.0)}
    assert len(rep["rows"]) == 10
    for r in rep["rows"]:
        assert r["satisfies_q"] and r["satisfies_w"] and r["satisfies_w_relative"]


def test_code_suite_small_with_golden():
    rep = code_suite(seed=0, n_codes=20, n_random_channels=2)
    assert rep["passed"]
    golden = rep["rows"][0]
    assert golden["error"] == pytest.approx(0.1, abs=1e-15)
    assert golden["margin"] >= 0


def test_code_suite_extra_code():
    extra = [(0, CodeSpec(["0011", "0101", "1010"], 2, ("0", "1")))]
    rep = code_suite(seed=0, n_codes=0, n_random_channels=0, extra_codes=extra)
    assert rep["checked"] == 2 and rep["passed"]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
