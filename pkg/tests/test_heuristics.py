import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reconlab.heuristics import (
    GRANGER_CAP,
    correlation_scores,
    granger_scores,
    heuristic_scores,
    transfer_entropy_scores,
)


def bits(rng, n, t, p=0.5):
    return (rng.random((n, t)) < p).astype(np.uint8)


class TestCorrelation:
    def test_copy(self):
        rng = np.random.default_rng(0)
        x = bits(rng, 2, 100)
        x[1] = x[0]
        assert correlation_scores(x).directed[0, 1] == pytest.approx(1.0)

    def test_independent(self):
        s = correlation_scores(bits(np.random.default_rng(1), 5, 10_000)).scores
        assert np.all(np.abs(s) < 0.05)

    def test_hand_example(self):
        x = np.array([[1, 0, 1, 1], [1, 1, 0, 1]])
        # means 3/4 each; centered products 1/16, -3/16, -3/16, 1/16 sum -1/4
        # variances (3 * 1/16 + 9/16) = 3/4 each
        assert correlation_scores(x).directed[0, 1] == pytest.approx(-1 / 3)

    def test_constant_row(self):
        x = np.vstack([np.zeros(20), np.random.default_rng(2).integers(0, 2, 20)])
        res = correlation_scores(x)
        assert np.all(res.directed == 0) and res.flags == ["zero_variance:0"]

    def test_short_series(self):
        with pytest.raises(ValueError):
            correlation_scores(np.zeros((2, 1)))


class TestGranger:
    def test_perfect_driver(self):
        rng = np.random.default_rng(3)
        x = bits(rng, 2, 500)
        x[0, 1:] = x[1, :-1]
        res = granger_scores(x)
        assert res.directed[0, 1] == GRANGER_CAP
        assert res.literal[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_independent(self):
        s = granger_scores(bits(np.random.default_rng(4), 4, 20_000)).directed
        off = s[~np.eye(4, dtype=bool)]
        assert np.allclose(off, 1.0, atol=0.01) and np.all(off >= 1.0 - 1e-12)

    def test_ols_oracle(self):
        rng = np.random.default_rng(5)
        x = bits(rng, 3, 200).astype(float)
        s = granger_scores(x).directed
        y = x[0, 1:]

        def resid_var(cols):
            z = np.column_stack([np.ones(len(y))] + cols)
            beta = np.linalg.solve(z.T @ z, z.T @ y)
            r = y - z @ beta
            return r @ r / len(y)

        expected = resid_var([x[0, :-1]]) / resid_var([x[0, :-1], x[2, :-1]])
        assert s[0, 2] == pytest.approx(expected, rel=1e-10)

    def test_constant_target(self):
        x = np.vstack([np.ones(30), bits(np.random.default_rng(6), 1, 30)[0]])
        res = granger_scores(x)
        assert res.directed[0, 1] == 1.0 and "constant_series:0" in res.flags

    def test_short_series(self):
        with pytest.raises(ValueError):
            granger_scores(np.zeros((2, 2)))


class TestTransferEntropy:
    def test_constant_source(self):
        x = bits(np.random.default_rng(7), 2, 200)
        x[1] = 1
        assert transfer_entropy_scores(x).directed[0, 1] == 0.0

    def test_copy_channel_one_bit(self):
        rng = np.random.default_rng(8)
        x = bits(rng, 2, 100_000)
        x[0, 1:] = x[1, :-1]
        assert transfer_entropy_scores(x).directed[0, 1] == pytest.approx(1.0, abs=1e-3)

    @given(st.integers(0, 2**32 - 1), st.integers(3, 40))
    def test_bounds(self, seed, t):
        s = transfer_entropy_scores(bits(np.random.default_rng(seed), 3, t, 0.3)).directed
        assert np.all(s >= 0) and np.all(s <= 1 + 1e-12)


@pytest.mark.parametrize("method", ["corr", "granger", "te"])
def test_deterministic_and_symmetric(method):
    x = bits(np.random.default_rng(9), 4, 60)
    a, b = heuristic_scores(x, method), heuristic_scores(x.copy(), method)
    assert np.array_equal(a.directed, b.directed)
    assert np.array_equal(a.scores, a.scores.T) and np.all(np.isfinite(a.scores))


def test_unknown_method():
    with pytest.raises(ValueError):
        heuristic_scores(np.zeros((2, 5)), "mi")
