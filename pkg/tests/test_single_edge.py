import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reconlab._math import binary_entropy
from reconlab.single_edge import (
    SingleEdgeModel,
    curves,
    edge_posterior,
    edge_posterior_entropy,
    edge_posterior_entropy_bruteforce,
    edge_reconstructability,
    evidence_pmf,
)

unit = st.floats(0.01, 0.99)


def test_uninformative_channel():
    m = SingleEdgeModel(0.3, 0.4, 0.4, 15)
    assert np.allclose(edge_posterior(m, np.arange(16)), 0.3)
    assert edge_posterior_entropy(m) == pytest.approx(float(binary_entropy(0.3)), abs=1e-12)
    assert edge_reconstructability(m) == pytest.approx(0.0, abs=1e-12)


def test_direct_value():
    m = SingleEdgeModel(0.5, 0.4, 0.2, 20)
    assert edge_posterior(m, 20) == pytest.approx(1 / (1 + 0.5**20), rel=1e-12)
    assert 1 - edge_posterior(m, 20) == pytest.approx(9.5367e-7, rel=1e-4)


def test_curve_shapes():
    n = np.arange(21)
    up = edge_posterior(SingleEdgeModel(0.5, 0.4, 0.2, 20), n)
    flat = edge_posterior(SingleEdgeModel(0.5, 0.2, 0.2, 20), n)
    down = edge_posterior(SingleEdgeModel(0.5, 0.1, 0.2, 20), n)
    assert np.all(np.diff(up) > 0) and np.allclose(flat, 0.5) and np.all(np.diff(down) < 0)


def test_noiseless_limit():
    assert edge_posterior_entropy(SingleEdgeModel(0.5, 0.999, 0.001, 200)) < 1e-10
    assert edge_reconstructability(SingleEdgeModel(0.5, 0.999, 0.2, 100)) > 0.99


def test_large_T_is_stable():
    m = SingleEdgeModel(0.5, 0.21, 0.2, 10_000)
    psi = edge_reconstructability(m)
    assert math.isfinite(psi) and 0 < psi < 1
    assert evidence_pmf(m).sum() == pytest.approx(1.0)


def test_invalid():
    for args in [(0.0, 0.5, 0.5, 3), (0.5, 1.0, 0.5, 3), (0.5, 0.5, 0.5, 0)]:
        with pytest.raises(ValueError):
            SingleEdgeModel(*args)
    with pytest.raises(ValueError):
        edge_posterior(SingleEdgeModel(0.5, 0.4, 0.2, 5), 6)


@given(unit, unit, unit, st.integers(1, 60))
def test_entropy_matches_bruteforce(p, q, r, T):
    m = SingleEdgeModel(p, q, r, T)
    assert edge_posterior_entropy(m) == pytest.approx(edge_posterior_entropy_bruteforce(m), abs=1e-12)


@given(unit, unit, unit, st.integers(1, 200))
def test_bounds_and_symmetry(p, q, r, T):
    psi = edge_reconstructability(SingleEdgeModel(p, q, r, T))
    assert -1e-12 <= psi <= 1 + 1e-12
    # swapping q and r relabels a -> 1 - a, which also sends p -> 1 - p
    assert psi == pytest.approx(edge_reconstructability(SingleEdgeModel(1 - p, r, q, T)), abs=1e-10)
    half = edge_reconstructability(SingleEdgeModel(0.5, q, r, T))
    assert half == pytest.approx(edge_reconstructability(SingleEdgeModel(0.5, r, q, T)), abs=1e-10)


@given(unit, unit, unit)
def test_nondecreasing_in_T(p, q, r):
    psi = [edge_reconstructability(SingleEdgeModel(p, q, r, T)) for T in (1, 2, 5, 10, 30, 100)]
    assert np.all(np.diff(psi) >= -1e-12)


def test_curves():
    header, rows = curves(0.5, 0.4, 0.2, 5, sweep=None)
    assert header == ["n,posterior"] and len(rows) == 6
    header, rows = curves(0.5, 0.4, 0.2, 20, sweep="q", grid=[0.2, 0.4])
    assert header == ["q,psi"] and rows[0][1] == pytest.approx(0.0, abs=1e-12)
    header, rows = curves(0.5, 0.4, 0.2, 20, sweep="T", grid=[1, 10])
    assert header == ["T,psi"] and rows[1][1] > rows[0][1]
    with pytest.raises(ValueError):
        curves(0.5, 0.4, 0.2, 20, sweep="p")
