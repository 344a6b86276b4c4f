import math
import warnings

import numpy as np
import pytest
import scipy.optimize
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from susyvcs.measures import moment
from susyvcs.nnls import ConditioningWarning, MomentFitter, fit_measure, midpoint_grid, nnls
from susyvcs.spectra import EnergySequence, factorial


@settings(max_examples=60)
@given(st.integers(2, 8), st.integers(1, 8), st.integers(0, 10 ** 6))
def test_nnls_matches_reference_solver(m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m)
    x, r = nnls(A, b)
    x_ref, _ = scipy.optimize.nnls(A, b)
    # the reference solver's reported rnorm can be wrong for wide systems; recompute it
    r_ref = np.linalg.norm(A @ x_ref - b)
    assert np.all(x >= 0)
    assert r == pytest.approx(np.linalg.norm(A @ x - b), abs=1e-12)
    assert r <= r_ref + 1e-9 * (1 + r_ref)
    if m >= n:
        assert r == pytest.approx(r_ref, rel=1e-8, abs=1e-10)


def test_nnls_kkt_conditions():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(10, 6))
    b = rng.normal(size=10)
    x, _ = nnls(A, b)
    g = A.T @ (A @ x - b)
    assert np.all(g[x > 0] == pytest.approx(0, abs=1e-10))
    assert np.all(g[x == 0] >= -1e-10)


def test_nnls_shape_check():
    with pytest.raises(ValueError):
        nnls(np.eye(3), np.ones(2))


def test_midpoint_grid():
    r, dr = midpoint_grid(4.0, 8)
    assert r[0] == 0.25 and r[-1] == 3.75 and np.all(dr == 0.5)
    with pytest.raises(ValueError):
        midpoint_grid(1.0, 7)
    with pytest.raises(ValueError):
        midpoint_grid(0.0, 16)


def test_oscillator_fit():
    seq = EnergySequence.oscillator()
    res = fit_measure([float(factorial(seq, n)) for n in range(11)], (6.0, 64))
    assert res.residual < 1e-6
    assert np.all(res.weights >= 0)
    assert res.atom_weight == 0.0


def test_landau_fit_recovers_atom():
    seq = EnergySequence.landau_bosonic(1)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConditioningWarning)
        res = fit_measure([float(factorial(seq, n)) for n in range(13)],
                          (1 / math.sqrt(2), 64), allow_boundary_atom=True)
    assert res.atom_weight == pytest.approx(1 / (4 * math.pi), rel=0.05)


def test_fit_measure_moments_consistent():
    seq = EnergySequence.oscillator()
    t = [float(factorial(seq, n)) for n in range(6)]
    res = fit_measure(t, (6.0, 32))
    for n, tn in enumerate(t):
        assert moment(res.measure, n) == pytest.approx(tn, rel=10 * res.residual + 1e-9)


def test_ill_conditioned_fit_warns():
    seq = EnergySequence.landau_bosonic(1)
    with pytest.warns(ConditioningWarning):
        fit_measure([float(factorial(seq, n)) for n in range(21)], (1 / math.sqrt(2), 64),
                    allow_boundary_atom=True)


@pytest.mark.parametrize("bad", [[1.0], []])
def test_fit_needs_two_targets(bad):
    with pytest.raises(ValueError):
        fit_measure(bad, (1.0, 16))


def test_nested_grids_do_not_increase_residual():
    seq = EnergySequence.oscillator()
    t = [float(factorial(seq, n)) for n in range(9)]
    res = [fit_measure(t, (6.0, K)).residual for K in (8, 24, 72)]
    assert res[1] <= res[0] * (1 + 1e-9) + 1e-14
    assert res[2] <= res[1] * (1 + 1e-9) + 1e-14


def test_moment_fitter_estimator_protocol():
    est = MomentFitter(R=6.0, K=48)
    assert est.get_params() == {"R": 6.0, "K": 48, "allow_boundary_atom": False}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and not hasattr(twin, "measure_")
    seq = EnergySequence.oscillator()
    orders = np.arange(8)
    targets = np.array([float(factorial(seq, n)) for n in orders])
    est.fit(orders, targets)
    assert est.residual_ < 1e-6
    assert np.allclose(est.predict(orders), targets, rtol=1e-5)
    est.set_params(K=16)
    assert est.K == 16
