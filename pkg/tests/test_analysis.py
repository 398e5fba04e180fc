import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trusts.analysis import (
    f_min,
    fidelity,
    fidelity_bounds,
    gamma_fidelity_gap,
    numeric_fmax,
    porter_thomas_fmax,
    porter_thomas_pmin,
)
from trusts.circuits import random_layered_circuit, run_dense
from trusts.errors import InsufficientData, InvalidArgument, LengthMismatch, UnnormalizedInput
from trusts.sparse_state import SparseState, from_dense

from conftest import random_sparse


class TestFidelity:
    def test_self(self, rng):
        v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        v /= np.linalg.norm(v)
        assert fidelity(from_dense(v, 6, 64), v) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint(self):
        psi = np.zeros(8, complex)
        psi[3] = 1
        assert fidelity(SparseState.from_terms(3, {4: 1.0}), psi) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(LengthMismatch):
            fidelity(SparseState.from_terms(3, {4: 1.0}), np.ones(4) / 2)

    def test_unnormalized(self):
        with pytest.raises(UnnormalizedInput):
            fidelity(SparseState.from_terms(2, {0: 1.0}), np.ones(4))
        with pytest.raises(UnnormalizedInput):
            fidelity(SparseState.from_terms(2, {0: 0.9}), np.array([1, 0, 0, 0.0]))


class TestFMin:
    def test_values(self):
        assert f_min(1) == 0.5
        assert f_min(24) == pytest.approx(5.96e-8, rel=1e-3)
        assert f_min(64) == 2.0**-64 > 0

    def test_random_guess_mean(self):
        # Averaging |<psi|j>|^2 over a uniformly random basis state j gives 1/2^N.
        psi = run_dense(random_layered_circuit(8, 3, seed=1))
        assert np.mean(np.abs(psi) ** 2) == pytest.approx(f_min(8), rel=1e-12)


class TestPorterThomas:
    def test_fmax_d1(self):
        assert porter_thomas_fmax(1.0) == 1.0

    def test_fmax_half(self):
        # 0.5 * (1 + ln 2) from a 30-digit mpmath evaluation.
        assert porter_thomas_fmax(0.5) == pytest.approx(0.846573590279972654708616, abs=1e-15)

    def test_fmax_sampled(self):
        # 2^20 exponential weights, keep 2^6 of them: d = 2^-14.
        rng = np.random.default_rng(8)
        n, k = 2**20, 2**6
        vals = []
        for _ in range(5):
            p = rng.exponential(size=n)
            p /= p.sum()
            vals.append(np.partition(p, n - k)[n - k:].sum())
        assert np.mean(vals) == pytest.approx(porter_thomas_fmax(2.0**-14), rel=0.05)

    @given(st.floats(1e-12, 1.0), st.floats(1e-12, 1.0))
    def test_fmax_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert porter_thomas_fmax(lo) <= porter_thomas_fmax(hi) <= 1.0

    @pytest.mark.parametrize("d", [0.0, -0.1, 1.5])
    def test_bad_fraction(self, d):
        with pytest.raises(InvalidArgument):
            porter_thomas_fmax(d)
        with pytest.raises(InvalidArgument):
            porter_thomas_pmin(d, 4)

    def test_pmin_values(self):
        assert porter_thomas_pmin(1.0, 7) == 0.0
        assert porter_thomas_pmin(math.exp(-1), 10) == pytest.approx(2.0**-10, rel=1e-15)

    @pytest.mark.slow
    def test_pmin_matches_deep_circuit_order_statistics(self):
        n = 12
        psis = [run_dense(random_layered_circuit(n, 10, seed=300 + i)) for i in range(20)]
        for e in (2, 4, 6):
            k = 2 ** (n - e)
            kth = [np.partition(np.abs(p) ** 2, 2**n - k)[2**n - k] for p in psis]
            assert np.mean(kth) == pytest.approx(porter_thomas_pmin(2.0**-e, n), rel=0.10)


class TestNumericFmax:
    def test_full(self, rng):
        p = random_sparse(rng, 5, 32)
        from trusts.sparse_state import to_dense

        assert numeric_fmax(to_dense(p), 32) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_half(self):
        v = np.full(64, 1 / 8, dtype=complex)
        assert numeric_fmax(v, 32) == pytest.approx(0.5, abs=1e-15)

    def test_unnormalized(self):
        with pytest.raises(UnnormalizedInput):
            numeric_fmax(np.ones(4), 2)

    def test_monotone_and_dominates_random_candidates(self, rng):
        psi = run_dense(random_layered_circuit(8, 2, seed=0))
        vals = [numeric_fmax(psi, k) for k in range(1, 257)]
        assert np.all(np.diff(vals) >= -1e-15)
        for _ in range(200):
            k = int(rng.integers(1, 60))
            cand = random_sparse(rng, 8, k)
            assert fidelity(cand, psi) <= numeric_fmax(psi, k) + 1e-12
        # The best k-term state reaches the bound.
        for k in (1, 7, 100):
            assert fidelity(from_dense(psi, 8, k), psi) == pytest.approx(numeric_fmax(psi, k), abs=1e-12)

    def test_bounds_struct(self):
        psi = run_dense(random_layered_circuit(6, 2, seed=0))
        b = fidelity_bounds(6, 16, psi)
        assert b.d == 0.25
        assert 0 < b.f_min <= b.f_max_porter_thomas <= 1
        assert b.f_max_numeric == numeric_fmax(psi, 16)


class TestGap:
    def test_exact_runs(self):
        g = gamma_fidelity_gap([(1.0, 1.0)] * 5)
        assert g.mean_gap == 0.0 and g.std_error == 0.0 and g.fraction_above == 1.0

    def test_summary(self):
        g = gamma_fidelity_gap([(0.5, 0.4), (0.3, 0.35), (0.6, 0.5)])
        assert g.mean_gap == pytest.approx((0.1 - 0.05 + 0.1) / 3)
        assert g.fraction_above == pytest.approx(2 / 3)
        assert g.lower_bound() < g.mean_gap < g.upper_bound()

    def test_insufficient(self):
        with pytest.raises(InsufficientData):
            gamma_fidelity_gap([(0.5, 0.5)])
