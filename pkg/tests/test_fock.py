import math

import numpy as np
import pytest

from wplab.fock import (
    CapExceededError,
    FockState,
    TruncationInsufficientError,
    TruncationPolicy,
    choose_truncation,
    coherent_amplitudes,
    laguerre,
    mean_photon_number,
    overlap,
    pacs_amplitudes,
    photon_number_variance,
    quadrature_expectation,
)


def poisson_weights(nu, n_max):
    # independent tail oracle: direct Poisson pmf sum
    ns = np.arange(n_max + 1)
    logs = -nu + ns * math.log(nu) - np.array([math.lgamma(n + 1) for n in ns])
    return np.exp(logs)


class TestLaguerre:
    def test_order_zero(self):
        assert laguerre(0, 3.7) == 1.0
        assert laguerre(0, -123.0) == 1.0

    def test_order_one(self):
        # L_1(x) = 1 - x
        assert laguerre(1, -1.0) == pytest.approx(2.0, abs=1e-15)

    def test_order_two(self):
        # L_2(x) = (x^2 - 4x + 2)/2
        assert laguerre(2, -1.0) == pytest.approx(3.5, abs=1e-14)

    def test_against_polynomial_sum(self):
        # L_m(x) = sum_k C(m,k) (-x)^k / k!
        rng = np.random.default_rng(7)
        for m in range(0, 12):
            for x in rng.uniform(-30, 10, size=4):
                direct = sum(
                    math.comb(m, k) * (-x) ** k / math.factorial(k)
                    for k in range(m + 1)
                )
                assert laguerre(m, x) == pytest.approx(direct, rel=1e-10)


class TestCoherent:
    def test_vacuum(self):
        s = coherent_amplitudes(0.0, 10)
        assert s.amplitudes[0] == 1.0
        assert np.all(s.amplitudes[1:] == 0.0)

    def test_closed_form_alpha_one(self):
        s = coherent_amplitudes(1.0, 40)
        c0 = math.exp(-0.5)
        assert s.amplitudes[0].real == pytest.approx(c0, abs=1e-12)
        assert s.amplitudes[1].real == pytest.approx(c0, abs=1e-12)
        # c_n = e^{-nu/2} alpha^n / sqrt(n!)
        for n in (2, 5, 17):
            expect = math.exp(-0.5) / math.sqrt(math.factorial(n))
            assert s.amplitudes[n].real == pytest.approx(expect, rel=1e-12)

    def test_large_nu_tail_capture(self):
        # pre-renormalization norm >= 1 - 1e-10 at nu=100, n_max=170
        w = poisson_weights(100.0, 170)
        assert w.sum() >= 1.0 - 1e-10
        s = coherent_amplitudes(10.0, 170, epsilon_trunc=1e-9)
        assert np.abs(np.abs(s.amplitudes[:171]) ** 2 - w / w.sum()).max() < 1e-12

    def test_truncation_insufficient(self):
        with pytest.raises(TruncationInsufficientError):
            coherent_amplitudes(10.0, 120)

    def test_unit_norm(self):
        for alpha in (0.3, 1.0, 2.5 + 1.0j, 8.0):
            n_max = choose_truncation(alpha, 0)
            s = coherent_amplitudes(alpha, n_max)
            assert s.norm_squared() == pytest.approx(1.0, abs=1e-12)

    def test_complex_alpha_phases(self):
        alpha = 0.8 * np.exp(1j * 0.7)
        s = coherent_amplitudes(alpha, 30)
        # c_n phase is n * arg(alpha)
        for n in (1, 2, 5):
            assert np.angle(s.amplitudes[n]) == pytest.approx(
                (n * 0.7 + np.pi) % (2 * np.pi) - np.pi, abs=1e-12
            )


class TestPacs:
    def test_m_zero_reduction(self):
        a = coherent_amplitudes(1.0, 30)
        b = pacs_amplitudes(1.0, 0, 30)
        assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-14

    def test_photon_added_vacuum(self):
        s = pacs_amplitudes(0.0, 5, 12)
        expect = np.zeros(13)
        expect[5] = 1.0
        assert np.abs(s.amplitudes - expect).max() < 1e-14

    def test_prenorm_squared_is_laguerre(self):
        # <alpha| a a+ |alpha> = nu + 1 = 1! * L_1(-nu): brute-force sum
        nu = 1.0
        n_max = 50
        # unnormalized (a+)|alpha> amplitudes: e^{-nu/2} alpha^{k-1} sqrt(k!)/(k-1)!
        ks = np.arange(1, n_max + 1)
        logs = (
            -0.5 * nu
            + (ks - 1) * 0.0
            + 0.5 * np.array([math.lgamma(k + 1) for k in ks])
            - np.array([math.lgamma(k) for k in ks])
        )
        brute = float(np.sum(np.exp(logs) ** 2))
        assert brute == pytest.approx(2.0, rel=1e-12)
        assert math.factorial(1) * laguerre(1, -1.0) == pytest.approx(brute, rel=1e-12)

    def test_low_indices_vanish(self):
        s = pacs_amplitudes(1.5, 3, 40)
        assert np.all(s.amplitudes[:3] == 0.0)
        assert s.norm_squared() == pytest.approx(1.0, abs=1e-12)


class TestObservables:
    def test_mean_photon_coherent(self):
        s = coherent_amplitudes(1.0, 40)
        assert mean_photon_number(s) == pytest.approx(1.0, abs=1e-10)

    def test_mean_photon_pacs_closed_form(self):
        # (m+1) L_{m+1}(-nu)/L_m(-nu) - 1 with m=1, nu=1 -> 2*3.5/2 - 1 = 2.5
        s = pacs_amplitudes(1.0, 1, 50)
        assert mean_photon_number(s) == pytest.approx(2.5, abs=1e-8)

    @pytest.mark.parametrize("nu", [1.0, 5.0, 100.0])
    @pytest.mark.parametrize("m", [0, 1, 5, 10])
    def test_mean_photon_matches_formula(self, nu, m):
        alpha = math.sqrt(nu)
        n_max = choose_truncation(alpha, m)
        s = pacs_amplitudes(alpha, m, n_max)
        closed = (m + 1) * laguerre(m + 1, -nu) / laguerre(m, -nu) - 1.0
        assert mean_photon_number(s) == pytest.approx(closed, rel=1e-6)

    def test_mean_photon_fock(self):
        s = pacs_amplitudes(0.0, 5, 12)
        assert mean_photon_number(s) == pytest.approx(5.0, abs=1e-14)

    @pytest.mark.parametrize("nu", [1.0, 5.0, 100.0])
    @pytest.mark.parametrize("m", [1, 5])
    def test_sub_poissonian(self, nu, m):
        s = pacs_amplitudes(math.sqrt(nu), m, choose_truncation(math.sqrt(nu), m))
        assert photon_number_variance(s) < mean_photon_number(s)

    def test_quadrature_vacuum(self):
        assert quadrature_expectation(coherent_amplitudes(0.0, 10)) == 0.0

    def test_quadrature_coherent(self):
        s = coherent_amplitudes(1.0, 40)
        assert quadrature_expectation(s) == pytest.approx(math.sqrt(2.0), abs=1e-8)

    def test_quadrature_fock(self):
        s = pacs_amplitudes(0.0, 5, 12)
        assert quadrature_expectation(s) == 0.0


class TestOverlap:
    def test_self_overlap(self):
        for alpha, m in ((1.0, 0), (2.0, 3)):
            s = pacs_amplitudes(alpha, m, 60)
            assert abs(overlap(s, s) - 1.0) < 1e-12

    def test_two_coherent_states(self):
        a = coherent_amplitudes(1.0, 40)
        b = coherent_amplitudes(-1.0, 40)
        # |<alpha|beta>| = exp(-|alpha-beta|^2/2)
        assert abs(overlap(a, b)) == pytest.approx(math.exp(-2.0), rel=1e-10)

    def test_orthogonal(self):
        v = coherent_amplitudes(0.0, 12)
        f5 = pacs_amplitudes(0.0, 5, 12)
        assert overlap(v, f5) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            overlap(coherent_amplitudes(1.0, 30), coherent_amplitudes(1.0, 31))


class TestChooseTruncation:
    def test_vacuum_small(self):
        n = choose_truncation(0.0, 0)
        assert n >= 1

    def test_nu_one_tail_verified(self):
        n = choose_truncation(1.0, 0, TruncationPolicy(epsilon_trunc=1e-12))
        w = poisson_weights(1.0, n + 400)
        assert 1.0 - w[: n + 1].sum() < 1e-12

    def test_nu_100_m_5(self):
        n = choose_truncation(10.0, 5, TruncationPolicy(epsilon_trunc=1e-12))
        assert n <= 250
        # brute-force tail of the analytically normalized PACS amplitudes
        s = pacs_amplitudes(10.0, 5, n + 300)
        mass_beyond = float(np.sum(np.abs(s.amplitudes[n + 1 :]) ** 2))
        assert mass_beyond < 2e-12

    def test_tail_invariant_of_constructed_state(self):
        for alpha, m in ((1.0, 0), (math.sqrt(5.0), 5), (10.0, 0)):
            n = choose_truncation(alpha, m)
            s = pacs_amplitudes(alpha, m, n)
            p = np.abs(s.amplitudes) ** 2
            assert p[-1] + p[-2] < 1e-12

    def test_cap_exceeded(self):
        with pytest.raises(CapExceededError):
            choose_truncation(10.0, 0, TruncationPolicy(n_max_cap=50))


class TestFockState:
    def test_amplitudes_read_only(self):
        s = coherent_amplitudes(1.0, 20)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0.0

    def test_norm_within_1e12(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            nu = rng.uniform(0.1, 30.0)
            m = int(rng.integers(0, 6))
            n = choose_truncation(math.sqrt(nu), m)
            s = pacs_amplitudes(math.sqrt(nu), m, n)
            assert abs(s.norm_squared() - 1.0) < 1e-12
