import numpy as np
import pytest

from polarsec import (
    ContractViolation,
    PolarizedLink,
    RngStream,
    ScenarioConfig,
    effective_channel,
    gen_channel_set,
    gen_polarized_link,
    linear_polarization,
    perturb_eve_links,
    phase_shift_vector,
    polarforming_vector,
    terminal_polarization,
    trial_stream,
)
from polarsec.channel import ELEMENT_VARIANCE


class TestPolarformingVector:
    def test_zero_phase(self):
        f = polarforming_vector(0.0)
        assert np.allclose(f.value, np.array([1.0, 1.0]) / np.sqrt(2.0))

    def test_circular(self):
        # the fixed-polarization benchmark: quarter-wave shift
        f = polarforming_vector(np.pi / 2.0)
        assert np.allclose(f.value, np.array([1.0, 1j]) / np.sqrt(2.0))

    def test_opposite(self):
        f = polarforming_vector(np.pi)
        assert np.allclose(f.value, np.array([1.0, -1.0]) / np.sqrt(2.0))

    @pytest.mark.parametrize("theta", [-7.3, 0.0, 1.2, 9.9, 4 * np.pi])
    def test_unit_norm_and_wrap(self, theta):
        f = polarforming_vector(theta)
        assert abs(np.linalg.norm(f.value) - 1.0) <= 1e-15
        assert 0.0 <= f.theta < 2.0 * np.pi
        assert f.value[0].real > 0 and f.value[0].imag == 0

    def test_non_finite_rejected(self):
        with pytest.raises(ContractViolation):
            polarforming_vector(np.nan)


class TestPolarizedLink:
    def test_chi_zero_diagonal(self):
        link = gen_polarized_link(0.0, RngStream(1, 0))
        assert link.lam[0, 1] == 0.0 and link.lam[1, 0] == 0.0
        assert link.lam[0, 0] != 0.0

    def test_copolar_moment(self):
        # Monte Carlo second-moment oracle: E|entry|^2 = var / (chi + 1)
        gen = RngStream(99, 0).generator()
        chi = 0.2
        draws = 100_000
        from polarsec.channel import _links_from_generator

        links = _links_from_generator(chi, draws, gen)
        co = np.array([link.lam[0, 0] for link in links])
        expected = ELEMENT_VARIANCE / (chi + 1.0)
        assert abs(np.mean(np.abs(co) ** 2) - expected) <= 0.02 * expected

    def test_cross_to_co_power_ratio_is_chi(self):
        # the depolarization parameter is exactly the cross/co power ratio,
        # so the powers coincide at chi = 1 and scale linearly elsewhere
        from polarsec.channel import _links_from_generator

        for chi in (1.0, 1e3):
            gen = RngStream(7, int(chi)).generator()
            links = _links_from_generator(chi, 100_000, gen)
            lams = np.stack([link.lam for link in links])
            co = np.mean(np.abs(lams[:, 0, 0]) ** 2)
            cross = np.mean(np.abs(lams[:, 0, 1]) ** 2)
            assert abs(cross / co - chi) <= 0.02 * chi

    def test_deterministic(self):
        a = gen_polarized_link(0.2, RngStream(5, 3))
        b = gen_polarized_link(0.2, RngStream(5, 3))
        assert np.array_equal(a.lam, b.lam)

    def test_negative_chi_rejected(self):
        with pytest.raises(ContractViolation):
            gen_polarized_link(-0.1, RngStream(0, 0))


class TestEffectiveChannel:
    def test_identity_links_copolar_receiver(self):
        links = tuple(PolarizedLink(np.eye(2, dtype=complex), 0.0) for _ in range(3))
        g = terminal_polarization([1.0, 0.0])
        psv = phase_shift_vector([0.3, 4.0, 1.1])
        h = effective_channel(links, g, psv)
        assert np.allclose(h, np.full(3, 1.0 / np.sqrt(2.0)))

    def test_identity_links_crosspolar_receiver(self):
        links = tuple(PolarizedLink(np.eye(2, dtype=complex), 0.0) for _ in range(2))
        g = terminal_polarization([0.0, 1.0])
        psv = phase_shift_vector([0.7, 2.2])
        h = effective_channel(links, g, psv)
        assert np.allclose(h, np.exp(1j * psv.thetas) / np.sqrt(2.0))

    def test_matches_block_lifted_form(self):
        # independent formula: h = (1/sqrt(2)) B^H f~ with f~ from the lifted phases
        rng = np.random.default_rng(17)
        n = 5
        links = tuple(
            PolarizedLink(
                rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)), 0.3
            )
            for _ in range(n)
        )
        g = terminal_polarization(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        thetas = rng.uniform(0, 2 * np.pi, n)
        psv = phase_shift_vector(thetas)
        blocks = np.zeros((2 * n, n), dtype=complex)
        for k, link in enumerate(links):
            blocks[2 * k : 2 * k + 2, k] = link.lam.conj().T @ g.g
        lifted_phases = np.zeros(2 * n)
        lifted_phases[1::2] = thetas
        via_lift = blocks.conj().T @ np.exp(1j * lifted_phases) / np.sqrt(2.0)
        direct = effective_channel(links, g, psv)
        assert np.max(np.abs(via_lift - direct)) <= 1e-12

    def test_periodic_in_every_phase(self):
        rng = np.random.default_rng(23)
        links = tuple(
            PolarizedLink(
                rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)), 0.2
            )
            for _ in range(4)
        )
        g = linear_polarization()
        thetas = rng.uniform(0, 2 * np.pi, 4)
        h1 = effective_channel(links, g, phase_shift_vector(thetas))
        h2 = effective_channel(links, g, phase_shift_vector(thetas + 2 * np.pi))
        assert np.max(np.abs(h1 - h2)) <= 1e-12

    def test_dimension_mismatch(self):
        links = (PolarizedLink(np.eye(2, dtype=complex), 0.0),)
        with pytest.raises(ContractViolation):
            effective_channel(links, linear_polarization(), phase_shift_vector([0.0, 1.0]))


class TestPerturbEveLinks:
    def _links(self, n, seed=1):
        gen = RngStream(seed, 0).generator()
        from polarsec.channel import _links_from_generator

        return _links_from_generator(0.2, n, gen)

    def test_zero_error_is_identity(self):
        links = self._links(4)
        out = perturb_eve_links(links, 0.0, RngStream(2, 2))
        for a, b in zip(links, out):
            assert np.array_equal(a.lam, b.lam)

    def test_error_variance(self):
        links = self._links(25_000)
        out = perturb_eve_links(links, 0.5, RngStream(3, 2))
        true = np.stack([l.lam for l in links])
        est = np.stack([l.lam for l in out])
        normalized = (true - est) / np.abs(true)
        var = np.mean(np.abs(normalized) ** 2)
        assert abs(var - 0.5) <= 0.02 * 0.5

    def test_zero_magnitude_entries_pass_through(self):
        # chi = 0 gives exactly zero off-diagonal entries
        gen = RngStream(4, 0).generator()
        from polarsec.channel import _links_from_generator

        links = _links_from_generator(0.0, 3, gen)
        out = perturb_eve_links(links, 0.7, RngStream(4, 2))
        for link in out:
            assert link.lam[0, 1] == 0.0 and link.lam[1, 0] == 0.0

    def test_grid_shape_preserved(self):
        grid = (self._links(3), self._links(3, seed=9))
        out = perturb_eve_links(grid, 0.1, RngStream(5, 2))
        assert len(out) == 2 and len(out[0]) == 3


class TestChannelSet:
    def test_shapes_single_eve_antenna(self):
        cfg = ScenarioConfig(n_bs=4, m_eve=1)
        cs = gen_channel_set(cfg, trial_stream(cfg.master_seed, 0))
        assert cs.n == 4 and cs.m == 1
        assert len(cs.user_links) == 4
        assert len(cs.eve_column(0)) == 4

    def test_shapes_multi_eve_antenna(self):
        cfg = ScenarioConfig(n_bs=4, m_eve=4)
        cs = gen_channel_set(cfg, trial_stream(cfg.master_seed, 0))
        assert cs.n == 4 and cs.m == 4
        assert len(cs.eve_links) == 4 and len(cs.eve_links[0]) == 4

    def test_deterministic(self):
        cfg = ScenarioConfig()
        a = gen_channel_set(cfg, trial_stream(7, 3))
        b = gen_channel_set(cfg, trial_stream(7, 3))
        for la, lb in zip(a.user_links, b.user_links):
            assert np.array_equal(la.lam, lb.lam)
        for ra, rb in zip(a.eve_links, b.eve_links):
            for la, lb in zip(ra, rb):
                assert np.array_equal(la.lam, lb.lam)

    def test_trials_are_independent_streams(self):
        cfg = ScenarioConfig()
        a = gen_channel_set(cfg, trial_stream(7, 0))
        b = gen_channel_set(cfg, trial_stream(7, 1))
        assert not np.array_equal(a.user_links[0].lam, b.user_links[0].lam)

    def test_polarizations_copied(self):
        cfg = ScenarioConfig(g_user=(0.0, 1.0), g_eve=(1.0, 0.0))
        cs = gen_channel_set(cfg, trial_stream(0, 0))
        assert np.allclose(cs.g_user.g, [0.0, 1.0])
        assert np.allclose(cs.g_eve.g, [1.0, 0.0])


class TestTerminalPolarization:
    def test_normalizes(self):
        g = terminal_polarization([3.0, 4.0])
        assert abs(np.linalg.norm(g.g) - 1.0) <= 1e-15

    def test_rejects_zero(self):
        with pytest.raises(ContractViolation):
            terminal_polarization([0.0, 0.0])
