import numpy as np
import pytest
from numpy.testing import assert_allclose

from miso_pareto.errors import DimensionMismatch, DomainError
from miso_pareto.services.channel import ChannelRealization, random_rayleigh, synth_channels
from miso_pareto.services.rates import (
    Beamformer,
    DecodingScenario,
    RatePoint,
    mr_beamformer,
    rate_pair,
    received_powers,
    sinr_from_powers,
    zf_beamformer,
)


@pytest.fixture
def channels():
    return synth_channels(1.0, 2.0, 2.0, 1.0, 0.3, 0.6)


def test_zero_forcing_removes_crosstalk(channels):
    w = zf_beamformer(1, channels)
    assert abs(np.vdot(channels.h12, w.w)) < 1e-14
    assert_allclose(w.power, 1.0)


def test_mr_maximizes_direct_power(channels):
    p1, _, _, _ = received_powers(mr_beamformer(1, channels), zf_beamformer(2, channels), channels)
    assert_allclose(p1, 1.0)


def test_nn_rates_by_hand(channels):
    w1, w2 = mr_beamformer(1, channels), mr_beamformer(2, channels)
    p1, q2, p2, q1 = received_powers(w1, w2, channels)
    # MR powers: own g^2, leaked (g kappa)^2
    assert_allclose([p1, q2, p2, q1], [1.0, 0.36, 1.0, 1.44], rtol=1e-12)
    point = rate_pair(DecodingScenario.NN, w1, w2, channels)
    assert_allclose(point.r1, np.log2(1 + 1.0 / 2.44))
    assert_allclose(point.r2, np.log2(1 + 1.0 / 1.36))


def test_sic_caps_the_interferer():
    g1, g2 = sinr_from_powers(DecodingScenario.DN, 1.0, 0.5, 2.0, 3.0, 1.0, 1.0)
    assert g1 == 1.0
    # RX1 must decode link 2 treating its own signal as noise
    assert_allclose(g2, min(3.0 / 2.0, 2.0 / 1.5))

    g1, g2 = sinr_from_powers(DecodingScenario.DD, 1.0, 0.5, 2.0, 3.0, 1.0, 1.0)
    assert_allclose([g1, g2], [min(1.0, 0.5 / 3.0), min(2.0, 3.0 / 2.0)])


def test_nd_is_mirrored_dn():
    powers = np.random.default_rng(0).uniform(0.1, 3.0, size=(4, 50))
    p1, q2, p2, q1 = powers
    dn = sinr_from_powers(DecodingScenario.DN, p1, q2, p2, q1, 1.0, 0.5)
    nd = sinr_from_powers(DecodingScenario.ND, p2, q1, p1, q2, 0.5, 1.0)
    assert_allclose(dn[0], nd[1])
    assert_allclose(dn[1], nd[0])


def test_beamformer_power_limit():
    with pytest.raises(DomainError):
        Beamformer(np.array([1.0, 0.1]))
    with pytest.raises(DomainError):
        Beamformer(np.array([np.inf, 0.0]))


def test_beamformer_length_checked():
    ch = random_rayleigh(4, 1)
    with pytest.raises(DimensionMismatch):
        received_powers(Beamformer(np.array([1.0, 0.0])), mr_beamformer(2, ch), ch)


def test_rate_point_validation():
    assert RatePoint(-1e-15, 0.5, DecodingScenario.NN).r1 == 0.0
    with pytest.raises(DomainError):
        RatePoint(-0.1, 0.5, DecodingScenario.NN)
    with pytest.raises(DomainError):
        RatePoint(np.nan, 0.5, DecodingScenario.NN)


def test_scenario_mirror():
    assert DecodingScenario.DN.mirrored is DecodingScenario.ND
    assert DecodingScenario.DD.mirrored is DecodingScenario.DD


def _random_beamformer(rng, n_t):
    v = rng.standard_normal(n_t) + 1j * rng.standard_normal(n_t)
    return Beamformer(rng.uniform(0.2, 1.0) * v / np.linalg.norm(v))


def _rates(ch, w1, w2):
    return [(p.r1, p.r2) for p in (rate_pair(s, w1, w2, ch) for s in DecodingScenario)]


def test_rates_ignore_channel_phases():
    rng = np.random.default_rng(31)
    for seed in range(20):
        ch = random_rayleigh(3, seed)
        w1, w2 = _random_beamformer(rng, 3), _random_beamformer(rng, 3)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=4))
        rotated = ChannelRealization(ch.h11 * phases[0], ch.h12 * phases[1],
                                     ch.h21 * phases[2], ch.h22 * phases[3],
                                     ch.sigma1_sq, ch.sigma2_sq)
        assert_allclose(_rates(rotated, w1, w2), _rates(ch, w1, w2), rtol=0, atol=1e-12)


def test_rates_ignore_a_common_rescaling_of_channels_and_noise():
    rng = np.random.default_rng(32)
    for seed in range(20):
        ch = random_rayleigh(3, seed, sigma1_sq=0.7, sigma2_sq=1.8)
        w1, w2 = _random_beamformer(rng, 3), _random_beamformer(rng, 3)
        t = rng.uniform(0.1, 10.0)
        scaled = ChannelRealization(t * ch.h11, t * ch.h12, t * ch.h21, t * ch.h22,
                                    t * t * ch.sigma1_sq, t * t * ch.sigma2_sq)
        assert_allclose(_rates(scaled, w1, w2), _rates(ch, w1, w2), rtol=1e-12, atol=1e-12)


def test_decoding_never_hurts_link1():
    rng = np.random.default_rng(33)
    for seed in range(50):
        ch = random_rayleigh(4, seed)
        w1, w2 = _random_beamformer(rng, 4), _random_beamformer(rng, 4)
        nn = rate_pair(DecodingScenario.NN, w1, w2, ch)
        dn = rate_pair(DecodingScenario.DN, w1, w2, ch)
        assert dn.r1 > nn.r1
        # no interference at RX1: decoding changes nothing for link 1
        w2 = zf_beamformer(2, ch)
        nn = rate_pair(DecodingScenario.NN, w1, w2, ch)
        dn = rate_pair(DecodingScenario.DN, w1, w2, ch)
        assert_allclose(dn.r1, nn.r1, rtol=1e-12)
