import numpy as np
import pytest

from focklaser.distribution import PhotonDistribution
from focklaser.errors import ValidationError
from focklaser.params import GainParams, MultiLevelGain, RabiParams


class TestRabiParams:
    def test_defaults_resonant(self):
        p = RabiParams(g=2.0)
        assert p.omega0 == p.omega == 1.0
        assert p.g_abs == 2.0
        assert p.lam_rel == 0.0

    @pytest.mark.parametrize("kw", [
        {"omega": 0.0}, {"omega": -1.0}, {"g": -0.1}, {"lam": -0.2},
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            RabiParams(**kw)


class TestGainParams:
    def test_negative_rates_rejected(self):
        for kw in ({"epsilon": -1e-5}, {"gamma": -1.0}, {"r": -1.0},
                   {"kappa": -1e-8}):
            base = dict(epsilon=1e-5, gamma=1e-3, r=0.0, kappa=1e-8)
            base.update(kw)
            with pytest.raises(ValidationError):
                GainParams(**base)

    def test_weak_coupling_warning(self):
        gp = GainParams(epsilon=0.05, gamma=1e-3, r=0.0, kappa=1e-8)
        with pytest.warns(UserWarning, match="weak-emitter"):
            gp.check_weak_coupling(RabiParams(g=1.0))

    def test_no_warning_in_weak_regime(self, recwarn):
        gp = GainParams(epsilon=1e-5, gamma=1e-3, r=0.0, kappa=1e-8)
        gp.check_weak_coupling(RabiParams(g=1.0))
        assert not recwarn.list

    def test_replace(self):
        gp = GainParams(epsilon=1e-5, gamma=1e-3, r=1e-2, kappa=1e-8)
        assert gp.replace(r=0.0).r == 0.0
        assert gp.replace(r=0.0).epsilon == gp.epsilon


class TestMultiLevelGain:
    def test_effective_pump(self):
        mlg = MultiLevelGain.symmetric(1e-3, 1e-3)
        assert mlg.r_a == pytest.approx(5e-4)
        assert MultiLevelGain.symmetric(0.0, 1e-3).r_a == 0.0


class TestPhotonDistribution:
    def test_entropy_diagnostic(self):
        vacuum = PhotonDistribution.from_probs(np.array([1.0]))
        assert vacuum.entropy == 0.0
        uniform = PhotonDistribution.from_probs(np.full(16, 1 / 16))
        assert uniform.entropy == pytest.approx(np.log(16.0))

    def test_moment_consistency(self, rng):
        probs = rng.uniform(0, 1, size=40)
        d = PhotonDistribution.from_probs(probs)
        n = np.arange(40)
        assert d.mean == pytest.approx(float(n @ d.probs), abs=1e-12)
        assert d.variance == pytest.approx(
            float((n - d.mean) ** 2 @ d.probs), abs=1e-10)
        assert d.fano == pytest.approx(d.variance / d.mean, rel=1e-12)

    def test_vacuum_fano_is_nan(self):
        import math
        assert math.isnan(PhotonDistribution.from_probs(np.array([1.0])).fano)

    def test_negative_probability_rejected(self):
        with pytest.raises(ValidationError):
            PhotonDistribution.from_probs(np.array([0.5, -0.2, 0.7]))
