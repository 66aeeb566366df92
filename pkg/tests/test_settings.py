import pytest

from Common.navErrors import ScenarioError
from init_settings import Settings, ValidationSettings, init_settings


class TestSettings:
    def test_defaults(self, settings):
        assert settings.k == 0.4
        assert settings.p == 20
        assert settings.virtualRangeFactor < 1.0
        assert settings.goalTol == 0.05
        assert settings.validation == ValidationSettings()

    @pytest.mark.parametrize('field, value', [('k', 0.0), ('p', 3), ('p', 0), ('dtMax', -0.1),
                                              ('virtualRangeFactor', 1.0),
                                              ('integrator', 'euler'), ('nRays', 2),
                                              ('maxDtHalvings', -1), ('lyapunovSlack', -1.0),
                                              ('stallTime', 0.0), ('stallWindow', 0.0)])
    def test_rejects(self, field, value):
        with pytest.raises(ValueError):
            Settings(**{field: value})

    def test_overrides(self, settings):
        out = settings.with_overrides({'k': 0.8, 'bandLevels': 3})
        assert out.k == 0.8
        assert out.validation.bandLevels == 3
        assert settings.k == 0.4
        assert settings.validation.bandLevels == 5

    def test_overrides_are_checked(self, settings):
        with pytest.raises(ValueError):
            settings.with_overrides({'p': 7})

    @pytest.mark.parametrize('key', ['warp', 'validation'])
    def test_unknown_key(self, settings, key):
        with pytest.raises(ScenarioError):
            settings.with_overrides({key: 1})

    def test_fresh_instances(self):
        assert init_settings() is not init_settings()
