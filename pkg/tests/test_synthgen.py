import numpy as np
import pytest

import adaptometry as am
from adaptometry.synthgen import SynthConfig, SynthConfigError, parse_synth_config


def make_config(**overrides):
    base = dict(
        units=50,
        indicators=6,
        periods=(("2020-01", "baseline"), ("2020-06", "stressed")),
        baseline_means=(50.0,) * 6,
        noise_sd=5.0,
        loading_baseline=0.0,
        loading_stressed=15.0,
        variance_multiplier=2.0,
        seed=1,
    )
    base.update(overrides)
    return SynthConfig(**base)


class TestConfig:
    def test_valid(self):
        make_config()

    def test_single_unit_rejected(self):
        with pytest.raises(SynthConfigError, match="2 units"):
            make_config(units=1)

    def test_loading_ordering(self):
        with pytest.raises(SynthConfigError, match="loading"):
            make_config(loading_baseline=3.0, loading_stressed=1.0)

    def test_variance_multiplier_floor(self):
        with pytest.raises(SynthConfigError, match="variance_multiplier"):
            make_config(variance_multiplier=0.5)

    def test_means_length(self):
        with pytest.raises(SynthConfigError, match="means"):
            make_config(baseline_means=(50.0,) * 3)

    def test_bad_regime(self):
        with pytest.raises(SynthConfigError, match="regime"):
            make_config(periods=(("2020-01", "calm"),))

    def test_unsorted_period_labels(self):
        with pytest.raises(SynthConfigError, match="increasing"):
            make_config(periods=(("2020-06", "baseline"), ("2020-01", "stressed")))


class TestParseConfig:
    TEXT = """\
# generator settings
units = 50
indicators = 6
periods = 2020-01:baseline, 2020-06:stressed
baseline_means = 50
noise_sd = 5.0
loading_baseline = 0.0
loading_stressed = 15.0
variance_multiplier = 2.0
seed = 1
"""

    def test_roundtrip(self):
        config = parse_synth_config(self.TEXT)
        assert config == make_config()

    def test_missing_key(self):
        with pytest.raises(SynthConfigError, match="missing"):
            parse_synth_config("units = 3\n")

    def test_unknown_key(self):
        with pytest.raises(SynthConfigError, match="unknown"):
            parse_synth_config(self.TEXT + "extra = 1\n")

    def test_explicit_means_list(self):
        text = self.TEXT.replace("baseline_means = 50", "baseline_means = 10,20,30,40,50,60")
        assert parse_synth_config(text).baseline_means == (10, 20, 30, 40, 50, 60)


class TestGenerate:
    def test_panel_shape_and_labels(self):
        panel = am.generate_panel(make_config())
        assert panel.periods == ("2020-01", "2020-06")
        assert panel.n_units == 50
        assert panel.n_indicators == 6
        assert am.validate(panel).ok

    def test_determinism(self):
        a = am.generate_panel(make_config())
        b = am.generate_panel(make_config())
        assert np.array_equal(a.values, b.values)

    def test_seed_changes_output(self):
        a = am.generate_panel(make_config(seed=1))
        b = am.generate_panel(make_config(seed=2))
        assert not np.array_equal(a.values, b.values)

    def test_values_clamped(self):
        panel = am.generate_panel(make_config(loading_stressed=200.0, seed=3))
        assert panel.values.min() >= 0.0
        assert panel.values.max() <= 100.0

    def test_quiet_baseline_has_no_strong_edges(self):
        # independent indicators at m=200: no |r| clears 0.7
        config = make_config(
            units=200, indicators=10, baseline_means=(50.0,) * 10,
            loading_stressed=0.0, variance_multiplier=1.0,
            periods=(("2020-01", "baseline"),),
        )
        hits = 0
        for seed in range(20):
            panel = am.generate_panel(
                make_config(
                    units=200, indicators=10, baseline_means=(50.0,) * 10,
                    loading_stressed=0.0, variance_multiplier=1.0,
                    periods=(("2020-01", "baseline"),), seed=seed,
                )
            )
            _, w = am.weight_series(panel)[0]
            hits += w == 0.0
        assert hits == 20
        assert config.seed == 1


class TestStressContrast:
    def contrast_config(self, seed, **overrides):
        base = dict(
            units=200, indicators=10, baseline_means=(50.0,) * 10,
            noise_sd=5.0, loading_baseline=0.0, loading_stressed=15.0,
            variance_multiplier=2.0, seed=seed,
            periods=(("2020-01", "baseline"), ("2020-06", "stressed")),
        )
        base.update(overrides)
        return SynthConfig(**base)

    def test_direction_on_a_few_seeds(self):
        for seed in range(5):
            c = am.stress_contrast(self.contrast_config(seed))
            assert c.w_stressed > c.w_baseline
            assert c.d_max_stressed > c.d_max_baseline

    def test_requires_both_regimes(self):
        with pytest.raises(SynthConfigError, match="baseline and one stressed"):
            am.stress_contrast(
                self.contrast_config(0, periods=(("2020-01", "baseline"),))
            )

    def test_degenerate_two_indicators(self):
        c = am.stress_contrast(
            self.contrast_config(0, indicators=2, baseline_means=(50.0, 50.0))
        )
        for v in (c.w_baseline, c.w_stressed, c.d_max_baseline, c.d_max_stressed):
            assert np.isfinite(v)

    def test_monotone_in_stressed_loading(self):
        # mean stressed weight over 100 seeds must not decrease with loading
        means = []
        for loading in (10.0, 15.0, 20.0):
            ws = [
                am.stress_contrast(
                    self.contrast_config(seed, loading_stressed=loading)
                ).w_stressed
                for seed in range(100)
            ]
            means.append(np.mean(ws))
        assert means[0] <= means[1] + 1e-9
        assert means[1] <= means[2] + 1e-9
