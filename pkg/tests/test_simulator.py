import numpy as np
import pytest

from tendonsense import (
    SimConfig,
    StiffnessClassSpec,
    TexturePlateSpec,
    generate_corpus,
    height_profile,
    label_for,
    presets,
    simulate_stiffness_trial,
    simulate_texture_trial,
)
from tendonsense.errors import ConfigError, OutOfPlateError
from tendonsense.simulator import AC_SCALE, ac_config, derive_trial_seed

QUIET = SimConfig(noise_sigma_n=0.0)


class TestHeightProfile:
    def test_flat_everywhere_zero(self):
        plate = TexturePlateSpec("flat")
        for x in (0.0, 1.3, 29.9, 60.0):
            assert height_profile(plate, x) == 0.0

    def test_rectangular_square_wave(self):
        plate = TexturePlateSpec("rectangular", period_mm=4.0, depth_mm=1.0, duty=0.5)
        assert height_profile(plate, 1.0) == 1.0
        assert height_profile(plate, 3.0) == 0.0

    def test_triangular_apex_and_land(self):
        plate = TexturePlateSpec("triangular", period_mm=4.0, depth_mm=1.0)
        assert height_profile(plate, 1.0) == 1.0
        assert height_profile(plate, 2.0) == 0.0

    def test_circular_range(self):
        plate = TexturePlateSpec("circular", period_mm=4.0, depth_mm=1.0)
        xs = np.linspace(0.0, 60.0, 601)
        depths = np.array([height_profile(plate, x) for x in xs])
        assert depths.min() >= 0.0
        assert depths.max() <= 1.0 + 1e-12
        assert depths.max() > 0.9  # groove bottom is reached

    def test_out_of_plate(self):
        plate = TexturePlateSpec("flat")
        with pytest.raises(OutOfPlateError):
            height_profile(plate, -0.1)
        with pytest.raises(OutOfPlateError):
            height_profile(plate, 60.1)

    def test_spec_validation(self):
        with pytest.raises(ConfigError):
            TexturePlateSpec("flat", depth_mm=1.0)
        with pytest.raises(ConfigError):
            TexturePlateSpec("rectangular", period_mm=0.0, depth_mm=1.0)
        with pytest.raises(ConfigError):
            TexturePlateSpec("rectangular", period_mm=4.0, depth_mm=1.0, duty=1.0)
        with pytest.raises(ConfigError):
            StiffnessClassSpec(peak_strain_n=-1.0)
        with pytest.raises(ConfigError):
            SimConfig(noise_sigma_n=-0.1)


class TestTextureTrial:
    def test_flat_zero_noise_is_constant_baseline(self):
        trace = simulate_texture_trial(TexturePlateSpec("flat"), QUIET, seed=1)
        assert np.all(trace.samples == 12.0)

    def test_sample_count_matches_duration(self):
        trace = simulate_texture_trial(TexturePlateSpec("flat"), QUIET, seed=1)
        assert len(trace) == 240  # 60 mm / 15 mm/s * 60 Hz
        assert trace.duration_s == pytest.approx(4.0)

    def test_determinism(self):
        plate = TexturePlateSpec("rectangular", period_mm=4.0, depth_mm=1.0)
        a = simulate_texture_trial(plate, SimConfig(), seed=42)
        b = simulate_texture_trial(plate, SimConfig(), seed=42)
        assert np.array_equal(a.samples, b.samples)

    def test_zero_noise_bounds(self):
        cfg = QUIET
        for lab, plate in presets("texture").items():
            trace = simulate_texture_trial(plate, cfg, seed=3)
            lo = cfg.baseline_strain_n
            hi = cfg.baseline_strain_n + cfg.texture_gain_n_per_mm * plate.depth_mm
            assert trace.samples.min() >= lo - 1e-12, lab.name
            assert trace.samples.max() <= hi + 1e-12, lab.name


class TestStiffnessTrial:
    def test_none_class_zero_noise_is_silent(self):
        spec = presets("stiffness")[label_for("stiffness", "NONE")]
        trace = simulate_stiffness_trial(spec, QUIET, seed=5)
        assert np.all(trace.samples == 0.0)

    def test_hold_phase_is_affine_with_configured_slope(self):
        spec = StiffnessClassSpec(10.0, -0.9)
        cfg = QUIET
        trace = simulate_stiffness_trial(spec, cfg, seed=5)
        fs = cfg.sample_rate_hz
        hold_start = int(round((0.5 + spec.rise_s) * fs))
        hold_end = int(round((0.5 + spec.rise_s + cfg.hold_s) * fs))
        seg = trace.samples[hold_start:hold_end]
        diffs = np.diff(seg)
        assert np.allclose(diffs, -0.9 / fs, atol=1e-9)
        assert seg[0] == pytest.approx(10.0, abs=1e-9)

    def test_trace_length(self):
        spec = presets("stiffness")[label_for("stiffness", "PLA")]
        trace = simulate_stiffness_trial(spec, QUIET, seed=5)
        # 0.5 lead + 0.5 rise + 4.0 hold + 0.3 release + 0.5 tail at 60 Hz
        assert len(trace) == 348

    def test_determinism(self):
        spec = StiffnessClassSpec(7.0, -1.5)
        a = simulate_stiffness_trial(spec, SimConfig(), seed=11)
        b = simulate_stiffness_trial(spec, SimConfig(), seed=11)
        assert np.array_equal(a.samples, b.samples)


class TestPresets:
    def test_texture_labels_match_taxonomy(self):
        labels = [lab.name for lab in presets("texture")]
        assert labels == ["F", "R1", "R2", "R3", "T1", "T2", "C1", "C2"]

    def test_none_has_zero_peak(self):
        spec = presets("stiffness")[label_for("stiffness", "NONE")]
        assert spec.peak_strain_n == 0.0

    def test_rectangular_periods_differ(self):
        geo = presets("texture")
        r1 = geo[label_for("texture", "R1")]
        r2 = geo[label_for("texture", "R2")]
        assert r1.period_mm != r2.period_mm

    def test_stiffness_levels_are_ordered(self):
        peaks = [s.peak_strain_n for s in presets("stiffness").values()]
        assert peaks == sorted(peaks, reverse=True)


class TestCorpus:
    def test_texture_corpus_size(self, texture_fc_traces):
        assert len(texture_fc_traces) == 480

    def test_stiffness_corpus_size(self, stiffness_fc_traces):
        assert len(stiffness_fc_traces) == 300

    def test_determinism(self):
        a = generate_corpus("stiffness", "FC", 2, SimConfig(), seed=9)
        b = generate_corpus("stiffness", "FC", 2, SimConfig(), seed=9)
        assert all(x == y for x, y in zip(a, b))

    def test_trial_ids_unique(self, texture_fc_traces):
        ids = [t.trial_id for t in texture_fc_traces]
        assert len(set(ids)) == len(ids)

    def test_trial_seeds_mixed_per_class_and_index(self):
        seeds = {
            derive_trial_seed(7, name, i)
            for name in ("F", "R1", "R2")
            for i in range(20)
        }
        assert len(seeds) == 60

    def test_ac_scaling_is_exact(self):
        cfg = SimConfig()
        plate = TexturePlateSpec("rectangular", period_mm=4.0, depth_mm=1.0)
        fc = simulate_texture_trial(plate, cfg, seed=21)
        ac = simulate_texture_trial(plate, ac_config(cfg), seed=21)
        quiet_fc = simulate_texture_trial(plate, SimConfig(noise_sigma_n=0.0), seed=21)
        quiet_ac = simulate_texture_trial(
            plate, ac_config(SimConfig(noise_sigma_n=0.0)), seed=21)
        # deterministic parts differ by the baseline shift only
        assert np.allclose(
            quiet_fc.samples - quiet_ac.samples,
            (1 - AC_SCALE) * cfg.baseline_strain_n,
            atol=1e-12,
        )
        # both modes consume the identical standard-normal stream, and the
        # quarter scaling (a power of two) is bit-exact
        noise = cfg.noise_sigma_n * np.random.default_rng(21).standard_normal(len(fc))
        assert np.array_equal(fc.samples, quiet_fc.samples + noise)
        assert np.array_equal(ac.samples, quiet_ac.samples + AC_SCALE * noise)

    def test_ac_corpus_uses_scaled_config(self):
        fc = generate_corpus("texture", "FC", 1, SimConfig(noise_sigma_n=0.0), seed=3)
        ac = generate_corpus("texture", "AC", 1, SimConfig(noise_sigma_n=0.0), seed=3)
        flat_fc = next(t for t in fc if t.label.name == "F")
        flat_ac = next(t for t in ac if t.label.name == "F")
        assert np.all(flat_fc.samples == 12.0)
        assert np.all(flat_ac.samples == 3.0)

    def test_rejects_bad_args(self):
        with pytest.raises(ConfigError):
            generate_corpus("texture", "FC", 0, SimConfig(), seed=1)
        with pytest.raises(ConfigError):
            generate_corpus("texture", "sideways", 1, SimConfig(), seed=1)
