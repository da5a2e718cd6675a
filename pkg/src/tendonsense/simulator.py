"""Synthetic tendon-strain traces for texture glides and stiffness taps.

Texture trials model the fingertip dropping into periodic grooves while the
plate slides underneath at constant speed: strain is the baseline contact
strain plus a gain times the groove depth profile, smoothed by a Gaussian
contact kernel, plus white sensor noise. Stiffness taps are a three-phase
trapezoid: linear rise, slowly drifting hold, linear release.

Every trace is a pure function of (spec, config, seed), so corpora are
bit-reproducible and trials can be generated in parallel.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    STIFFNESS,
    TEXTURE,
    ClassLabel,
    StrainTrace,
    task_labels,
)
from .errors import ConfigError, OutOfPlateError

FLAT = "flat"
RECTANGULAR = "rectangular"
TRIANGULAR = "triangular"
CIRCULAR = "circular"
PROFILES = (FLAT, RECTANGULAR, TRIANGULAR, CIRCULAR)

# Abduction contact forces span roughly a quarter of the flexion range, so AC
# corpora scale the baseline strain and sensor noise by this factor. A power
# of two keeps the scaled noise stream exactly 0.25x the FC stream.
AC_SCALE = 0.25

LEAD_S = 0.5  # zero-strain lead-in before a stiffness tap
TAIL_S = 0.5  # zero-strain tail after release


@dataclass(frozen=True)
class TexturePlateSpec:
    """Geometry of one grooved (or flat) texture plate."""

    profile: str
    period_mm: float = 0.0
    depth_mm: float = 0.0
    duty: float = 0.5
    length_mm: float = 60.0

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ConfigError(f"unknown profile {self.profile!r}")
        if self.profile == FLAT:
            if self.depth_mm != 0.0:
                raise ConfigError("flat plates must have zero depth")
        else:
            if not self.period_mm > 0:
                raise ConfigError("grooved plates need period_mm > 0")
        if self.depth_mm < 0:
            raise ConfigError("depth_mm must be >= 0")
        if self.profile == RECTANGULAR and not 0.0 < self.duty < 1.0:
            raise ConfigError("duty must lie in (0, 1)")
        if not self.length_mm > 0:
            raise ConfigError("length_mm must be positive")


@dataclass(frozen=True)
class StiffnessClassSpec:
    """Parametric shape of one stiffness class's tap response."""

    peak_strain_n: float
    hold_slope_n_per_s: float = 0.0
    rise_s: float = 0.5
    release_s: float = 0.3

    def __post_init__(self):
        if self.peak_strain_n < 0:
            raise ConfigError("peak_strain_n must be >= 0")
        if self.hold_slope_n_per_s > 0:
            raise ConfigError("hold_slope_n_per_s must be <= 0")
        if not (self.rise_s > 0 and self.release_s > 0):
            raise ConfigError("rise_s and release_s must be positive")


@dataclass(frozen=True)
class SimConfig:
    """Shared acquisition and contact-model parameters."""

    glide_speed_mm_s: float = 15.0
    sample_rate_hz: float = 60.0
    baseline_strain_n: float = 12.0
    texture_gain_n_per_mm: float = 2.0
    kernel_width_mm: float = 1.0
    # 0.002 N keeps the three same-pitch texture plates separable under the
    # 91-bin standardized Euclidean metric (the contact kernel leaves them
    # distinguishable only by fundamental amplitude, which heavier sensor
    # noise swamps) and keeps the spectral-leakage skirts above the noise
    # floor so nearly every frequency bin carries class information.
    noise_sigma_n: float = 0.002
    hold_s: float = 4.0

    def __post_init__(self):
        positive = (
            self.glide_speed_mm_s,
            self.sample_rate_hz,
            self.baseline_strain_n,
            self.texture_gain_n_per_mm,
            self.kernel_width_mm,
            self.hold_s,
        )
        if not all(v > 0 for v in positive):
            raise ConfigError("all SimConfig fields except noise must be positive")
        if self.noise_sigma_n < 0:
            raise ConfigError("noise_sigma_n must be >= 0")


def ac_config(cfg: SimConfig) -> SimConfig:
    """Config for abduction contact: baseline and noise scaled by AC_SCALE."""
    return replace(
        cfg,
        baseline_strain_n=cfg.baseline_strain_n * AC_SCALE,
        noise_sigma_n=cfg.noise_sigma_n * AC_SCALE,
    )


def _groove_depth(plate: TexturePlateSpec, x_mm: np.ndarray) -> np.ndarray:
    """Drop of the fingertip at position x, evaluated periodically (no bounds)."""
    x = np.asarray(x_mm, dtype=np.float64)
    if plate.profile == FLAT:
        return np.zeros_like(x)
    p = plate.period_mm
    d = plate.depth_mm
    phase = np.mod(x, p)
    if plate.profile == RECTANGULAR:
        return np.where(phase < plate.duty * p, d, 0.0)
    if plate.profile == TRIANGULAR:
        # symmetric V groove over the first half period, flat land after
        w = 0.5 * p
        tri = d * (1.0 - np.abs(2.0 * phase / w - 1.0))
        return np.where(phase < w, tri, 0.0)
    # circular: semicircular cross-section of radius = depth, centred
    # mid-period, clipped to zero at the plate surface
    gap = phase - 0.5 * p
    sq = d * d - gap * gap
    return np.where(sq > 0.0, np.sqrt(np.maximum(sq, 0.0)), 0.0)


def height_profile(plate: TexturePlateSpec, x_mm: float) -> float:
    """Groove depth under the fingertip at one position on the plate."""
    if not 0.0 <= x_mm <= plate.length_mm:
        raise OutOfPlateError(
            f"x={x_mm} mm outside plate [0, {plate.length_mm}] mm"
        )
    return float(_groove_depth(plate, np.float64(x_mm)))


def _smoothing_kernel(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian contact kernel discretised at the glide step, cut at 4 sigma."""
    step = cfg.glide_speed_mm_s / cfg.sample_rate_hz
    half = int(math.ceil(4.0 * cfg.kernel_width_mm / step))
    offsets = np.arange(-half, half + 1) * step
    weights = np.exp(-0.5 * (offsets / cfg.kernel_width_mm) ** 2)
    weights /= weights.sum()
    return offsets, weights


def simulate_texture_trial(
    plate: TexturePlateSpec,
    cfg: SimConfig,
    seed: int,
    *,
    label: ClassLabel | None = None,
    mode: str = "FC",
    trial_id: str = "",
) -> StrainTrace:
    """Glide the fingertip across the plate and record tendon strain.

    strain[n] = baseline + gain * (groove depth smoothed by the contact
    kernel at x = v*n/fs) + white noise from the seeded generator.
    """
    n = int(round(plate.length_mm / cfg.glide_speed_mm_s * cfg.sample_rate_hz))
    if n < 1:
        raise ConfigError("plate too short for even one sample")
    xs = np.arange(n) * (cfg.glide_speed_mm_s / cfg.sample_rate_hz)
    offsets, weights = _smoothing_kernel(cfg)
    smoothed = np.zeros(n)
    for off, w in zip(offsets, weights):
        smoothed += w * _groove_depth(plate, xs - off)
    rng = np.random.default_rng(seed)
    noise = cfg.noise_sigma_n * rng.standard_normal(n)
    samples = cfg.baseline_strain_n + cfg.texture_gain_n_per_mm * smoothed + noise
    return StrainTrace(
        samples=samples,
        sample_rate_hz=cfg.sample_rate_hz,
        trial_kind=TEXTURE,
        contact_mode=mode,
        label=label,
        trial_id=trial_id,
        seed=seed,
    )


def simulate_stiffness_trial(
    cls: StiffnessClassSpec,
    cfg: SimConfig,
    seed: int,
    *,
    label: ClassLabel | None = None,
    mode: str = "FC",
    trial_id: str = "",
) -> StrainTrace:
    """Press, hold and release: lead-in, linear rise to the peak, drifting
    hold of cfg.hold_s seconds, linear release back to rest, tail."""
    fs = cfg.sample_rate_hz
    t0 = LEAD_S
    t1 = t0 + cls.rise_s
    t2 = t1 + cfg.hold_s
    t3 = t2 + cls.release_s
    total = t3 + TAIL_S
    n = int(round(total * fs))
    t = np.arange(n) / fs

    rise = cls.peak_strain_n * (t - t0) / cls.rise_s
    hold = cls.peak_strain_n + cls.hold_slope_n_per_s * (t - t1)
    end_level = cls.peak_strain_n + cls.hold_slope_n_per_s * cfg.hold_s
    release = end_level * (1.0 - (t - t2) / cls.release_s)
    skeleton = np.select(
        [t < t0, t < t1, t < t2, t < t3],
        [0.0, rise, hold, release],
        default=0.0,
    )
    rng = np.random.default_rng(seed)
    samples = skeleton + cfg.noise_sigma_n * rng.standard_normal(n)
    return StrainTrace(
        samples=samples,
        sample_rate_hz=fs,
        trial_kind=STIFFNESS,
        contact_mode=mode,
        label=label,
        trial_id=trial_id,
        seed=seed,
    )


def presets(task: str):
    """Built-in class specs, keyed by canonical label in ordinal order.

    Texture plates share 1 mm depth, 0.5 duty and 60 mm length; the groove
    pitches put the glide fundamentals (speed/pitch) well inside the 0-30 Hz
    feature band. Stiffness classes differ in peak strain and hold drift.
    """
    labels = task_labels(task)
    if task == TEXTURE:
        geometry = {
            "F": TexturePlateSpec(FLAT),
            "R1": TexturePlateSpec(RECTANGULAR, period_mm=4.0, depth_mm=1.0),
            "R2": TexturePlateSpec(RECTANGULAR, period_mm=6.0, depth_mm=1.0),
            "R3": TexturePlateSpec(RECTANGULAR, period_mm=8.0, depth_mm=1.0),
            "T1": TexturePlateSpec(TRIANGULAR, period_mm=4.0, depth_mm=1.0),
            "T2": TexturePlateSpec(TRIANGULAR, period_mm=8.0, depth_mm=1.0),
            "C1": TexturePlateSpec(CIRCULAR, period_mm=4.0, depth_mm=1.0),
            "C2": TexturePlateSpec(CIRCULAR, period_mm=8.0, depth_mm=1.0),
        }
        return {lab: geometry[lab.name] for lab in labels}
    taps = {
        "PLA": StiffnessClassSpec(13.0, -0.2),
        "RUBBER_SOLID": StiffnessClassSpec(12.0, -0.6),
        "RUBBER_SHELL": StiffnessClassSpec(10.0, -0.9),
        "SPONGE": StiffnessClassSpec(7.0, -1.5),
        "NONE": StiffnessClassSpec(0.0, 0.0),
    }
    return {lab: taps[lab.name] for lab in labels}


def derive_trial_seed(seed: int, class_name: str, index: int) -> int:
    """Stable per-trial seed mixed from (corpus seed, class, trial index)."""
    digest = hashlib.sha256(f"{seed}:{class_name}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def generate_corpus(
    task: str,
    mode: str,
    trials_per_class: int,
    cfg: SimConfig | None = None,
    seed: int = 0,
) -> list[StrainTrace]:
    """All trials for one (task, mode) group: trials_per_class per preset class."""
    if trials_per_class < 1:
        raise ConfigError("trials_per_class must be >= 1")
    if mode not in ("FC", "AC"):
        raise ConfigError(f"mode must be FC or AC, got {mode!r}")
    cfg = cfg if cfg is not None else SimConfig()
    effective = ac_config(cfg) if mode == "AC" else cfg
    traces: list[StrainTrace] = []
    for lab, spec in presets(task).items():
        for i in range(trials_per_class):
            trial_seed = derive_trial_seed(seed, lab.name, i)
            trial_id = f"{task}-{mode}-{lab.name}-{i:03d}"
            if task == TEXTURE:
                traces.append(
                    simulate_texture_trial(
                        spec, effective, trial_seed,
                        label=lab, mode=mode, trial_id=trial_id,
                    )
                )
            else:
                traces.append(
                    simulate_stiffness_trial(
                        spec, effective, trial_seed,
                        label=lab, mode=mode, trial_id=trial_id,
                    )
                )
    return traces
