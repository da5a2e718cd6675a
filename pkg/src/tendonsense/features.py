"""Feature extraction: windowed spectra for texture, phase regression for stiffness.

Texture pipeline: crop the lead-in, take a fixed 180-sample window, remove the
window mean (the contact preload), and keep the one-sided DFT magnitudes. At
60 Hz and 180 samples that is 91 features on a 1/3 Hz grid from 0 to 30 Hz.

Stiffness pipeline: find the tap's three phases (dynamic deformation, static
hold, strain release), then fit a least-squares line to the hold; slope,
intercept and Pearson correlation are the three features.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TEXTURE, Dataset, FeatureVector, StrainTrace, build_dataset
from .errors import (
    EmptyInputError,
    MixedTasksError,
    StaticPhaseTooShortError,
    TooFewPointsError,
    TraceTooShortError,
)

TEXTURE_WINDOW_LEN = 180
LEAD_CROP_S = 0.5
STIFFNESS_FEATURE_NAMES = ("slope", "intercept", "r")

# Hold-phase boundary detection; robust at the default noise level (0.05 N).
ONSET_THRESHOLD_N = 0.5
RELEASE_FRACTION = 0.5
GUARD_SAMPLES = 6
MIN_STATIC_SAMPLES = 10


@dataclass(frozen=True)
class Window:
    """A fixed-length slice of a trace used for spectral features."""

    start_index: int
    length: int
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)


@dataclass(frozen=True)
class PhaseSegmentation:
    """Sample indices bounding the phases of one stiffness tap."""

    onset_index: int
    peak_index: int
    static_start: int
    static_end: int
    release_index: int
    contact_detected: bool


@dataclass(frozen=True)
class RegressionResult:
    """Least-squares line over the static phase: slope (N/s), intercept at the
    phase's local time origin (N), and Pearson correlation."""

    slope: float
    intercept: float
    r: float


def window_trace(
    trace: StrainTrace,
    lead_crop_s: float = LEAD_CROP_S,
    length: int = TEXTURE_WINDOW_LEN,
) -> Window:
    """Drop the lead-in, return the next `length` samples (tail is ignored)."""
    crop = int(math.ceil(lead_crop_s * trace.sample_rate_hz))
    required = crop + length
    if len(trace) < required:
        raise TraceTooShortError(required, len(trace))
    return Window(
        start_index=crop,
        length=length,
        samples=trace.samples[crop : crop + length],
    )


def zero_mean(samples) -> np.ndarray:
    """Subtract the mean so features see fluctuation, not contact preload."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInputError("cannot zero-mean an empty sequence")
    return arr - arr.mean()


def dft_magnitudes(samples, fs: float) -> tuple[np.ndarray, np.ndarray]:
    """One-sided DFT magnitudes |X_k| for k = 0..N//2, with their frequencies.

    X_k = sum_n s[n] * exp(-2i*pi*k*n/N), unnormalised. The bin spacing is
    fs/N; for a 180-sample window at 60 Hz that is the 1/3 Hz feature grid.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size < 2:
        raise TraceTooShortError(2, arr.size)
    mags = np.abs(np.fft.rfft(arr))
    freqs = np.arange(mags.size) * (fs / arr.size)
    return freqs, mags


def texture_feature_names(n_bins: int, fs: float, window_len: int) -> tuple[str, ...]:
    return tuple(f"freq_{k * fs / window_len:.2f}" for k in range(n_bins))


def texture_features(
    trace: StrainTrace,
    lead_crop_s: float = LEAD_CROP_S,
    length: int = TEXTURE_WINDOW_LEN,
) -> FeatureVector:
    """Windowed, zero-meaned spectral magnitudes of one texture glide."""
    window = window_trace(trace, lead_crop_s, length)
    centred = zero_mean(window.samples)
    _, mags = dft_magnitudes(centred, trace.sample_rate_hz)
    # The DC bin of a zero-meaned window is identically zero; suppress the
    # float residue so the feature is exactly constant across trials.
    mags[0] = 0.0
    names = texture_feature_names(mags.size, trace.sample_rate_hz, length)
    return FeatureVector(values=tuple(float(m) for m in mags), names=names)


def segment_phases(
    trace: StrainTrace,
    onset_threshold_n: float = ONSET_THRESHOLD_N,
    release_fraction: float = RELEASE_FRACTION,
    guard_samples: int = GUARD_SAMPLES,
    hold_s: float = 4.0,
) -> PhaseSegmentation:
    """Locate the dynamic rise, static hold and release of a stiffness tap.

    Onset is the first sample above the threshold, the peak is the first
    maximum at or after onset, and release is the first sample after the peak
    below release_fraction of the peak value (the last index if the trace
    never falls that far). The static phase keeps a guard margin after the
    peak and before release. A trace that never crosses the threshold is a
    no-contact trial: the static phase falls back to a centred window of
    hold_s seconds.
    """
    s = trace.samples
    n = s.size
    above = np.nonzero(s > onset_threshold_n)[0]
    if above.size == 0:
        width = min(n, int(round(hold_s * trace.sample_rate_hz)))
        start = (n - width) // 2
        return PhaseSegmentation(
            onset_index=0,
            peak_index=0,
            static_start=start,
            static_end=start + width,
            release_index=n - 1,
            contact_detected=False,
        )
    onset = int(above[0])
    peak = onset + int(np.argmax(s[onset:]))
    below = np.nonzero(s[peak + 1 :] < release_fraction * s[peak])[0]
    release = peak + 1 + int(below[0]) if below.size else n - 1
    static_start = peak + guard_samples
    static_end = release - guard_samples
    if static_end - static_start < MIN_STATIC_SAMPLES:
        raise StaticPhaseTooShortError(
            f"static phase [{static_start}, {static_end}) has fewer than "
            f"{MIN_STATIC_SAMPLES} samples"
        )
    return PhaseSegmentation(
        onset_index=onset,
        peak_index=peak,
        static_start=static_start,
        static_end=static_end,
        release_index=release,
        contact_detected=True,
    )


def linear_fit(t, y) -> RegressionResult:
    """Ordinary least squares of y against t, with Pearson correlation.

    Sums are accumulated with math.fsum so the result tracks an exact
    normal-equation solution to near machine precision. Constant y (variance
    below 1e-15) degenerates to slope 0, intercept y[0], r defined as 0.
    """
    t = [float(v) for v in t]
    y = [float(v) for v in y]
    n = len(t)
    if n != len(y):
        raise TooFewPointsError("t and y must have equal lengths")
    if n < 2:
        raise TooFewPointsError("need at least two points to fit a line")
    if any(b <= a for a, b in zip(t, t[1:])):
        raise ValueError("t must be strictly increasing")
    t_mean = math.fsum(t) / n
    y_mean = math.fsum(y) / n
    stt = math.fsum((ti - t_mean) ** 2 for ti in t)
    syy = math.fsum((yi - y_mean) ** 2 for yi in y)
    sty = math.fsum((ti - t_mean) * (yi - y_mean) for ti, yi in zip(t, y))
    if syy < 1e-15:
        return RegressionResult(slope=0.0, intercept=y[0], r=0.0)
    slope = sty / stt
    intercept = y_mean - slope * t_mean
    r = sty / math.sqrt(stt * syy)
    r = max(-1.0, min(1.0, r))
    return RegressionResult(slope=slope, intercept=intercept, r=r)


def stiffness_features(
    trace: StrainTrace,
    onset_threshold_n: float = ONSET_THRESHOLD_N,
    release_fraction: float = RELEASE_FRACTION,
    guard_samples: int = GUARD_SAMPLES,
) -> FeatureVector:
    """Slope, intercept and correlation of the static-hold phase."""
    seg = segment_phases(trace, onset_threshold_n, release_fraction, guard_samples)
    idx = np.arange(seg.static_start, seg.static_end)
    t = (idx - seg.static_start) / trace.sample_rate_hz
    y = trace.samples[seg.static_start : seg.static_end]
    fit = linear_fit(t, y)
    return FeatureVector(
        values=(fit.slope, fit.intercept, fit.r),
        names=STIFFNESS_FEATURE_NAMES,
    )


def extract_dataset(traces) -> Dataset:
    """Run the matching feature pipeline over a uniform corpus of traces.

    All traces must share one trial kind and contact mode; labels are
    required. Row order follows trace order.
    """
    traces = list(traces)
    if not traces:
        raise EmptyInputError("cannot extract features from an empty corpus")
    kind = traces[0].trial_kind
    mode = traces[0].contact_mode
    rows = []
    for trace in traces:
        if trace.trial_kind != kind or trace.contact_mode != mode:
            raise MixedTasksError(
                f"record {trace.trial_id!r} is {trace.trial_kind}/{trace.contact_mode}, "
                f"corpus started as {kind}/{mode}"
            )
        if trace.label is None:
            raise EmptyInputError(f"record {trace.trial_id!r} has no label")
        try:
            fv = (
                texture_features(trace)
                if kind == TEXTURE
                else stiffness_features(trace)
            )
        except TraceTooShortError as err:
            raise TraceTooShortError(err.required, err.actual, trace.trial_id) from err
        rows.append((fv, trace.label))
    return build_dataset(rows, task=kind, mode=mode)
