"""Welch power spectral density, band power, and beta/alpha ratio series.

The estimator follows the averaged-modified-periodogram construction: an
epoch is cut into overlapping tapered segments, each segment's squared DFT
magnitude is normalized by segment length and window power, and the
segment spectra are averaged. Output is a one-sided density in microvolts
squared per hertz, so interior bins carry the doubled two-sided mass while
DC and Nyquist do not.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .core import BandDefinition, ChannelInfo, Epoch, Recording, SessionProtocol, slice_epochs
from .errors import (
    BandOutOfRange,
    EmptySegment,
    InvalidConfig,
    NonPositiveCurrent,
    SegmentTooLong,
    ZeroDenominatorPower,
)

TAPERS = ("hamming", "hann", "rectangular")


@dataclass(frozen=True)
class WelchConfig:
    """Segmentation and tapering parameters for the PSD estimator.

    window_len is the epoch length in seconds; segment_count and
    overlap_fraction fix the segment length M as
    floor(window_samples / (1 + (segment_count - 1) * (1 - overlap_fraction))),
    and the hop as floor(M * (1 - overlap_fraction)). Residual samples at
    the window end are discarded. fft_size of None means M (no padding).
    """

    window_len: float = 10.0
    segment_count: int = 4
    overlap_fraction: float = 0.5
    taper: str = "hamming"
    fft_size: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.window_len) and self.window_len > 0):
            raise InvalidConfig(f"window_len must be > 0, got {self.window_len}")
        if self.segment_count < 1:
            raise InvalidConfig(f"segment_count must be >= 1, got {self.segment_count}")
        if not (0.0 <= self.overlap_fraction < 1.0):
            raise InvalidConfig(
                f"overlap_fraction must be in [0, 1), got {self.overlap_fraction}"
            )
        if self.taper not in TAPERS:
            raise InvalidConfig(f"taper must be one of {TAPERS}, got {self.taper!r}")
        if self.fft_size is not None and self.fft_size < 1:
            raise InvalidConfig(f"fft_size must be >= 1, got {self.fft_size}")

    def segment_plan(self, sampling_rate: float) -> tuple[int, int, int]:
        """(window_samples, segment_length, hop) for a given rate."""
        win = int(round(self.window_len * sampling_rate))
        denom = 1.0 + (self.segment_count - 1) * (1.0 - self.overlap_fraction)
        m = int(win / denom)
        if m < 1:
            raise InvalidConfig(
                f"segmentation leaves no samples per segment (window {win}, "
                f"count {self.segment_count}, overlap {self.overlap_fraction})"
            )
        if self.fft_size is not None and self.fft_size < m:
            raise InvalidConfig(f"fft_size {self.fft_size} < segment length {m}")
        hop = int(m * (1.0 - self.overlap_fraction)) if self.segment_count > 1 else m
        return win, m, hop


@dataclass(frozen=True)
class PsdEstimate:
    """One-sided PSD per channel: frequencies in Hz, power in uV^2/Hz."""

    frequencies: np.ndarray
    power: np.ndarray
    config: WelchConfig
    channels: tuple[ChannelInfo, ...] = ()

    @property
    def df(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.channels)


@dataclass(frozen=True)
class BarSeries:
    """Beta/alpha ratio per protocol epoch, with the session's baseline."""

    points: tuple[tuple[float, float], ...]
    protocol: SessionProtocol
    baseline: float = math.nan

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(t), float(r)) for t, r in self.points))
        times = [t for t, _ in self.points]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidConfig("series times must be strictly increasing")
        if any(r <= 0 or not math.isfinite(r) for _, r in self.points):
            raise InvalidConfig("ratios must be finite and > 0")

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.points)

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(r for _, r in self.points)


def taper_window(taper: str, m: int) -> np.ndarray:
    """Periodic taper of length m: w(n) for n = 0..m-1 over a full period."""
    if m < 1:
        raise EmptySegment(f"taper length must be >= 1, got {m}")
    if taper == "rectangular":
        return np.ones(m)
    n = np.arange(m)
    if taper == "hamming":
        return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / m)
    if taper == "hann":
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * n / m)
    raise InvalidConfig(f"taper must be one of {TAPERS}, got {taper!r}")


def window_power_norm(taper: str, m: int) -> float:
    """Mean squared taper value U = (1/M) sum |w(n)|^2."""
    w = taper_window(taper, m)
    return float(np.mean(w * w))


def periodogram_segment(
    segment: np.ndarray,
    taper: str,
    u: float,
    fft_size: int,
    sampling_rate: float,
) -> np.ndarray:
    """One-sided modified periodogram of a single segment.

    |DFT(x * w)|^2 / (M * U), doubled on interior bins, scaled by the
    sampling rate to a density. The result has fft_size//2 + 1 bins.
    """
    x = np.asarray(segment, dtype=np.float64)
    m = x.shape[-1]
    if m < 1:
        raise EmptySegment("empty segment")
    if u <= 0:
        raise InvalidConfig(f"window power norm must be > 0, got {u}")
    if fft_size < m:
        raise InvalidConfig(f"fft_size {fft_size} < segment length {m}")
    w = taper_window(taper, m)
    spec = np.fft.rfft(x * w, n=fft_size)
    p = (spec.real**2 + spec.imag**2) / (m * u * sampling_rate)
    if fft_size % 2 == 0:
        p[..., 1:-1] *= 2.0
    else:
        p[..., 1:] *= 2.0
    return p


def welch_psd(epoch: Epoch, config: WelchConfig = WelchConfig()) -> PsdEstimate:
    """Averaged modified periodogram over the epoch's overlapped segments."""
    fs = epoch.sampling_rate
    win, m, hop = config.segment_plan(fs)
    if epoch.n_samples < win:
        raise SegmentTooLong(
            f"epoch has {epoch.n_samples} samples but the configured window "
            f"needs {win}"
        )
    nfft = config.fft_size if config.fft_size is not None else m
    u = window_power_norm(config.taper, m)
    acc = None
    for d in range(config.segment_count):
        seg = epoch.samples[:, d * hop : d * hop + m]
        p = periodogram_segment(seg, config.taper, u, nfft, fs)
        acc = p if acc is None else acc + p
    power = acc / config.segment_count
    freqs = np.fft.rfftfreq(nfft, d=1.0 / fs)
    freqs.flags.writeable = False
    power.flags.writeable = False
    return PsdEstimate(frequencies=freqs, power=power, config=config, channels=epoch.channels)


def _band_slice(psd: PsdEstimate, band: BandDefinition) -> tuple[np.ndarray, np.ndarray]:
    f = psd.frequencies
    lo, hi = band.f_low, band.f_high
    if lo < f[0] or hi > f[-1] * (1.0 + 1e-12):
        raise BandOutOfRange(
            f"band {band.name!r} [{lo}, {hi}] outside spectrum [{f[0]}, {f[-1]}]"
        )
    inner = f[(f > lo) & (f < hi)]
    xs = np.concatenate(([lo], inner, [min(hi, f[-1])]))
    return xs, f


def _trapezoid(ys: np.ndarray, xs: np.ndarray) -> float:
    return float(np.sum((ys[1:] + ys[:-1]) * np.diff(xs)) * 0.5)


def band_power_per_channel(psd: PsdEstimate, band: BandDefinition) -> np.ndarray:
    """Trapezoidal band-power integral per channel, in uV^2.

    Band edges off the grid are handled by linear interpolation of the
    density at the exact edge frequencies.
    """
    xs, f = _band_slice(psd, band)
    out = np.empty(psd.power.shape[0])
    for i, row in enumerate(psd.power):
        ys = np.interp(xs, f, row)
        out[i] = _trapezoid(ys, xs)
    return out


def _select_rows(psd: PsdEstimate, channels) -> list[int]:
    if channels is not None:
        wanted = list(channels)
        labels = list(psd.labels)
        missing = [c for c in wanted if c not in labels]
        if missing:
            raise BandOutOfRange(f"channels not in spectrum: {missing}")
        return [labels.index(c) for c in wanted]
    if psd.channels:
        rows = [i for i, c in enumerate(psd.channels) if c.kind == "eeg"]
        if rows:
            return rows
    return list(range(psd.power.shape[0]))


def band_power(psd: PsdEstimate, band: BandDefinition, channels=None) -> float:
    """Band power averaged over the selected channels (default: all EEG)."""
    per = band_power_per_channel(psd, band)
    rows = _select_rows(psd, channels)
    return float(np.mean(per[rows]))


def band_ratio(
    psd: PsdEstimate,
    numerator: BandDefinition,
    denominator: BandDefinition,
    channels=None,
) -> float:
    """band_power(numerator) / band_power(denominator)."""
    den = band_power(psd, denominator, channels)
    if den <= 0:
        raise ZeroDenominatorPower(
            f"denominator band {denominator.name!r} has power {den}"
        )
    return band_power(psd, numerator, channels) / den


def relative_increase(current: float, baseline: float) -> float:
    """Fractional change of the ratio against baseline: (c - b) / c."""
    if not (current > 0):
        raise NonPositiveCurrent(f"current ratio must be > 0, got {current}")
    return (current - baseline) / current


def bar_timeseries(
    recording: Recording,
    protocol: SessionProtocol,
    welch_config: WelchConfig = WelchConfig(),
    numerator: BandDefinition | None = None,
    denominator: BandDefinition | None = None,
    baseline: float = math.nan,
    channels=None,
) -> BarSeries:
    """One band ratio per protocol epoch time.

    Defaults to beta over alpha. baseline is carried, not computed: pass
    the value measured from the baseline-phase recording.
    """
    from .core import DEFAULT_BANDS

    num = numerator if numerator is not None else DEFAULT_BANDS["beta"]
    den = denominator if denominator is not None else DEFAULT_BANDS["alpha"]
    epochs = slice_epochs(recording, protocol, welch_config.window_len)
    points = []
    for ep in epochs:
        psd = welch_psd(ep, welch_config)
        points.append((ep.t_start, band_ratio(psd, num, den, channels)))
    return BarSeries(points=tuple(points), protocol=protocol, baseline=baseline)


def bar_series_to_csv(series: BarSeries, include_increase: bool = False) -> str:
    """CSV of the series; optionally adds baseline and relative_increase."""
    cols = ["time_s", "bar"]
    if include_increase:
        cols += ["baseline", "relative_increase"]
    cols += ["phase", "game_type", "gamer_type", "music_type"]
    out = io.StringIO()
    out.write(",".join(cols) + "\n")
    p = series.protocol
    for t, r in series.points:
        fields = [repr(float(t)), repr(float(r))]
        if include_increase:
            fields += [
                repr(float(series.baseline)),
                repr(relative_increase(r, series.baseline)),
            ]
        fields += [p.phase, p.game_type, p.gamer_type, p.music_type]
        out.write(",".join(fields) + "\n")
    return out.getvalue()
