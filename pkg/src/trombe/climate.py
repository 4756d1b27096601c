"""Hourly climate series: CSV ingestion, synthesis and interpolation.

The CSV schema is fixed:

    time_s,q_s_wm2,t_ambient_c

with a mandatory header, comma separator, ``.`` decimal point and UTF-8
encoding.  ``q_s_wm2`` is the total insolation on the vertical glazed
face (the solver multiplies it by the absorptance-transmittance product);
``t_ambient_c`` is read in Celsius and converted to kelvin at ingestion.
All in-memory temperatures are kelvin.

Synthetic climates use a half-sine insolation between sunrise and sunset
and a sinusoidal ambient temperature whose peak lags solar noon, which is
enough to exercise the solver with a plausible winter day; the bundled
"february" preset is a synthetic stand-in, not measured data.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass

CELSIUS_OFFSET = 273.15
CSV_HEADER = ("time_s", "q_s_wm2", "t_ambient_c")


class ClimateFormatError(ValueError):
    """Malformed climate input; messages carry file and line context."""


@dataclass(frozen=True)
class ClimateSample:
    """One climate record: seconds since scenario start, insolation on the
    vertical face [W/m^2], ambient temperature [K]."""

    time: float
    insolation: float
    ambient: float

    def __post_init__(self) -> None:
        if self.insolation < 0.0:
            raise ValueError(f"insolation must be >= 0, got {self.insolation!r}")
        if not self.ambient > 0.0:
            raise ValueError(f"ambient must be a positive kelvin value, got {self.ambient!r}")


@dataclass(frozen=True)
class ClimateSeries:
    """Time-ordered climate samples with a nominal cadence [s]."""

    samples: tuple[ClimateSample, ...]
    cadence: float

    def __post_init__(self) -> None:
        if len(self.samples) < 2:
            raise ValueError("a climate series needs at least two samples")
        if not self.cadence > 0.0:
            raise ValueError(f"cadence must be positive, got {self.cadence!r}")
        previous = self.samples[0].time
        for sample in self.samples[1:]:
            gap = sample.time - previous
            if gap <= 0.0:
                raise ValueError(
                    f"timestamps must increase strictly, got {sample.time!r} "
                    f"after {previous!r}"
                )
            if gap > self.cadence * (1.0 + 1e-9):
                raise ValueError(
                    f"gap of {gap!r} s between samples exceeds cadence "
                    f"{self.cadence!r} s"
                )
            previous = sample.time
        object.__setattr__(self, "_times", tuple(s.time for s in self.samples))

    @classmethod
    def from_samples(cls, samples) -> "ClimateSeries":
        samples = tuple(samples)
        cadence = max(
            b.time - a.time for a, b in zip(samples, samples[1:])
        ) if len(samples) > 1 else 0.0
        return cls(samples=samples, cadence=cadence)

    @property
    def start(self) -> float:
        return self.samples[0].time

    @property
    def duration(self) -> float:
        return self.samples[-1].time - self.samples[0].time

    def at(self, time: float) -> ClimateSample:
        """Linear interpolation; exact at sample points, bounded between
        neighbours, refused outside the covered interval."""
        times = self._times
        if time < times[0] or time > times[-1]:
            raise ValueError(
                f"time {time!r} outside climate coverage "
                f"[{times[0]!r}, {times[-1]!r}]"
            )
        i = bisect_right(times, time)
        if i == len(times):
            return self.samples[-1]
        lo = self.samples[i - 1]
        hi = self.samples[i]
        if time == lo.time:
            return lo
        w = (time - lo.time) / (hi.time - lo.time)
        return ClimateSample(
            time=time,
            insolation=lo.insolation + w * (hi.insolation - lo.insolation),
            ambient=lo.ambient + w * (hi.ambient - lo.ambient),
        )


def load_climate_csv(path) -> ClimateSeries:
    """Read and validate a climate CSV file.

    Raises
    ------
    ClimateFormatError
        On a missing or wrong header, a malformed row, non-increasing
        timestamps or negative insolation; messages name the line.
    """
    samples: list[ClimateSample] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ClimateFormatError(f"{path}:1: empty file, expected header "
                                     f"{','.join(CSV_HEADER)}") from None
        if tuple(cell.strip() for cell in header) != CSV_HEADER:
            raise ClimateFormatError(
                f"{path}:1: expected header {','.join(CSV_HEADER)}, "
                f"got {','.join(header)!r}"
            )
        previous_time = None
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ClimateFormatError(f"{path}:{line}: expected 3 fields, got {len(row)}")
            try:
                time = float(row[0])
                insolation = float(row[1])
                ambient_c = float(row[2])
            except ValueError:
                raise ClimateFormatError(
                    f"{path}:{line}: non-numeric value in {row!r}"
                ) from None
            if insolation < 0.0:
                raise ClimateFormatError(
                    f"{path}:{line}: negative insolation {insolation!r}"
                )
            if previous_time is not None and time <= previous_time:
                raise ClimateFormatError(
                    f"{path}:{line}: timestamp {time!r} not after {previous_time!r}"
                )
            ambient = ambient_c + CELSIUS_OFFSET
            if not ambient > 0.0:
                raise ClimateFormatError(
                    f"{path}:{line}: ambient {ambient_c!r} C below absolute zero"
                )
            samples.append(ClimateSample(time=time, insolation=insolation, ambient=ambient))
            previous_time = time
    if len(samples) < 2:
        raise ClimateFormatError(f"{path}: need at least two data rows")
    return ClimateSeries.from_samples(samples)


def write_climate_csv(series: ClimateSeries, path) -> None:
    """Write a series back to the CSV schema (Celsius on disk)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for sample in series.samples:
            writer.writerow([
                format(sample.time, "g"),
                format(sample.insolation, ".10g"),
                format(sample.ambient - CELSIUS_OFFSET, ".10g"),
            ])


def synthesize_climate(
    days: int,
    peak_insolation: float,
    sunrise_hour: float,
    sunset_hour: float,
    t_mean: float,
    t_swing: float,
    cadence: float = 3600.0,
    temperature_lag_hours: float = 2.0,
) -> ClimateSeries:
    """Generate a repeating synthetic day at the given cadence.

    Insolation is a half-sine between sunrise and sunset peaking at
    ``peak_insolation`` and zero at night; its daily integral is
    2/pi * peak * daylight seconds.  Ambient temperature is sinusoidal
    with mean ``t_mean`` [K] and peak-to-peak swing ``t_swing`` [K],
    peaking ``temperature_lag_hours`` after solar noon.  ``days`` full
    days are emitted at ``cadence``, starting at t = 0 (so one day at
    hourly cadence yields 24 samples).
    """
    if days < 1:
        raise ValueError(f"days must be >= 1, got {days}")
    if peak_insolation < 0.0:
        raise ValueError(f"peak_insolation must be >= 0, got {peak_insolation!r}")
    if not sunset_hour > sunrise_hour:
        raise ValueError("sunset_hour must be after sunrise_hour")
    if not t_mean > 0.0:
        raise ValueError(f"t_mean must be a positive kelvin value, got {t_mean!r}")
    if t_swing < 0.0:
        raise ValueError(f"t_swing must be >= 0, got {t_swing!r}")

    noon = 0.5 * (sunrise_hour + sunset_hour)
    peak_hour = noon + temperature_lag_hours
    daylight = sunset_hour - sunrise_hour
    n_samples = int(round(days * 86400.0 / cadence))
    samples = []
    for k in range(n_samples):
        time = k * cadence
        hour = (time / 3600.0) % 24.0
        if sunrise_hour <= hour <= sunset_hour:
            insolation = peak_insolation * math.sin(
                math.pi * (hour - sunrise_hour) / daylight
            )
        else:
            insolation = 0.0
        ambient = t_mean + 0.5 * t_swing * math.cos(
            2.0 * math.pi * (hour - peak_hour) / 24.0
        )
        samples.append(ClimateSample(time=time, insolation=max(insolation, 0.0),
                                     ambient=ambient))
    return ClimateSeries(samples=tuple(samples), cadence=cadence)


def february_preset(days: int, cadence: float = 3600.0) -> ClimateSeries:
    """Synthetic February-like winter days (clear, cold, 10 h of sun).

    Peak insolation 600 W/m^2 on the vertical face, sunrise 07:00, sunset
    17:00, daily mean 1 C with an 8 K peak-to-peak swing.  A stand-in for
    mid-European winter weather, not a measured record.
    """
    return synthesize_climate(
        days=days,
        peak_insolation=600.0,
        sunrise_hour=7.0,
        sunset_hour=17.0,
        t_mean=274.15,
        t_swing=8.0,
        cadence=cadence,
    )
