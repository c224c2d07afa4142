"""Synthetic drive generator: routes, rule-based driving, and recordings.

The generator produces ground-truth data for end-to-end testing of the
classification pipeline:

1. :func:`generate_route` lays out a route on a fixed point grid with
   speed limits drawn from a per-kind palette, traffic lights, signs,
   toll booths, slope, and curvature.
2. :func:`simulate_rule_based_driver` integrates a driver who targets
   ``compliance * limit``, respects curvature and upslope, brakes with
   square-root anticipation ahead of stops (red lights, toll booths,
   route end), and accelerates within comfort bounds.
3. :func:`humanize` adds seeded human-style perturbations (fast jitter,
   overshoot episodes, slow compliance drift), everything proportional
   to ``noise_amplitude`` so amplitude 0 is an exact identity.
4. :func:`emit_recording` integrates the speed profile back to positions
   and samples the route's context channels into a recording.

Everything is deterministic in (inputs, seed).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .domain import RoadCondition, Route, RoutePoint, Weather
from .ingestion import RecordingMatrix, write_recording

MAX_LIGHT_INDEX = 6  # cap of the traffic-light channel
LIGHT_WINDOW_M = 250.0  # half-width of the light-counting window
LATERAL_ACCEL = 2.5  # m/s^2 comfort bound that caps speed in curves
UPHILL_PENALTY = 1.5  # target-speed fraction lost per unit upslope
MIN_SLOPE_FACTOR = 0.3  # upslope can cost at most 70% of target speed
SPEED_CAP_KMH = 160.0  # recordings never exceed this speed

_KIND_DEFAULTS: dict[str, dict[str, object]] = {
    "urban": dict(
        palette=(30, 50, 70), segment_mean_m=700.0, lights_per_km=1.2,
        signs_per_km=1.2, tolls_per_km=0.0, slope_amplitude=0.02,
        curvature_amplitude=0.008,
    ),
    "highway": dict(
        palette=(100, 110, 120, 130), segment_mean_m=4000.0, lights_per_km=0.0,
        signs_per_km=0.25, tolls_per_km=0.04, slope_amplitude=0.015,
        curvature_amplitude=0.0015,
    ),
    "mountain": dict(
        palette=(30, 50, 70, 90), segment_mean_m=1500.0, lights_per_km=0.1,
        signs_per_km=0.6, tolls_per_km=0.0, slope_amplitude=0.08,
        curvature_amplitude=0.02,
    ),
}

_ROAD_CONDITION = {
    "urban": RoadCondition.URBAN,
    "highway": RoadCondition.HIGHWAY,
    "mountain": RoadCondition.MOUNTAIN,
}


@dataclass(frozen=True)
class RouteProfile:
    """Parameters of a route family.

    ``kind`` selects the defaults ("urban", "highway", "mountain", or
    "mixed", which strings 2-4 km stretches of the three base kinds
    together); any explicitly set field overrides the kind default for
    the whole route.
    """

    kind: str = "mixed"
    length_m: float = 10000.0
    point_spacing_m: float = 10.0
    speed_limit_palette: tuple[int, ...] | None = None
    segment_mean_m: float | None = None
    lights_per_km: float | None = None
    signs_per_km: float | None = None
    tolls_per_km: float | None = None
    slope_amplitude: float | None = None
    curvature_amplitude: float | None = None

    def __post_init__(self) -> None:
        valid = (*_KIND_DEFAULTS, "mixed")
        if self.kind not in valid:
            raise ValueError(f"unknown route kind {self.kind!r}; valid: {', '.join(valid)}")
        if self.point_spacing_m <= 0:
            raise ValueError("point_spacing_m must be positive")
        if self.length_m < 20 * self.point_spacing_m:
            raise ValueError("route length must cover at least 20 grid points")

    def settings_for(self, kind: str) -> dict[str, object]:
        """Kind defaults overlaid with this profile's explicit overrides."""
        settings = dict(_KIND_DEFAULTS[kind])
        overrides = {
            "palette": self.speed_limit_palette,
            "segment_mean_m": self.segment_mean_m,
            "lights_per_km": self.lights_per_km,
            "signs_per_km": self.signs_per_km,
            "tolls_per_km": self.tolls_per_km,
            "slope_amplitude": self.slope_amplitude,
            "curvature_amplitude": self.curvature_amplitude,
        }
        for key, value in overrides.items():
            if value is not None:
                settings[key] = value
        return settings


@dataclass(frozen=True)
class DriverParams:
    """Behavioural parameters of the simulated driver.

    ``compliance`` is the targeted fraction of the posted limit (values
    above 1 model habitual speeding), ``reaction_lag`` delays responses
    to *rising* speed allowances by whole samples (braking is never
    delayed), and ``noise_amplitude`` (km/h) scales every perturbation
    :func:`humanize` applies.
    """

    compliance: float = 0.95
    reaction_lag: int = 1
    comfort_accel: float = 1.5
    comfort_decel: float = 2.0
    noise_amplitude: float = 3.0
    stop_probability: float = 0.4

    def __post_init__(self) -> None:
        if not 0.0 < self.compliance <= 1.3:
            raise ValueError("compliance must be in (0, 1.3]")
        if self.reaction_lag < 0:
            raise ValueError("reaction_lag must be non-negative")
        if self.comfort_accel <= 0 or self.comfort_decel <= 0:
            raise ValueError("comfort accelerations must be positive")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be non-negative")
        if not 0.0 <= self.stop_probability <= 1.0:
            raise ValueError("stop_probability must be in [0, 1]")


def _sinusoid_mixture(distance: np.ndarray, wavelengths, weights, phases) -> np.ndarray:
    out = np.zeros_like(distance)
    for lam, a, phi in zip(wavelengths, weights, phases):
        out += a * np.sin(2.0 * np.pi * distance / lam + phi)
    return out


def generate_route(profile: RouteProfile, seed: int) -> Route:
    """Lay out a route on a fixed grid, deterministically in the seed."""
    rng = np.random.default_rng(seed)
    spacing = profile.point_spacing_m
    length = float(profile.length_m)
    n_grid = int(math.floor(length / spacing))
    distance = np.arange(n_grid + 1) * spacing
    if distance[-1] < length:
        distance = np.append(distance, length)
    n_points = distance.shape[0]

    # chunks: (start_m, end_m, settings); "mixed" strings base kinds together
    chunks: list[tuple[float, float, dict[str, object], str]] = []
    if profile.kind == "mixed":
        pos = 0.0
        while pos < length:
            kind = str(rng.choice(("urban", "highway", "mountain")))
            end = min(pos + float(rng.uniform(2000.0, 4000.0)), length)
            chunks.append((pos, end, profile.settings_for(kind), kind))
            pos = end
    else:
        chunks.append((0.0, length, profile.settings_for(profile.kind), profile.kind))

    limit = np.empty(n_points)
    slope_amp = np.empty(n_points)
    curv_amp = np.empty(n_points)
    light_positions: list[float] = []
    sign_positions: list[float] = []
    toll_positions: list[float] = []

    for start, end, settings, _kind in chunks:
        in_chunk = (distance >= start) & (distance < end)
        if end == length:
            in_chunk |= distance == length
        palette = tuple(settings["palette"])
        seg_mean = float(settings["segment_mean_m"])

        # speed-limit segments of exponential length; a sign marks each change
        pos = start
        while pos < end:
            seg_len = max(float(rng.exponential(seg_mean)), 5 * spacing)
            seg_end = min(pos + seg_len, end)
            seg_mask = in_chunk & (distance >= pos) & (distance < seg_end)
            if seg_end == length:
                seg_mask |= distance == length
            limit[seg_mask] = float(rng.choice(palette))
            if pos > 0.0:
                sign_positions.append(pos)
            pos = seg_end

        chunk_km = (end - start) / 1000.0
        for positions, density_key in (
            (light_positions, "lights_per_km"),
            (sign_positions, "signs_per_km"),
            (toll_positions, "tolls_per_km"),
        ):
            count = int(rng.poisson(float(settings[density_key]) * chunk_km))
            positions.extend(float(p) for p in rng.uniform(start, end, size=count))

        slope_amp[in_chunk] = float(settings["slope_amplitude"])
        curv_amp[in_chunk] = float(settings["curvature_amplitude"])

    slope_base = _sinusoid_mixture(
        distance, (1700.0, 3900.0, 8300.0), (0.5, 0.3, 0.2),
        rng.uniform(0.0, 2.0 * np.pi, size=3),
    )
    slope = slope_amp * slope_base
    curv_base = _sinusoid_mixture(
        distance, (450.0, 1100.0, 2600.0), (0.6, 0.3, 0.1),
        rng.uniform(0.0, 2.0 * np.pi, size=3),
    )
    curvature = curv_amp * curv_base**2

    lights = np.sort(np.asarray(light_positions))
    signs = np.sort(np.asarray(sign_positions))
    tolls = np.sort(np.asarray(toll_positions))

    light_index = (
        np.searchsorted(lights, distance + LIGHT_WINDOW_M, side="right")
        - np.searchsorted(lights, distance - LIGHT_WINDOW_M, side="left")
    )
    light_index = np.minimum(light_index, MAX_LIGHT_INDEX)
    sign_index = np.searchsorted(signs, distance, side="right")
    toll_here = (
        np.searchsorted(tolls, distance + spacing, side="left")
        - np.searchsorted(tolls, distance, side="left")
    ) > 0

    weather = Weather(
        str(rng.choice(("Clear", "Wind", "Slipperiness"), p=(0.7, 0.2, 0.1)))
    )
    km_per_kind: dict[str, float] = {}
    for start, end, _settings, kind in chunks:
        km_per_kind[kind] = km_per_kind.get(kind, 0.0) + (end - start)
    dominant = max(km_per_kind, key=lambda k: km_per_kind[k])

    samples = tuple(
        RoutePoint(
            distance=float(distance[i]),
            speed_limit=float(limit[i]),
            slope=float(slope[i]),
            curvature=float(curvature[i]),
            traffic_light_index=int(light_index[i]),
            traffic_sign_index=int(sign_index[i]),
            toll_booth=bool(toll_here[i]),
        )
        for i in range(n_points)
    )
    return Route(
        length=float(distance[-1]),
        samples=samples,
        weather=weather,
        road_condition=_ROAD_CONDITION[dominant],
    )


@dataclass(frozen=True)
class _Stop:
    position: float
    cell: int
    dwell_samples: int


def _route_arrays(route: Route) -> tuple[np.ndarray, ...]:
    pts = route.samples
    distance = np.asarray([p.distance for p in pts])
    limit = np.asarray([p.speed_limit for p in pts])
    slope = np.asarray([p.slope for p in pts])
    curvature = np.asarray([p.curvature for p in pts])
    light_index = np.asarray([p.traffic_light_index for p in pts])
    toll = np.asarray([p.toll_booth for p in pts])
    return distance, limit, slope, curvature, light_index, toll


def _cell_targets(route: Route, params: DriverParams) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell free-flow target speed (m/s): compliance times limit,
    capped by curvature comfort and penalized on upslopes."""
    distance, limit, slope, curvature, _lights, _toll = _route_arrays(route)
    target = params.compliance * limit / 3.6
    curve_cap = np.sqrt(LATERAL_ACCEL / np.maximum(curvature, 1e-9))
    target = np.minimum(target, curve_cap)
    factor = np.maximum(1.0 - UPHILL_PENALTY * np.maximum(slope, 0.0), MIN_SLOPE_FACTOR)
    target = target * factor
    return distance, target[:-1]  # cell i spans [distance[i], distance[i+1])


def _braking_envelope(
    target: np.ndarray, cell_width: np.ndarray, stop_cells: Sequence[int], decel: float
) -> np.ndarray:
    """Backward square-root pass: the highest speed per cell from which
    every downstream stop (and the route end) stays reachable at comfort
    deceleration."""
    envelope = target.copy()
    envelope[-1] = 0.0  # come to rest at the route end
    for cell in stop_cells:
        envelope[cell] = 0.0
    allow_next = 0.0
    for i in range(envelope.shape[0] - 1, -1, -1):
        feasible = math.sqrt(allow_next * allow_next + 2.0 * decel * cell_width[i])
        if envelope[i] > feasible:
            envelope[i] = feasible
        allow_next = envelope[i]
    return envelope


def _plan_stops(
    route: Route, params: DriverParams, rng: np.random.Generator, sample_rate: float
) -> deque[_Stop]:
    """Red-light and toll-booth stops in travel order, seeded.

    A rise of the traffic-light channel means a light entered the
    look-ahead window, so the light itself sits ``LIGHT_WINDOW_M`` ahead;
    each is red with ``stop_probability``.  Toll booths always stop.
    """
    distance, _limit, _slope, _curv, light_index, toll = _route_arrays(route)
    n_cells = distance.shape[0] - 1
    stops: list[_Stop] = []

    rises = np.diff(light_index, prepend=0)
    for p in np.nonzero(rises > 0)[0]:
        for _ in range(int(rises[p])):
            stop_here = rng.random() < params.stop_probability
            dwell = float(rng.uniform(5.0, 30.0))
            position = distance[p] + LIGHT_WINDOW_M
            if not stop_here or position >= route.length - 20.0:
                continue
            cell = int(np.searchsorted(distance, position, side="right") - 1)
            stops.append(
                _Stop(position, min(cell, n_cells - 1), max(1, round(dwell * sample_rate)))
            )

    for p in np.nonzero(toll[:-1])[0]:
        dwell = float(rng.uniform(4.0, 12.0))
        position = distance[p] + 0.5 * (distance[p + 1] - distance[p])
        if position >= route.length - 20.0:
            continue
        stops.append(_Stop(position, int(p), max(1, round(dwell * sample_rate))))

    stops.sort(key=lambda s: s.position)
    return deque(stops)


def simulate_rule_based_driver(
    route: Route,
    params: DriverParams,
    seed: int,
    sample_rate: float = 1.0,
) -> np.ndarray:
    """Integrate the rule-following driver along the route.

    Returns the speed profile in km/h, one value per sample at
    ``sample_rate`` Hz, from standstill at the start to standstill at the
    route end.  All stochastic choices (which lights are red, dwell
    durations) come from ``seed``.
    """
    if not 1.0 <= sample_rate <= 10.0:
        raise ValueError("sample_rate must be in [1, 10] Hz")
    rng = np.random.default_rng(seed)
    distance, target = _cell_targets(route, params)
    cell_width = np.diff(distance)
    n_cells = target.shape[0]
    dt = 1.0 / sample_rate

    pending = _plan_stops(route, params, rng, sample_rate)
    envelope = _braking_envelope(
        target, cell_width, [s.cell for s in pending], params.comfort_decel
    )

    speeds: list[float] = []
    lag_buffer: deque[float] = deque(maxlen=params.reaction_lag + 1)
    v = 0.0
    pos = 0.0
    max_steps = 60 * n_cells + 200_000

    for _ in range(max_steps):
        cell = min(int(np.searchsorted(distance, pos, side="right")) - 1, n_cells - 1)
        cell = max(cell, 0)
        # look at every cell the next step can touch so braking starts early
        reach = min(
            int(np.searchsorted(distance, pos + v * dt, side="right")) - 1, n_cells - 1
        )
        allowed = float(envelope[cell : max(reach, cell) + 1].min())
        lag_buffer.append(allowed)
        desired = min(lag_buffer)  # rising allowances take effect late

        dv = min(max(desired - v, -params.comfort_decel * dt), params.comfort_accel * dt)
        v = max(v + dv, 0.0)
        pos = min(pos + v * dt, route.length)
        speeds.append(v * 3.6)

        if v <= 1e-12:
            cell = min(int(np.searchsorted(distance, pos, side="right")) - 1, n_cells - 1)
            if pending and pending[0].cell == cell:
                stop = pending.popleft()
                speeds.extend([0.0] * stop.dwell_samples)
                envelope = _braking_envelope(
                    target, cell_width, [s.cell for s in pending], params.comfort_decel
                )
                lag_buffer.clear()
            elif cell >= n_cells - 1:
                break  # at rest in the final cell: arrived
    else:
        raise RuntimeError("simulation failed to reach the route end")

    return np.asarray(speeds)


def humanize(profile_kmh: np.ndarray, params: DriverParams, seed: int) -> np.ndarray:
    """Overlay human-style imperfection on a rule-based speed profile.

    Adds seeded fast jitter, occasional overshoot/hesitation episodes,
    and a slow compliance drift proportional to current speed.  Every
    term scales with ``params.noise_amplitude``: amplitude 0 returns an
    exact copy.  Perturbations fade out below 15 km/h (a standing car
    stays standing) and the result is clipped to [0, 160] km/h.
    """
    v = np.asarray(profile_kmh, dtype=np.float64).copy()
    amp = params.noise_amplitude
    if amp == 0.0:
        return v
    n = v.shape[0]
    rng = np.random.default_rng(seed)

    def ar1(rho: float) -> np.ndarray:
        shocks = rng.standard_normal(n)
        out = np.empty(n)
        out[0] = shocks[0]
        scale = math.sqrt(1.0 - rho * rho)
        for i in range(1, n):
            out[i] = rho * out[i - 1] + scale * shocks[i]
        return out

    fast = ar1(0.95)
    slow = ar1(0.999)

    episodes = np.zeros(n)
    for _ in range(int(rng.poisson(n / 900.0))):
        start = int(rng.integers(0, n))
        duration = int(rng.integers(20, 90))
        magnitude = float(rng.uniform(-1.2, 1.2))
        stop = min(start + duration, n)
        episodes[start:stop] += magnitude * np.hanning(duration)[: stop - start]

    gate = np.clip(v / 15.0, 0.0, 1.0)
    perturbation = 0.8 * fast + episodes + 0.006 * slow * v
    return np.clip(v + amp * gate * perturbation, 0.0, SPEED_CAP_KMH)


def integrate_positions(profile_kmh: np.ndarray, sample_rate: float) -> np.ndarray:
    """Distance travelled by the end of each sample, in meters."""
    return np.cumsum(np.asarray(profile_kmh) / 3.6) / sample_rate


def emit_recording(
    route: Route,
    profile_kmh: np.ndarray,
    sample_rate: float,
    seed: int,
    path=None,
) -> RecordingMatrix:
    """Sample the route's context channels along a driven speed profile.

    Produces a recording with the time channel, the raw speed, and the
    seven context channels (limit, traffic flow, lights, signs, toll,
    curvature, slope).  Traffic flow is the posted limit scaled by a
    seeded per-segment congestion factor in [0.55, 1].  When ``path`` is
    given the recording is also written there as CSV.
    """
    if not 1.0 <= sample_rate <= 10.0:
        raise ValueError("sample_rate must be in [1, 10] Hz")
    v = np.asarray(profile_kmh, dtype=np.float64)
    n = v.shape[0]
    rng = np.random.default_rng(seed)

    pts = route.samples
    distance = np.asarray([p.distance for p in pts])
    limit = np.asarray([p.speed_limit for p in pts])
    slope = np.asarray([p.slope for p in pts])
    curvature = np.asarray([p.curvature for p in pts])
    light_index = np.asarray([p.traffic_light_index for p in pts], dtype=np.float64)
    sign_index = np.asarray([p.traffic_sign_index for p in pts], dtype=np.float64)
    toll = np.asarray([p.toll_booth for p in pts], dtype=np.float64)

    # constant-limit runs share one congestion factor
    run_id = np.zeros(distance.shape[0], dtype=np.int64)
    run_id[1:] = np.cumsum(limit[1:] != limit[:-1])
    factors = rng.uniform(0.55, 1.0, size=int(run_id[-1]) + 1)

    pos = integrate_positions(v, sample_rate)
    cell = np.clip(
        np.searchsorted(distance, pos, side="right") - 1, 0, distance.shape[0] - 1
    )
    t = np.arange(n) / sample_rate

    values = np.vstack(
        [
            t,
            v,
            limit[cell],
            limit[cell] * factors[run_id[cell]],
            light_index[cell],
            sign_index[cell],
            toll[cell],
            curvature[cell],
            slope[cell],
        ]
    )
    recording = RecordingMatrix(
        values=values,
        channel_ids=(2, 9, 16, 17, 18, 19, 22, 23, 26),
        sample_rate=float(sample_rate),
    )
    if path is not None:
        write_recording(recording, path)
    return recording


# ---------------------------------------------------------------------------
# the stock benchmark


#: (kind, length_m, driver) of the stock benchmark drives.  Compliances are
#: spread so that sustained speeds populate all fifteen 10 km/h classes,
#: including one habitual speeder sustaining 140+ km/h on 130 segments.
BENCHMARK_DRIVES: tuple[tuple[str, float, DriverParams], ...] = (
    ("highway", 95_000.0, DriverParams(compliance=1.12, noise_amplitude=2.5)),
    ("urban", 26_000.0, DriverParams(compliance=0.93, noise_amplitude=3.0)),
    ("mixed", 62_000.0, DriverParams(compliance=0.97, noise_amplitude=3.0)),
    ("mountain", 45_000.0, DriverParams(compliance=0.90, noise_amplitude=3.0)),
    ("highway", 88_000.0, DriverParams(compliance=1.02, noise_amplitude=2.0)),
    ("urban", 22_000.0, DriverParams(compliance=0.87, noise_amplitude=3.5)),
)


def make_benchmark(
    seed: int,
    drives: Sequence[tuple[str, float, DriverParams]] = BENCHMARK_DRIVES,
    sample_rate: float = 1.0,
) -> list[RecordingMatrix]:
    """Generate the stock multi-route benchmark (about 20k samples at 1 Hz).

    Each drive gets independent sub-seeds for route layout, stop
    decisions, humanization, and congestion, all derived from ``seed``.
    """
    sub_seeds = np.random.default_rng(seed).integers(0, 2**63, size=(len(drives), 4))
    recordings = []
    for i, (kind, length_m, driver) in enumerate(drives):
        route = generate_route(
            RouteProfile(kind=kind, length_m=length_m), int(sub_seeds[i, 0])
        )
        rule = simulate_rule_based_driver(route, driver, int(sub_seeds[i, 1]), sample_rate)
        recorded = humanize(rule, driver, int(sub_seeds[i, 2]))
        recordings.append(emit_recording(route, recorded, sample_rate, int(sub_seeds[i, 3])))
    return recordings
