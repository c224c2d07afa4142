"""Descriptive data model for driving scenarios.

A :class:`DrivingModel` bundles the three actors of a driving scenario --
driver, vehicle and route -- as plain immutable records.  Behaviour
(training, prediction, simulation) lives elsewhere; these types only
describe.  Every type carries invariants that :func:`validate_driving_model`
checks, and the whole model round-trips through a JSON document via
:func:`serialize_driving_model` / :func:`deserialize_driving_model`.

Document schema (version 1)::

    {
      "version": 1,
      "driver":  {"reaction_speed": s, "target_velocity": km/h,
                  "action": "...", "driving_style": "..."},
      "vehicle": {"size": m, "weight": kg, "engine_type": "...",
                  "acceleration": m/s2, "average_emissions": g/km},
      "route":   {"length": m, "weather": "...", "road_condition": "...",
                  "samples": [{"distance": m, "speed_limit": km/h,
                               "slope": rise/run, "curvature": 1/m,
                               "traffic_light_index": 0..6,
                               "traffic_sign_index": int >= 0,
                               "toll_booth": bool}, ...]}
    }
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .errors import SchemaError

MAX_TRAFFIC_LIGHT_INDEX = 6


class DriverAction(enum.Enum):
    ACCELERATING = "Accelerating"
    DECELERATING = "Decelerating"
    MAINTAINING = "Maintaining"


class DrivingStyle(enum.Enum):
    NORMAL = "Normal"
    ZIGZAG = "Zigzag"
    RISKY_ACCELERATION = "RiskyAcceleration"
    RISKY_LANE_CHANGING = "RiskyLaneChanging"


class EngineType(enum.Enum):
    PETROL = "Petrol"
    DIESEL = "Diesel"
    HYBRID = "Hybrid"
    ELECTRIC = "Electric"


class Weather(enum.Enum):
    SLIPPERINESS = "Slipperiness"
    WIND = "Wind"
    CLEAR = "Clear"


class RoadCondition(enum.Enum):
    HIGHWAY = "Highway"
    URBAN = "Urban"
    MOUNTAIN = "Mountain"


class FeatureKind(enum.Enum):
    RECORDED = "Recorded"
    VOLATILE = "Volatile"  # derived from other features
    METRIC = "Metric"  # measured evaluation quantity


class Algorithm(enum.Enum):
    GRADIENT_BOOSTING = "GradientBoosting"
    DECISION_TREE = "DecisionTree"
    RANDOM_FOREST = "RandomForest"
    LOGISTIC_REGRESSION = "LogisticRegression"
    KNEIGHBORS = "KNNeighbors"
    GAUSSIAN_NB = "GaussianNB"
    LINEAR_SVM = "LinearSVM"
    ADABOOST = "AdaBoost"


@dataclass(frozen=True)
class Driver:
    reaction_speed: float  # seconds to react to an event
    target_velocity: float  # km/h
    action: DriverAction
    driving_style: DrivingStyle


@dataclass(frozen=True)
class Vehicle:
    size: float  # length in meters
    weight: float  # kg
    engine_type: EngineType
    acceleration: float  # m/s^2
    average_emissions: float  # g/km; 0 permitted for electric vehicles


@dataclass(frozen=True)
class RoutePoint:
    distance: float  # meters from route start
    speed_limit: float  # km/h
    slope: float  # dimensionless gradient (rise/run)
    curvature: float  # 1/m
    traffic_light_index: int  # number of nearby traffic lights, 0..6
    traffic_sign_index: int  # running sign index, >= 0
    toll_booth: bool


@dataclass(frozen=True)
class Route:
    length: float  # meters
    samples: tuple[RoutePoint, ...]
    weather: Weather
    road_condition: RoadCondition

    def __post_init__(self):
        # Accept any sequence, store immutably.
        object.__setattr__(self, "samples", tuple(self.samples))


@dataclass(frozen=True)
class DrivingModel:
    driver: Driver
    vehicle: Vehicle
    route: Route


@dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    kind: FeatureKind


@dataclass(frozen=True)
class PredictorDescriptor:
    algorithm: Algorithm
    hyperparameters: dict = field(default_factory=dict)


def validate_driving_model(model: DrivingModel) -> list[str]:
    """Check every invariant of ``model`` and return the violations.

    An empty list means the model is valid.  Each entry names the violated
    constraint with the path of the offending field, e.g.
    ``"Vehicle.weight > 0"`` or
    ``"Route.samples[3].traffic_light_index in [0, 6]"``.  The check never
    raises for structurally well-formed input.
    """
    v: list[str] = []

    if model.driver is None:
        v.append("DrivingModel.driver present")
    else:
        d = model.driver
        if not d.reaction_speed > 0:
            v.append("Driver.reaction_speed > 0")
        if not d.target_velocity >= 0:
            v.append("Driver.target_velocity >= 0")

    if model.vehicle is None:
        v.append("DrivingModel.vehicle present")
    else:
        veh = model.vehicle
        if not veh.size > 0:
            v.append("Vehicle.size > 0")
        if not veh.weight > 0:
            v.append("Vehicle.weight > 0")
        if not veh.acceleration > 0:
            v.append("Vehicle.acceleration > 0")
        if not veh.average_emissions >= 0:
            v.append("Vehicle.average_emissions >= 0")

    if model.route is None:
        v.append("DrivingModel.route present")
        return v

    r = model.route
    if len(r.samples) == 0:
        v.append("Route.samples nonempty")
        return v
    for i, p in enumerate(r.samples):
        at = f"Route.samples[{i}]"
        if i > 0 and not p.distance > r.samples[i - 1].distance:
            v.append(f"{at}.distance strictly increasing")
        if not p.speed_limit > 0:
            v.append(f"{at}.speed_limit > 0")
        if not p.curvature >= 0:
            v.append(f"{at}.curvature >= 0")
        if not 0 <= p.traffic_light_index <= MAX_TRAFFIC_LIGHT_INDEX:
            v.append(f"{at}.traffic_light_index in [0, {MAX_TRAFFIC_LIGHT_INDEX}]")
        if not p.traffic_sign_index >= 0:
            v.append(f"{at}.traffic_sign_index >= 0")
    if r.length != r.samples[-1].distance:
        v.append("Route.length equals last sample distance")
    return v


# ---------------------------------------------------------------------------
# serialization

def _enum_from(value, enum_cls, path):
    valid = [e.value for e in enum_cls]
    if value not in valid:
        raise SchemaError(f"{path}: unknown literal {value!r}; valid literals: {valid}")
    return enum_cls(value)


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise SchemaError(f"{path}: {key} required")
    return doc[key]


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected a number, got {value!r}")
    return float(value)


def serialize_driving_model(model: DrivingModel) -> str:
    """Render ``model`` as a JSON document (UTF-8, human-readable)."""
    doc = {
        "version": 1,
        "driver": {
            "reaction_speed": model.driver.reaction_speed,
            "target_velocity": model.driver.target_velocity,
            "action": model.driver.action.value,
            "driving_style": model.driver.driving_style.value,
        },
        "vehicle": {
            "size": model.vehicle.size,
            "weight": model.vehicle.weight,
            "engine_type": model.vehicle.engine_type.value,
            "acceleration": model.vehicle.acceleration,
            "average_emissions": model.vehicle.average_emissions,
        },
        "route": {
            "length": model.route.length,
            "weather": model.route.weather.value,
            "road_condition": model.route.road_condition.value,
            "samples": [
                {
                    "distance": p.distance,
                    "speed_limit": p.speed_limit,
                    "slope": p.slope,
                    "curvature": p.curvature,
                    "traffic_light_index": p.traffic_light_index,
                    "traffic_sign_index": p.traffic_sign_index,
                    "toll_booth": p.toll_booth,
                }
                for p in model.route.samples
            ],
        },
    }
    return json.dumps(doc, indent=2)


def deserialize_driving_model(text: str) -> DrivingModel:
    """Parse a driving-model document; inverse of :func:`serialize_driving_model`.

    Raises :class:`SchemaError` with field diagnostics on malformed input.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed document: {e.msg} (line {e.lineno}, column {e.colno})") from e
    if not isinstance(doc, dict):
        raise SchemaError("malformed document: top level must be an object")

    d = _require(doc, "driver", "document")
    driver = Driver(
        reaction_speed=_number(_require(d, "reaction_speed", "driver"), "driver.reaction_speed"),
        target_velocity=_number(_require(d, "target_velocity", "driver"), "driver.target_velocity"),
        action=_enum_from(_require(d, "action", "driver"), DriverAction, "driver.action"),
        driving_style=_enum_from(
            _require(d, "driving_style", "driver"), DrivingStyle, "driver.driving_style"
        ),
    )

    veh = _require(doc, "vehicle", "document")
    vehicle = Vehicle(
        size=_number(_require(veh, "size", "vehicle"), "vehicle.size"),
        weight=_number(_require(veh, "weight", "vehicle"), "vehicle.weight"),
        engine_type=_enum_from(
            _require(veh, "engine_type", "vehicle"), EngineType, "vehicle.engine_type"
        ),
        acceleration=_number(_require(veh, "acceleration", "vehicle"), "vehicle.acceleration"),
        average_emissions=_number(
            _require(veh, "average_emissions", "vehicle"), "vehicle.average_emissions"
        ),
    )

    r = _require(doc, "route", "document")
    samples = _require(r, "samples", "route")
    if not isinstance(samples, list):
        raise SchemaError("route.samples: expected an array")
    points = []
    for i, s in enumerate(samples):
        at = f"route.samples[{i}]"
        tli = _require(s, "traffic_light_index", at)
        tsi = _require(s, "traffic_sign_index", at)
        if isinstance(tli, bool) or not isinstance(tli, int):
            raise SchemaError(f"{at}.traffic_light_index: expected an integer, got {tli!r}")
        if isinstance(tsi, bool) or not isinstance(tsi, int):
            raise SchemaError(f"{at}.traffic_sign_index: expected an integer, got {tsi!r}")
        toll = _require(s, "toll_booth", at)
        if not isinstance(toll, bool):
            raise SchemaError(f"{at}.toll_booth: expected a boolean, got {toll!r}")
        points.append(
            RoutePoint(
                distance=_number(_require(s, "distance", at), f"{at}.distance"),
                speed_limit=_number(_require(s, "speed_limit", at), f"{at}.speed_limit"),
                slope=_number(_require(s, "slope", at), f"{at}.slope"),
                curvature=_number(_require(s, "curvature", at), f"{at}.curvature"),
                traffic_light_index=tli,
                traffic_sign_index=tsi,
                toll_booth=toll,
            )
        )
    route = Route(
        length=_number(_require(r, "length", "route"), "route.length"),
        samples=tuple(points),
        weather=_enum_from(_require(r, "weather", "route"), Weather, "route.weather"),
        road_condition=_enum_from(
            _require(r, "road_condition", "route"), RoadCondition, "route.road_condition"
        ),
    )
    return DrivingModel(driver=driver, vehicle=vehicle, route=route)
