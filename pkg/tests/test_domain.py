"""Descriptive data model: validation and document round-trips."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speedclass.domain import (
    Algorithm,
    Driver,
    DriverAction,
    DrivingModel,
    DrivingStyle,
    EngineType,
    RoadCondition,
    Route,
    RoutePoint,
    Vehicle,
    Weather,
    deserialize_driving_model,
    serialize_driving_model,
    validate_driving_model,
)
from speedclass.errors import SchemaError


def make_point(i: int, **overrides) -> RoutePoint:
    fields = dict(
        distance=float(10 * i),
        speed_limit=50.0,
        slope=0.01,
        curvature=0.002,
        traffic_light_index=i % 7,
        traffic_sign_index=i,
        toll_booth=(i % 3 == 0),
    )
    fields.update(overrides)
    return RoutePoint(**fields)


def make_model(points=None) -> DrivingModel:
    if points is None:
        points = [make_point(i) for i in range(5)]
    return DrivingModel(
        driver=Driver(
            reaction_speed=0.8,
            target_velocity=90.0,
            action=DriverAction.MAINTAINING,
            driving_style=DrivingStyle.NORMAL,
        ),
        vehicle=Vehicle(
            size=4.5,
            weight=1500.0,
            engine_type=EngineType.DIESEL,
            acceleration=2.5,
            average_emissions=120.0,
        ),
        route=Route(
            length=points[-1].distance,
            samples=tuple(points),
            weather=Weather.CLEAR,
            road_condition=RoadCondition.URBAN,
        ),
    )


class TestValidation:
    def test_valid_model_has_no_violations(self):
        assert validate_driving_model(make_model()) == []

    def test_nonpositive_vehicle_fields_reported_with_paths(self):
        model = make_model()
        bad = DrivingModel(
            driver=model.driver,
            vehicle=Vehicle(
                size=0.0,
                weight=-1.0,
                engine_type=EngineType.PETROL,
                acceleration=0.0,
                average_emissions=-5.0,
            ),
            route=model.route,
        )
        violations = validate_driving_model(bad)
        assert "Vehicle.size > 0" in violations
        assert "Vehicle.weight > 0" in violations
        assert "Vehicle.acceleration > 0" in violations
        assert "Vehicle.average_emissions >= 0" in violations

    def test_zero_emissions_allowed_for_electric(self):
        model = make_model()
        ev = DrivingModel(
            driver=model.driver,
            vehicle=Vehicle(
                size=4.2,
                weight=1900.0,
                engine_type=EngineType.ELECTRIC,
                acceleration=4.0,
                average_emissions=0.0,
            ),
            route=model.route,
        )
        assert validate_driving_model(ev) == []

    def test_route_distance_must_strictly_increase(self):
        points = [make_point(0), make_point(1, distance=10.0), make_point(2, distance=10.0)]
        model = make_model(points)
        violations = validate_driving_model(model)
        assert "Route.samples[2].distance strictly increasing" in violations

    def test_traffic_light_index_range(self):
        points = [make_point(0), make_point(1, traffic_light_index=7)]
        violations = validate_driving_model(make_model(points))
        assert "Route.samples[1].traffic_light_index in [0, 6]" in violations

    def test_route_length_must_match_last_sample(self):
        model = make_model()
        bad_route = Route(
            length=model.route.length + 1.0,
            samples=model.route.samples,
            weather=model.route.weather,
            road_condition=model.route.road_condition,
        )
        bad = DrivingModel(driver=model.driver, vehicle=model.vehicle, route=bad_route)
        assert "Route.length equals last sample distance" in validate_driving_model(bad)

    def test_empty_route_reported(self):
        model = make_model()
        empty = Route(
            length=0.0,
            samples=(),
            weather=Weather.CLEAR,
            road_condition=RoadCondition.HIGHWAY,
        )
        bad = DrivingModel(driver=model.driver, vehicle=model.vehicle, route=empty)
        assert "Route.samples nonempty" in validate_driving_model(bad)


class TestSerialization:
    def test_round_trip_preserves_model(self):
        model = make_model()
        assert deserialize_driving_model(serialize_driving_model(model)) == model

    def test_unknown_enum_literal_rejected_with_valid_list(self):
        text = serialize_driving_model(make_model()).replace('"Diesel"', '"Steam"')
        with pytest.raises(SchemaError) as exc:
            deserialize_driving_model(text)
        assert "Steam" in str(exc.value)
        assert "Diesel" in str(exc.value)  # message lists the valid literals

    def test_missing_field_names_the_path(self):
        text = serialize_driving_model(make_model()).replace('"weight": 1500.0,', "")
        with pytest.raises(SchemaError, match="weight required"):
            deserialize_driving_model(text)

    def test_malformed_json_rejected(self):
        with pytest.raises(SchemaError, match="malformed"):
            deserialize_driving_model("{not json")

    def test_boolean_not_accepted_as_number(self):
        text = serialize_driving_model(make_model()).replace(
            '"reaction_speed": 0.8', '"reaction_speed": true'
        )
        with pytest.raises(SchemaError, match="reaction_speed"):
            deserialize_driving_model(text)

    def test_non_integer_traffic_index_rejected(self):
        text = serialize_driving_model(make_model()).replace(
            '"traffic_light_index": 1', '"traffic_light_index": 1.5'
        )
        with pytest.raises(SchemaError, match="traffic_light_index"):
            deserialize_driving_model(text)


class TestAlgorithmRegistry:
    def test_eight_families_in_fixed_column_order(self):
        assert [a.value for a in Algorithm] == [
            "GradientBoosting",
            "DecisionTree",
            "RandomForest",
            "LogisticRegression",
            "KNNeighbors",
            "GaussianNB",
            "LinearSVM",
            "AdaBoost",
        ]


@st.composite
def route_points(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    distances = sorted(
        draw(
            st.lists(
                st.floats(0, 1e5, allow_nan=False), min_size=n, max_size=n, unique=True
            )
        )
    )
    return [
        make_point(
            i,
            distance=d,
            speed_limit=draw(st.sampled_from([30.0, 50.0, 70.0, 100.0, 130.0])),
            slope=draw(st.floats(-0.1, 0.1)),
            curvature=draw(st.floats(0, 0.05)),
            traffic_light_index=draw(st.integers(0, 6)),
            traffic_sign_index=draw(st.integers(0, 40)),
            toll_booth=draw(st.booleans()),
        )
        for i, d in enumerate(distances)
    ]


@settings(max_examples=40, deadline=None)
@given(points=route_points())
def test_serialization_round_trip_property(points):
    model = make_model(points)
    assert validate_driving_model(model) == []
    assert deserialize_driving_model(serialize_driving_model(model)) == model
