"""Domain types, their invariants, and JSON round-trips."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mothership import (
    Customer,
    Instance,
    ModelError,
    ParseError,
    Point,
    RoutePlan,
    Schedule,
    Sortie,
    Station,
    VIOLATION_KINDS,
    Violation,
    builtin_fixture,
    parse_instance,
    parse_plan,
    serialize_instance,
    serialize_plan,
)


def tiny_instance(**overrides):
    base = dict(
        depot=Point(0.0, 0.0),
        stations=(Station(1, Point(10.0, 0.0)), Station(2, Point(0.0, 10.0))),
        customers=(
            Customer(0, Point(12.0, 0.0), 0.5, 20.0),
            Customer(1, Point(0.0, 14.0), 1.0, 30.0),
        ),
        fleet_size=2,
        robot_range=50.0,
        vehicle_speed=50.0,
        robot_speed=5.0,
    )
    base.update(overrides)
    return Instance(**base)


class TestInstance:
    def test_accessors(self):
        inst = tiny_instance()
        assert inst.n_stations == 2
        assert inst.n_customers == 2
        assert inst.station(2).location == Point(0.0, 10.0)
        assert inst.customer(1).deadline == 30.0

    def test_unknown_ids_raise(self):
        inst = tiny_instance()
        with pytest.raises(ModelError):
            inst.station(3)
        with pytest.raises(ModelError):
            inst.customer(9)

    def test_sorts_members_by_id(self):
        inst = tiny_instance(
            stations=(Station(2, Point(0.0, 10.0)), Station(1, Point(10.0, 0.0))),
            customers=(
                Customer(1, Point(0.0, 14.0), 1.0, 30.0),
                Customer(0, Point(12.0, 0.0), 0.5, 20.0),
            ),
        )
        assert [s.id for s in inst.stations] == [1, 2]
        assert [c.id for c in inst.customers] == [0, 1]

    def test_station_ids_must_start_at_one(self):
        with pytest.raises(ModelError):
            tiny_instance(stations=(Station(0, Point(1.0, 1.0)),))

    def test_station_ids_must_be_contiguous(self):
        with pytest.raises(ModelError):
            tiny_instance(
                stations=(Station(1, Point(1.0, 1.0)), Station(3, Point(2.0, 2.0)))
            )

    def test_customer_ids_must_be_contiguous_from_zero(self):
        with pytest.raises(ModelError):
            tiny_instance(customers=(Customer(1, Point(1.0, 1.0), 1.0, 5.0),))

    def test_duplicate_station_id_rejected(self):
        with pytest.raises(ModelError):
            tiny_instance(
                stations=(Station(1, Point(1.0, 1.0)), Station(1, Point(2.0, 2.0)))
            )

    @pytest.mark.parametrize(
        "field,value",
        [
            ("fleet_size", 0),
            ("robot_range", 0.0),
            ("robot_range", -1.0),
            ("vehicle_speed", 0.0),
            ("robot_speed", -2.0),
        ],
    )
    def test_positive_scalars_enforced(self, field, value):
        with pytest.raises(ModelError):
            tiny_instance(**{field: value})

    def test_unreachable_customer_rejected(self):
        # nearest station is 40 away; the round trip 80 exceeds TR=50
        with pytest.raises(ModelError, match="unreachable"):
            tiny_instance(customers=(Customer(0, Point(50.0, 0.0), 1.0, 5.0),))

    def test_importance_must_be_positive(self):
        with pytest.raises(ModelError):
            tiny_instance(customers=(Customer(0, Point(12.0, 0.0), 0.0, 5.0),))

    def test_deadline_must_not_be_negative(self):
        with pytest.raises(ModelError):
            tiny_instance(customers=(Customer(0, Point(12.0, 0.0), 1.0, -0.5),))

    def test_at_least_one_station(self):
        with pytest.raises(ModelError):
            tiny_instance(stations=(), customers=())


class TestPlanTypes:
    def test_sortie_shape_checks(self):
        with pytest.raises(ModelError):
            Sortie(robot=-1, station=1, services=(0,))
        with pytest.raises(ModelError):
            Sortie(robot=0, station=0, services=(0,))
        with pytest.raises(ModelError):
            Sortie(robot=0, station=1, services=())
        with pytest.raises(ModelError):
            Sortie(robot=0, station=1, services=(0, 0))

    def test_plan_normalizes_to_tuples(self):
        plan = RoutePlan(tour=[2, 1], sorties=[Sortie(0, 1, [1, 0])])
        assert plan.tour == (2, 1)
        assert plan.sorties[0].services == (1, 0)

    def test_duplicate_tour_station_is_constructible(self):
        # degree bookkeeping is the validator's job, so a tour that
        # revisits a station must still construct for auditing
        plan = RoutePlan(tour=(1, 1), sorties=())
        assert plan.tour == (1, 1)

    def test_instance_dependent_breakage_is_constructible(self):
        # plans referencing stations or customers the instance lacks must
        # construct fine; the validator reports them instead
        plan = RoutePlan(tour=(9,), sorties=(Sortie(5, 9, (42,)),))
        assert plan.tour == (9,)

    def test_violation_kind_checked(self):
        with pytest.raises(ModelError):
            Violation(kind="nonsense", detail="x")
        v = Violation(kind=VIOLATION_KINDS[0], detail="d")
        assert v.detail == "d"

    def test_schedule_holds_mappings(self):
        s = Schedule(
            arrive={1: 1.0},
            depart={1: 2.0},
            complete={0: 1.5},
            tardiness={0: 0.0},
            objective=0.0,
        )
        assert s.complete[0] == 1.5


class TestSerialization:
    def test_instance_round_trip_fixture(self):
        for name in ("small", "medium"):
            inst, plan = builtin_fixture(name)
            assert parse_instance(serialize_instance(inst)) == inst
            assert parse_plan(serialize_plan(plan)) == plan

    def test_serialized_instance_is_stable(self):
        inst = tiny_instance()
        assert serialize_instance(inst) == serialize_instance(inst)

    def test_parse_instance_reports_bad_json_position(self):
        with pytest.raises(ParseError, match="line"):
            parse_instance("{\n  broken")

    def test_parse_instance_requires_keys(self):
        with pytest.raises(ParseError, match="missing"):
            parse_instance("{}")

    def test_parse_plan_requires_keys(self):
        with pytest.raises(ParseError, match="keys"):
            parse_plan("{\"tour\": [1]}")

    def test_parse_rejects_non_object(self):
        with pytest.raises(ParseError):
            parse_instance("[1, 2]")


coordinate = st.floats(
    min_value=-1000.0, max_value=1000.0, allow_nan=False, allow_infinity=False
)


@st.composite
def instances(draw):
    n_s = draw(st.integers(min_value=1, max_value=4))
    n_c = draw(st.integers(min_value=0, max_value=6))
    stations = tuple(
        Station(i + 1, Point(draw(coordinate), draw(coordinate))) for i in range(n_s)
    )
    customers = []
    for cid in range(n_c):
        # keep every customer on top of some station so reachability holds
        anchor = stations[draw(st.integers(min_value=0, max_value=n_s - 1))]
        customers.append(
            Customer(
                cid,
                Point(anchor.location.x, anchor.location.y),
                draw(st.floats(min_value=0.01, max_value=1.0, allow_nan=False)),
                draw(st.floats(min_value=0.0, max_value=100.0, allow_nan=False)),
            )
        )
    return Instance(
        depot=Point(draw(coordinate), draw(coordinate)),
        stations=stations,
        customers=tuple(customers),
        fleet_size=draw(st.integers(min_value=1, max_value=3)),
        robot_range=draw(st.floats(min_value=1.0, max_value=1e4, allow_nan=False)),
        vehicle_speed=draw(st.floats(min_value=0.1, max_value=100.0, allow_nan=False)),
        robot_speed=draw(st.floats(min_value=0.1, max_value=100.0, allow_nan=False)),
    )


@settings(max_examples=200, deadline=None)
@given(instances())
def test_instance_serialization_round_trip(inst):
    again = parse_instance(serialize_instance(inst))
    assert again == inst
    # floats survive exactly, not approximately
    for a, b in zip(inst.customers, again.customers):
        assert math.copysign(1.0, a.location.x) == math.copysign(1.0, b.location.x)
        assert a.location.x == b.location.x
