import dataclasses
import math

import pytest

from roughrisk import (
    QuantizedRecord,
    RawEvent,
    RiskLevel,
    quantize_event,
    read_quantized_csv,
    read_raw_csv,
    records_to_table,
    risk_label,
    write_quantized_csv,
    write_raw_csv,
)


def make_event(**overrides) -> RawEvent:
    base = dict(
        gender="male", age=37, acc_pedal=False, brake_switch=True,
        turn_indicator=False, ttc_occupied=1.5, ttc_neighbor=None,
        velocity=45.0, road_segment="corridor", traffic_flow="moderate",
        friction=0.55, decel=-3.0,
    )
    base.update(overrides)
    return RawEvent(**base)


def test_reference_event_levels():
    r = quantize_event(make_event())
    assert (r.c1, r.c2, r.c3, r.c4, r.c5) == (2, 1, 2, 2, 3)
    assert (r.c6, r.c7, r.c8, r.c9) == (1, 1, 2, 2)
    assert r.risk is RiskLevel.Moderate


def test_c1_is_three_bit_code():
    for acc in (False, True):
        for brake in (False, True):
            for turn in (False, True):
                r = quantize_event(make_event(
                    acc_pedal=acc, brake_switch=brake, turn_indicator=turn))
                assert r.c1 == 4 * acc + 2 * brake + turn


def test_velocity_boundaries():
    for v, level in [(0.0, 1), (40.0, 1), (40.01, 2), (45.0, 2), (50.0, 2),
                     (50.5, 3), (60.0, 3), (60.1, 4), (120.0, 4)]:
        assert quantize_event(make_event(velocity=v)).c4 == level, v


def test_ttc_boundaries():
    for t, level in [(0.5, 3), (2.0, 3), (2.01, 2), (5.0, 2), (5.01, 1),
                     (60.0, 1)]:
        e = quantize_event(make_event(ttc_occupied=t, ttc_neighbor=t))
        assert (e.c5, e.c6) == (level, level), t
    absent = quantize_event(make_event(ttc_occupied=None, ttc_neighbor=None,
                                       decel=-2.5))
    assert (absent.c5, absent.c6) == (1, 1)


def test_age_boundaries():
    for a, level in [(18, 1), (30, 1), (31, 2), (37, 2), (45, 2), (46, 3),
                     (60, 3), (61, 4), (95, 4)]:
        assert quantize_event(make_event(age=a)).c3 == level, a
    # a 17-year-old is a valid record but has no licensed-driver group
    with pytest.raises(ValueError):
        quantize_event(make_event(age=17))
    with pytest.raises(ValueError):
        make_event(age=15)


def test_friction_boundaries():
    for f, level in [(1.0, 1), (0.7, 1), (0.699, 2), (0.55, 2), (0.4, 2),
                     (0.399, 3), (0.0, 3)]:
        assert quantize_event(make_event(friction=f)).c9 == level, f


def test_categorical_codes():
    assert quantize_event(make_event(gender="female")).c2 == 2
    for seg, code in [("corridor", 1), ("intersection", 2), ("viaduct", 3),
                      ("tunnel", 4)]:
        assert quantize_event(make_event(road_segment=seg)).c7 == code
    for flow, code in [("congested", 1), ("moderate", 2), ("free", 3)]:
        assert quantize_event(make_event(traffic_flow=flow)).c8 == code


def test_risk_label_examples():
    assert risk_label(-5.09) is RiskLevel.High
    assert risk_label(-2.64) is RiskLevel.Moderate
    assert risk_label(-1.0) is RiskLevel.Low
    assert risk_label(1.8) is RiskLevel.Low
    # boundaries: -5 is High, -2 is Moderate
    assert risk_label(-5.0) is RiskLevel.High
    assert risk_label(-4.999) is RiskLevel.Moderate
    assert risk_label(-2.0) is RiskLevel.Moderate
    assert risk_label(-1.999) is RiskLevel.Low
    assert risk_label(-11.0) is RiskLevel.High
    with pytest.raises(ValueError):
        risk_label(math.nan)
    with pytest.raises(ValueError):
        risk_label(math.inf)


def test_risk_label_monotone():
    grid = [x / 10.0 for x in range(-90, 31)]
    labels = [int(risk_label(x)) for x in grid]
    assert labels == sorted(labels, reverse=True)


def test_raw_event_validation():
    for bad in [dict(gender="other"), dict(ttc_occupied=0.0),
                dict(ttc_neighbor=-1.0), dict(velocity=-5.0),
                dict(friction=1.2), dict(friction=-0.1),
                dict(road_segment="bridge"), dict(traffic_flow="jam"),
                dict(decel=math.nan)]:
        with pytest.raises(ValueError):
            make_event(**bad)


def test_quantized_record_domain_validation():
    r = quantize_event(make_event())
    with pytest.raises(ValueError):
        dataclasses.replace(r, c1=8)
    with pytest.raises(ValueError):
        dataclasses.replace(r, c5=0)


def test_raw_csv_round_trip(tmp_path):
    events = [
        make_event(),
        make_event(gender="female", ttc_occupied=None, decel=-6.25,
                   velocity=0.0, friction=1.0),
        make_event(ttc_neighbor=0.1234567890123, age=61,
                   road_segment="tunnel", traffic_flow="free"),
    ]
    path = tmp_path / "events.csv"
    write_raw_csv(path, events)
    assert read_raw_csv(path) == events


def test_raw_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("gender,age\nmale,30\n")
    with pytest.raises(ValueError):
        read_raw_csv(p)
    header = ("gender,age,acc_pedal,brake_switch,turn_indicator,ttc_occupied,"
              "ttc_neighbor,velocity,road_segment,traffic_flow,friction,decel")
    p.write_text(header + "\nmale,37,maybe,1,0,,,45,corridor,moderate,0.5,-3\n")
    with pytest.raises(ValueError, match=r":2: "):
        read_raw_csv(p)


def test_quantized_csv_round_trip(tmp_path):
    records = [quantize_event(make_event(decel=d))
               for d in (-6.0, -3.0, -0.5)]
    path = tmp_path / "q.csv"
    write_quantized_csv(path, records)
    back = read_quantized_csv(path)
    assert back == records
    assert [r.risk for r in back] == \
        [RiskLevel.High, RiskLevel.Moderate, RiskLevel.Low]


def test_quantized_csv_rejects_bad_level(tmp_path):
    p = tmp_path / "q.csv"
    p.write_text("c1,c2,c3,c4,c5,c6,c7,c8,c9,risk\n9,1,1,1,1,1,1,1,1,Low\n")
    with pytest.raises(ValueError, match=r":2: "):
        read_quantized_csv(p)


def test_records_to_table():
    records = [quantize_event(make_event(decel=d)) for d in (-6.0, -0.5)]
    dt = records_to_table(records)
    assert dt.condition_attrs == tuple(f"c{i}" for i in range(1, 10))
    assert dt.decision_attr == "risk"
    assert dt.objects == ("1", "2")
    assert list(dt.decision_values) == [int(RiskLevel.High), int(RiskLevel.Low)]
    assert dt.level("1", "c5") == 3
