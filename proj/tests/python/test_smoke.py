import math

import pytest

import faas_dessim as fd


def hand_traces():
    a = fd.TraceFile("A", [(100_000, 200), (10_000, 200), (10_000, 200)])
    b = fd.TraceFile("B", [(120_000, 200), (12_000, 200)])
    return [a, b]


def test_hand_scenario():
    r = fd.run_simulation(hand_traces(), 3, arrivals_us=[0, 5_000, 50_000])
    assert r.replicas_created == 3
    assert r.cold_start_count == 3
    assert r.durations_ms == [100.0, 120.0, 100.0]
    assert [tid for _, tid in r.trace_assignment_log] == ["A", "B", "A"]
    assert r.records[1]["replica_id"] == 2


def test_closed_loop_replays_trace():
    trace = fd.synth_trace(50, 150.0, 19.0, 0.2, seed=1)
    r = fd.run_simulation([trace], 49, arrival="closed-loop")
    assert [rec["duration_us"] for rec in r.records] == [e.duration_us for e in trace.entries[:49]]


def test_poisson_schedule_is_seeded():
    a = fd.poisson_interarrivals(19.0, 100, seed=3)
    assert a == fd.poisson_interarrivals(19.0, 100, seed=3)
    assert a[0] == 0 and a == sorted(a)


def test_statistics():
    assert fd.percentile(list(range(1, 101)), 95) == pytest.approx(95.05)
    x, p = fd.ecdf([1.0, 2.0, 2.0, 4.0])
    assert x == [1.0, 2.0, 4.0] and p == [0.25, 0.75, 1.0]
    m = fd.moments([1.0, 1.0, 1.0, 7.0])
    assert m["skewness"] == pytest.approx(2 / math.sqrt(3))
    assert len(fd.trim_warmup(list(range(5000)), 0.05)) == 4750
    ci = fd.percentile_ci([[18.0], [19.0], [20.0], [21.0]], 50)
    assert ci["lower"] == pytest.approx(17.44573974323912)
    assert fd.ks_distance([1.0, 2.0], [3.0, 4.0]) == 1.0


def test_compare_self_is_shape_valid():
    runs = [[e.duration_us / 1000 for e in fd.synth_trace(400, 50.0, 19.0, 0.3, seed=s).entries[1:]]
            for s in range(3)]
    report = fd.compare(runs, runs)
    assert report["verdict"]["result"] == "shape-valid"
    assert [row["percentile"] for row in report["percentiles"]] == [50, 95, 99, 99.9]


def test_csv_round_trip(tmp_path):
    r = fd.run_simulation(hand_traces(), 3, arrivals_us=[0, 5_000, 50_000])
    fd.write_results(r, str(tmp_path / "r.csv"))
    assert fd.read_results(str(tmp_path / "r.csv")).records == r.records
    fd.write_trace_csv(hand_traces()[0], str(tmp_path / "t.csv"))
    assert len(fd.read_trace_csv(str(tmp_path / "t.csv"))) == 3


def test_errors_map_to_python_exceptions():
    with pytest.raises(fd.ParameterError):
        fd.poisson_interarrivals(0.0, 10)
    with pytest.raises(fd.ConfigError):
        fd.run_simulation([], 1, lambda_ms=1.0)
    with pytest.raises(fd.InputError):
        fd.read_trace_csv("/nonexistent/trace.csv")
    assert issubclass(fd.FormatError, fd.DessimError)
    assert issubclass(fd.DessimError, ValueError)
