import pytest

from rtsim import Experiment, SimConfig, run_experiment, set_input
from rtsim.trace import export_jsonl, export_vcd, read_jsonl, records_of

from vcd_check import check_vcd


def run_body(full_ddb, body, **config_kwargs):
    return run_experiment(Experiment("t", body), full_ddb, SimConfig(**config_kwargs))


@pytest.fixture
def pulse_run(full_ddb):
    def body(run):
        run.delay_mu(100)
        run.get_device("ttl0").pulse(1000)

    return run_body(full_ddb, body)


class TestVcd:
    def test_pulse_change_lines(self, pulse_run, tmp_path):
        path = tmp_path / "pulse.vcd"
        export_vcd(pulse_run, path)
        text = path.read_text()
        parsed = check_vcd(text)
        assert parsed["timescale"] == "1 ns"
        (code,) = [c for c, (dev, name, _) in parsed["ids"].items() if dev == "ttl0"]
        assert f"#100\n1{code}" in text
        assert f"#1100\n0{code}" in text

    def test_empty_run_is_header_only(self, full_ddb, tmp_path):
        run = run_body(full_ddb, lambda run: None)
        path = tmp_path / "empty.vcd"
        export_vcd(run, path)
        text = path.read_text()
        check_vcd(text)
        assert "$dumpvars" not in text
        assert "#" not in text

    def test_one_scope_per_device(self, full_ddb, tmp_path):
        def body(run):
            run.get_device("ttl0").pulse(10)
            run.get_device("ttl1").pulse(20)

        run = run_body(full_ddb, body)
        path = tmp_path / "two.vcd"
        export_vcd(run, path)
        parsed = check_vcd(path.read_text())
        assert parsed["scopes"] == ["ttl0", "ttl1"]

    def test_negative_events_clamped_into_initials(self, full_ddb, tmp_path):
        def body(run):
            run.get_device("counter0")
            set_input(run, "counter0", "freq", -500, 1.0)
            set_input(run, "counter0", "freq", -200, 2.0)
            set_input(run, "counter0", "freq", 300, 3.0)

        run = run_body(full_ddb, body)
        path = tmp_path / "neg.vcd"
        export_vcd(run, path)
        text = path.read_text()
        parsed = check_vcd(text)
        initials = [line for t, _, line in parsed["changes"] if t is None]
        # Only the latest pre-zero value survives in the initial block.
        assert any(line.startswith("r2 ") for line in initials)
        assert not any(line.startswith("r1 ") for line in initials)
        assert "#300" in text
        assert "#-500" not in text

    def test_unset_bool_signals_start_unknown(self, full_ddb, tmp_path):
        def body(run):
            run.delay_mu(5)
            run.get_device("ttl0").on()

        run = run_body(full_ddb, body)
        path = tmp_path / "x.vcd"
        export_vcd(run, path)
        parsed = check_vcd(path.read_text())
        initials = [line for t, _, line in parsed["changes"] if t is None]
        assert any(line.startswith("x") for line in initials)

    def test_int_and_text_rendering(self, full_ddb, tmp_path):
        def body(run):
            dev = run.get_device("in0")
            set_input(run, "in0", "prob", 0, 1.0)
            with run.kernel("warm up"):
                dev.sample_get()

        run = run_body(full_ddb, body)
        path = tmp_path / "kinds.vcd"
        export_vcd(run, path)
        text = path.read_text()
        check_vcd(text)
        assert "swarm_up" in text  # whitespace sanitized in string values
        assert "\nb1 " in text


class TestJsonl:
    def test_records_plus_summary(self, pulse_run, tmp_path):
        path = tmp_path / "pulse.jsonl"
        export_jsonl(pulse_run, path)
        records, summary = read_jsonl(path)
        assert len(records) == 2
        assert summary["event_count"] == 2
        assert summary["timeline_length_mu"] == pulse_run.stats.timeline_length_mu
        assert summary["config"]["mode"] == "regular"
        assert "wall_clock_ns" not in summary

    def test_byte_identical_across_runs(self, full_ddb, tmp_path):
        def body(run):
            dev = run.get_device("in0")
            set_input(run, "in0", "prob", 0, 0.5)
            run.get_device("core").reset()
            for _ in range(5):
                dev.sample_get()
                run.delay_mu(3)

        paths = []
        for name in ("a.jsonl", "b.jsonl"):
            run = run_body(full_ddb, body, seed=77)
            path = tmp_path / name
            export_jsonl(run, path)
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_round_trip_reproduces_stores(self, full_ddb, tmp_path):
        def body(run):
            core = run.get_device("core")
            dds = run.get_device("dds0")
            run.get_device("adc0")
            set_input(run, "adc0", "v0", -10, 0.125)
            core.reset()
            dds.set(1.25e8, 0.5, 0.75)
            run.get_device("ttl0").pulse(7)
            with run.kernel("k"):
                pass

        run = run_body(full_ddb, body)
        path = tmp_path / "rt.jsonl"
        export_jsonl(run, path)
        records, _ = read_jsonl(path)

        rebuilt = {}
        for rec in records:
            rebuilt.setdefault((rec["device"], rec["signal"]), []).append(
                (rec["time_mu"], rec["value"])
            )
        for sig in run.signals:
            key = (sig.device_name, sig.signal_name)
            events = sig.events()
            assert rebuilt.get(key, []) == events
            for (_, rebuilt_v), (_, orig_v) in zip(rebuilt.get(key, []), events):
                assert type(rebuilt_v) is type(orig_v)

    def test_records_globally_sorted(self, full_ddb, tmp_path):
        def body(run):
            a = run.get_device("ttl1")
            b = run.get_device("ttl0")
            a.on()
            b.on()
            run.delay_mu(10)
            b.off()
            a.off()

        run = run_body(full_ddb, body)
        path = tmp_path / "sorted.jsonl"
        export_jsonl(run, path)
        records, _ = read_jsonl(path)
        keys = [(r["time_mu"], r["device"], r["signal"]) for r in records]
        assert keys == sorted(keys)
        assert records_of(run)[0].device == "ttl0"
