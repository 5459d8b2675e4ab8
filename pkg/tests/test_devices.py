import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtsim import (
    UNKNOWN,
    BufferEmpty,
    DeviceDb,
    DeviceError,
    Experiment,
    InputBuffer,
    InputUnset,
    SimConfig,
    SyncMode,
    run_experiment,
)
from rtsim.devices import DeviceDescriptor

# Golden sequences generated once with the pinned xoshiro256** streams.
BERNOULLI_SEED_12345_IN0_P05 = [1, 0, 0, 1, 0, 1, 1, 1]
POISSON_SEED_7_COUNTER0_MEAN1 = 0


class TestDescriptor:
    def test_unknown_kind_lists_allowed(self):
        with pytest.raises(DeviceError, match="flux_capacitor.*allowed kinds"):
            DeviceDescriptor("x", "flux_capacitor")

    def test_unknown_param_rejected(self):
        with pytest.raises(DeviceError, match="unknown param"):
            DeviceDescriptor("x", "ttl_out", {"bogus": 1})

    def test_param_defaults(self):
        desc = DeviceDescriptor("d", "dds")
        assert desc.param("init_delay_mu") == 125_000
        assert desc.param("set_delay_mu") == 0

    def test_negative_delay_param_rejected(self, make_run):
        ddb = DeviceDb.from_dict(
            {"devices": [
                {"name": "core", "kind": "core"},
                {"name": "d", "kind": "dds", "params": {"set_delay_mu": -1}},
            ]}
        )
        run = make_run(ddb=ddb)
        with pytest.raises(DeviceError, match="set_delay_mu"):
            run.get_device("d")


class TestCore:
    def test_fresh_regular_reset(self, make_run):
        run = make_run(SyncMode.REGULAR)
        assert run.get_device("core").reset() == 125_000

    def test_fresh_optimistic_reset(self, make_run):
        run = make_run(SyncMode.OPTIMISTIC)
        assert run.get_device("core").reset() == 0

    def test_reset_rides_event_horizon(self, make_run):
        run = make_run(SyncMode.REGULAR)
        ttl = run.get_device("ttl0")
        run.at_mu(9_000_000)
        ttl.on()
        run.at_mu(0)
        assert run.get_device("core").reset() == 9_125_000


class TestTtlOut:
    def test_pulse_events_and_cursor(self, make_run):
        run = make_run()
        ttl = run.get_device("ttl0")
        run.delay_mu(100)
        ttl.pulse(1000)
        assert ttl.state.events() == [(100, True), (1100, False)]
        assert run.now_mu() == 1100

    def test_double_on_at_same_cursor_overwrites(self, make_run):
        run = make_run()
        ttl = run.get_device("ttl0")
        ttl.on()
        ttl.on()
        assert ttl.state.events() == [(0, True)]

    def test_off_without_prior_on(self, make_run):
        run = make_run()
        ttl = run.get_device("ttl0")
        run.delay_mu(10)
        ttl.off()
        assert ttl.state.events() == [(10, False)]
        assert ttl.state.pull(9) is UNKNOWN

    @pytest.mark.parametrize("bad", [0, -5])
    def test_pulse_requires_positive_duration(self, make_run, bad):
        run = make_run()
        with pytest.raises(DeviceError):
            run.get_device("ttl0").pulse(bad)


class TestTtlIn:
    def set_prob(self, run, p, t=0):
        run.get_device("in0").prob.push(p, t)

    def test_probability_one_always_high(self, make_run):
        run = make_run()
        dev = run.get_device("in0")
        self.set_prob(run, 1.0)
        assert [dev.sample_get() for _ in range(8)] == [1] * 8

    def test_probability_zero_always_low(self, make_run):
        run = make_run()
        dev = run.get_device("in0")
        self.set_prob(run, 0.0)
        assert [dev.sample_get() for _ in range(8)] == [0] * 8

    def test_golden_sequence_seed_12345(self, make_run):
        run = make_run(seed=12345)
        dev = run.get_device("in0")
        self.set_prob(run, 0.5)
        draws = []
        for _ in range(8):
            draws.append(dev.sample_get())
            run.delay_mu(10)
        assert draws == BERNOULLI_SEED_12345_IN0_P05

    def test_unset_probability_is_an_error(self, make_run):
        run = make_run()
        dev = run.get_device("in0")
        with pytest.raises(InputUnset):
            dev.sample_get()

    def test_probability_set_only_later_is_unset_before(self, make_run):
        run = make_run()
        dev = run.get_device("in0")
        self.set_prob(run, 1.0, t=500)
        run.at_mu(499)
        with pytest.raises(InputUnset):
            dev.sample_get()

    def test_out_of_range_probability(self, make_run):
        run = make_run()
        dev = run.get_device("in0")
        self.set_prob(run, 1.5)
        with pytest.raises(DeviceError):
            dev.sample_get()

    def test_sample_event_recorded_at_cursor(self, make_run):
        run = make_run()
        dev = run.get_device("in0")
        self.set_prob(run, 1.0)
        run.delay_mu(250)
        dev.sample_get()
        assert dev.sample.events() == [(250, 1)]

    def test_fifo_and_overread(self, make_run):
        run = make_run(seed=12345)
        dev = run.get_device("in0")
        self.set_prob(run, 0.5)
        for _ in range(4):
            dev.sample_input()
            run.delay_mu(1)
        got = [dev.fetch_sample() for _ in range(4)]
        assert got == BERNOULLI_SEED_12345_IN0_P05[:4]
        with pytest.raises(BufferEmpty):
            dev.fetch_sample()


def counter_ddb(mode):
    return DeviceDb.from_dict(
        {"devices": [
            {"name": "core", "kind": "core"},
            {"name": "counter0", "kind": "edge_counter", "params": {"counter_mode": mode}},
        ]}
    )


class TestEdgeCounter:
    def test_deterministic_count_mhz_times_ms(self, make_run):
        run = make_run()
        dev = run.get_device("counter0")
        dev.freq.push(1.0e6, 0)
        close = dev.gate_rising(1_000_000)
        assert close == 1_000_000
        assert dev.fetch_count() == 1000

    def test_zero_frequency_counts_zero(self, make_run):
        run = make_run()
        dev = run.get_device("counter0")
        dev.freq.push(0.0, 0)
        dev.gate_rising(1_000_000)
        assert dev.fetch_count() == 0

    def test_gate_markers(self, make_run):
        run = make_run()
        dev = run.get_device("counter0")
        dev.freq.push(5.0, 0)
        run.delay_mu(10)
        dev.gate_rising(90)
        assert dev.gate.events() == [(10, True), (100, False)]
        assert run.now_mu() == 100

    def test_poisson_golden(self, make_run):
        run = make_run(seed=7, ddb=counter_ddb("poisson"))
        dev = run.get_device("counter0")
        dev.freq.push(1.0e3, 0)  # 1 kHz for 1 ms -> mean 1.0
        dev.gate_rising(1_000_000)
        assert dev.fetch_count() == POISSON_SEED_7_COUNTER0_MEAN1

    def test_bad_counter_mode_rejected(self, make_run):
        run = make_run(ddb=counter_ddb("gaussian"))
        with pytest.raises(DeviceError, match="counter_mode"):
            run.get_device("counter0")

    def test_negative_frequency_rejected(self, make_run):
        run = make_run()
        dev = run.get_device("counter0")
        dev.freq.push(-1.0, 0)
        with pytest.raises(DeviceError):
            dev.gate_rising(100)

    def test_unset_frequency_rejected(self, make_run):
        run = make_run()
        with pytest.raises(InputUnset):
            run.get_device("counter0").gate_rising(100)

    def test_gate_duration_must_be_positive(self, make_run):
        run = make_run()
        run.get_device("counter0").freq.push(1.0, 0)
        with pytest.raises(DeviceError):
            run.get_device("counter0").gate_rising(0)

    def test_fetch_from_empty_buffer(self, make_run):
        run = make_run()
        with pytest.raises(BufferEmpty):
            run.get_device("counter0").fetch_count()


class TestDds:
    def test_set_pushes_three_events_at_cursor(self, make_run):
        run = make_run()
        dds = run.get_device("dds0")
        run.delay_mu(42)
        dds.set(1e8, 0.25, 0.5)
        assert dds.freq.events() == [(42, 1e8)]
        assert dds.phase.events() == [(42, 0.25)]
        assert dds.amp.events() == [(42, 0.5)]

    def test_same_cursor_set_wins_latest(self, make_run):
        run = make_run()
        dds = run.get_device("dds0")
        dds.set(1e8, 0.25, 0.5)
        dds.set(2e8, 0.75, 0.25)
        assert dds.freq.pull(0) == 2e8
        assert dds.phase.pull(0) == 0.75
        assert dds.amp.pull(0) == 0.25

    def test_set_does_not_advance_cursor_by_default(self, make_run):
        run = make_run()
        dds = run.get_device("dds0")
        dds.set(1e8)
        assert run.now_mu() == 0

    def test_set_delay_override(self, make_run):
        ddb = DeviceDb.from_dict(
            {"devices": [
                {"name": "core", "kind": "core"},
                {"name": "d", "kind": "dds", "params": {"set_delay_mu": 40}},
            ]}
        )
        run = make_run(ddb=ddb)
        run.get_device("d").set(1e6)
        assert run.now_mu() == 40

    def test_init_advances_and_marks(self, make_run):
        run = make_run()
        dds = run.get_device("dds0")
        dds.init()
        assert run.now_mu() == 125_000
        assert dds.init_marker.events() == [(125_000, True)]

    @pytest.mark.parametrize(
        "freq,phase,amp",
        [(-1.0, 0.0, 1.0), (1e6, 1.0, 1.0), (1e6, -0.1, 1.0), (1e6, 0.0, 1.1), (1e6, 0.0, -0.1)],
    )
    def test_parameter_validation(self, make_run, freq, phase, amp):
        run = make_run()
        with pytest.raises(DeviceError):
            run.get_device("dds0").set(freq, phase, amp)


class TestAdc:
    def test_sample_returns_configured_voltages(self, make_run):
        run = make_run()
        adc = run.get_device("adc0")
        adc.voltages[0].push(1.0, 0)
        adc.voltages[1].push(2.0, 0)
        run.delay_mu(10)
        assert adc.sample() == [1.0, 2.0]

    def test_unset_channel_is_an_error(self, make_run):
        run = make_run()
        adc = run.get_device("adc0")
        adc.voltages[0].push(1.0, 0)
        with pytest.raises(InputUnset, match="channel 1"):
            adc.sample()

    def test_voltage_change_at_cursor_read_inclusively(self, make_run):
        run = make_run()
        adc = run.get_device("adc0")
        adc.voltages[0].push(1.0, 0)
        adc.voltages[1].push(0.0, 0)
        adc.voltages[0].push(3.0, 50)
        run.at_mu(50)
        assert adc.sample() == [3.0, 0.0]

    def test_fifo_order_and_overread(self, make_run):
        run = make_run()
        adc = run.get_device("adc0")
        adc.voltages[0].push(0.0, 0)
        adc.voltages[1].push(0.0, 0)
        for i in range(3):
            adc.voltages[0].push(float(i), run.now_mu())
            adc.sample_input()
            run.delay_mu(5)
        assert [adc.fetch_sample()[0] for _ in range(3)] == [0.0, 1.0, 2.0]
        with pytest.raises(BufferEmpty):
            adc.fetch_sample()

    def test_sample_delay_advances_cursor(self, make_run):
        ddb = DeviceDb.from_dict(
            {"devices": [
                {"name": "core", "kind": "core"},
                {"name": "a", "kind": "adc", "params": {"channels": 1, "sample_delay_mu": 30}},
            ]}
        )
        run = make_run(ddb=ddb)
        adc = run.get_device("a")
        adc.voltages[0].push(0.5, 0)
        adc.sample()
        assert run.now_mu() == 30


class TestInputBuffer:
    @given(st.lists(st.integers(), max_size=50))
    def test_fifo_order(self, values):
        buf = InputBuffer()
        for v in values:
            buf.put(v)
        assert [buf.take() for _ in values] == values
        with pytest.raises(BufferEmpty):
            buf.take()

    @given(st.lists(st.sampled_from(["put", "take"]), max_size=60))
    @settings(max_examples=200)
    def test_random_interleaving_matches_model(self, ops):
        buf = InputBuffer()
        model = []
        counter = 0
        for op in ops:
            if op == "put":
                buf.put(counter)
                model.append(counter)
                counter += 1
            elif model:
                assert buf.take() == model.pop(0)
            else:
                with pytest.raises(BufferEmpty):
                    buf.take()
        assert len(buf) == len(model)


class TestDeterminism:
    def test_identical_runs_bit_identical(self, full_ddb):
        def body(run):
            core = run.get_device("core")
            dev = run.get_device("in0")
            counter = run.get_device("counter0")
            dev.prob.push(0.5, 0)
            counter.freq.push(3.3e5, 0)
            core.reset()
            draws = [dev.sample_get() for _ in range(10)]
            counter.gate_rising(10_000)
            draws.append(counter.fetch_count())
            run.get_device("ttl0").pulse(100)
            run.results = draws

        exp = Experiment("det", body)
        config = SimConfig(seed=987)
        a = run_experiment(exp, full_ddb, config)
        b = run_experiment(exp, full_ddb, config)
        assert a.results == b.results
        for sig_a, sig_b in zip(a.signals, b.signals):
            assert (sig_a.device_name, sig_a.signal_name) == (sig_b.device_name, sig_b.signal_name)
            assert sig_a.events() == sig_b.events()

    def test_substreams_isolated_per_device(self):
        # Adding a second input device must not change the first one's draws.
        def draws(ddb_dict, extra_first):
            ddb = DeviceDb.from_dict(ddb_dict)
            config = SimConfig(seed=42)
            from rtsim import SimulationRun

            run = SimulationRun(ddb, config)
            if extra_first:
                other = run.get_device("in1")
                other.prob.push(0.5, 0)
                for _ in range(5):
                    other.sample_get()
            dev = run.get_device("in0")
            dev.prob.push(0.5, 0)
            return [dev.sample_get() for _ in range(8)]

        base = {"devices": [{"name": "core", "kind": "core"}, {"name": "in0", "kind": "ttl_in"}]}
        wide = {"devices": base["devices"] + [{"name": "in1", "kind": "ttl_in"}]}
        assert draws(base, False) == draws(wide, True)


class TestTimingAdditivity:
    def test_ttl_in_sample_delay(self, make_run):
        ddb = DeviceDb.from_dict(
            {"devices": [
                {"name": "core", "kind": "core"},
                {"name": "i", "kind": "ttl_in", "params": {"sample_delay_mu": 17}},
            ]}
        )
        run = make_run(ddb=ddb)
        dev = run.get_device("i")
        dev.prob.push(1.0, 0)
        dev.sample_get()
        assert run.now_mu() == 17

    def test_pulse_advance_equals_duration(self, make_run):
        run = make_run()
        run.get_device("ttl0").pulse(123)
        assert run.now_mu() == 123

    def test_gate_advance_equals_window(self, make_run):
        run = make_run()
        dev = run.get_device("counter0")
        dev.freq.push(1.0, 0)
        dev.gate_rising(456)
        assert run.now_mu() == 456
