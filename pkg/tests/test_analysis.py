import math

import numpy as np
import pytest

from lambda_sta.analysis import (SweepSpec, amplitude_error_sweep,
                                 decoherence_map, stirap_infidelity_curve,
                                 table_one, timing_error_sweep,
                                 write_map_csv, write_sweep_csv,
                                 write_table_csv, format_table)
from lambda_sta.pulsefit import pulse_amplitude, reference_m1_fit

STEPS = 2000  # integration error far below every tolerance used here


class TestSweepSpec:
    def test_grid(self):
        spec = SweepSpec("timing-error", -0.1, 0.1, 5)
        assert np.allclose(spec.grid(), np.linspace(-0.1, 0.1, 5))

    def test_rejects_bad_kind(self):
        with pytest.raises(ValueError):
            SweepSpec("nope", 0, 1, 3)

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            SweepSpec("timing-error", 0.2, 0.1, 3)
        with pytest.raises(ValueError):
            SweepSpec("timing-error", 0.0, 0.1, 1)


class TestTimingErrorSweep:
    def test_nominal_point_is_nominal(self, reference_pulses):
        data = timing_error_sweep(reference_pulses, 0.1, 3, steps=STEPS)
        deltas = [d for d, _ in data]
        assert deltas == [-0.1, 0.0, 0.1]
        nominal = dict(data)[0.0]
        assert nominal >= 0.9999

    def test_ten_percent_window(self, reference_pulses):
        data = timing_error_sweep(reference_pulses, 0.1, 11, steps=STEPS)
        assert min(p3 for _, p3 in data) >= 0.9956 - 0.002

    def test_range_cap(self, reference_pulses):
        with pytest.raises(ValueError):
            timing_error_sweep(reference_pulses, 0.5, 3)

    def test_jobs_preserve_order(self, reference_pulses):
        serial = timing_error_sweep(reference_pulses, 0.1, 5, steps=STEPS)
        threaded = timing_error_sweep(reference_pulses, 0.1, 5, steps=STEPS,
                                      jobs=4)
        assert serial == threaded


class TestAmplitudeErrorSweep:
    def test_ten_percent_window(self, reference_pulses):
        for which in (1, 2):
            data = amplitude_error_sweep(reference_pulses, which, 0.1, 5,
                                         steps=STEPS)
            assert min(p3 for _, p3 in data) >= 0.9745 - 0.002

    def test_pulse_sweeps_coincide(self, reference_pulses):
        a = amplitude_error_sweep(reference_pulses, 1, 0.1, 7, steps=STEPS)
        b = amplitude_error_sweep(reference_pulses, 2, 0.1, 7, steps=STEPS)
        for (_, pa), (_, pb) in zip(a, b):
            assert abs(pa - pb) < 1e-3

    def test_killed_pulse_breaks_transfer(self, reference_pulses):
        data = amplitude_error_sweep(reference_pulses, 1, 1.0, 3, steps=STEPS)
        assert dict(data)[-1.0] < 0.5

    def test_bad_index(self, reference_pulses):
        with pytest.raises(ValueError):
            amplitude_error_sweep(reference_pulses, 3)


class TestStirapCurve:
    def test_anchor_values(self):
        data = stirap_infidelity_curve(amplitudes=[3.5, 70.0], steps=10_000)
        infid = dict(data)
        assert infid[70.0] == pytest.approx(0.0002, abs=1e-4)
        assert infid[3.5] == pytest.approx(0.9906, abs=0.005)

    def test_vanishing_drive(self):
        data = stirap_infidelity_curve(amplitudes=[0.05], steps=STEPS)
        assert data[0][1] > 0.999


class TestDecoherenceMap:
    def test_zero_corner_is_closed_system(self, reference_pulses):
        ratios, grid = decoherence_map(reference_pulses, "relaxation",
                                       0.01, 2, steps=STEPS)
        assert ratios[0] == 0.0
        assert grid[0, 0] >= 0.9999

    def test_monotone_in_rates(self, reference_pulses):
        _, grid = decoherence_map(reference_pulses, "dephasing", 0.01, 3,
                                  steps=STEPS)
        assert grid[0, 0] >= grid[1, 1] >= grid[2, 2]

    def test_mode_and_bounds_validation(self, reference_pulses):
        with pytest.raises(ValueError):
            decoherence_map(reference_pulses, "thermal")
        with pytest.raises(ValueError):
            decoherence_map(reference_pulses, "relaxation", max_ratio=0.2)
        with pytest.raises(ValueError):
            decoherence_map(reference_pulses, "relaxation", grid=1)


class TestTableOne:
    def test_first_three_rows(self):
        rows = table_one(3, steps=4000)
        assert [r.p2_max for r in rows] == pytest.approx(
            [0.75, 0.4375, 0.3056], abs=5e-5)
        assert rows[0].pulse_amplitude == pytest.approx(3.5, rel=0.03)
        assert rows[1].pulse_amplitude == pytest.approx(6.2, rel=0.10)
        assert rows[2].pulse_amplitude == pytest.approx(8.0, rel=0.10)
        for r in rows:
            assert r.transfer_infidelity <= 1e-3

    def test_tradeoff_monotonicity(self):
        rows = table_one(4, steps=4000)
        amps = [r.pulse_amplitude for r in rows]
        p2 = [r.p2_max for r in rows]
        assert all(a < b for a, b in zip(amps, amps[1:]))
        assert all(a > b for a, b in zip(p2, p2[1:]))

    def test_max_m_cap(self):
        with pytest.raises(ValueError):
            table_one(11)


def test_simulated_p2_max_matches_ceiling(sta_m1):
    from lambda_sta.dynamics import propagate_schrodinger, sta_pulses
    traj = propagate_schrodinger(sta_pulses(sta_m1), steps=4000, stride=4)
    ceiling = 2 * sta_m1.kappa - sta_m1.kappa ** 2
    assert traj.populations[:, 1].max() == pytest.approx(ceiling, abs=1e-6)


class TestCsvWriters:
    def test_sweep_csv(self, tmp_path):
        path = tmp_path / "s.csv"
        write_sweep_csv(path, [(0.0, 1.0), (0.1, 0.5)], "dT_over_T")
        lines = path.read_text().splitlines()
        assert lines == ["dT_over_T,P3", "0,1", "0.1,0.5"]

    def test_map_csv(self, tmp_path):
        path = tmp_path / "m.csv"
        write_map_csv(path, np.array([0.0, 0.01]), np.ones((2, 2)),
                      "Gamma1_over_amp", "Gamma2_over_amp")
        lines = path.read_text().splitlines()
        assert lines[0] == "Gamma1_over_amp,Gamma2_over_amp,P3"
        assert len(lines) == 5

    def test_table_csv_and_text(self, tmp_path):
        rows = table_one(2, steps=4000)
        path = tmp_path / "t.csv"
        write_table_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == "phiT_over_pi,omega_tilde_0_T,P2max"
        assert len(lines) == 3
        assert float(lines[1].split(",")[0]) == 1.0
        text = format_table(rows)
        assert "P2max" in text

    def test_deterministic_sweep_output(self, tmp_path, reference_pulses):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            data = timing_error_sweep(reference_pulses, 0.05, 3, steps=1000)
            write_sweep_csv(path, data, "dT_over_T")
        assert a.read_bytes() == b.read_bytes()
