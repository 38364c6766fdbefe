"""Quantitative studies: robustness sweeps, the adiabatic-baseline
infidelity curve, decoherence maps and the amplitude/population table.

All sweeps are deterministic for fixed inputs and step counts, and every
result carries plain arrays ready for CSV emission.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .protocol import design_sta, design_stirap
from .dynamics import (LindbladRates, propagate_schrodinger,
                       propagate_lindblad, stirap_pulses)
from .pulsefit import (fit_gaussian_sum, fitted_pulse_pair, pulse_amplitude)

SWEEP_KINDS = ("timing-error", "amp1-error", "amp2-error",
               "stirap-amplitude", "relaxation-pair", "dephasing-pair")


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a 1-D or 2-D sweep."""

    kind: str
    minimum: float
    maximum: float
    points: int

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        if self.points < 2 or not self.minimum < self.maximum:
            raise ValueError(f"bad sweep range {self}")

    def grid(self):
        return np.linspace(self.minimum, self.maximum, self.points)


@dataclass(frozen=True)
class TableRow:
    winding_phase: float      # |phi(T)| = m*pi
    pulse_amplitude: float    # fitted peak amplitude, 1/T
    p2_max: float             # 2*kappa - kappa^2
    transfer_infidelity: float
    fit_converged: bool


def _pmap(fn, items, jobs=1):
    """Map preserving input order, optionally on a thread pool."""
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def timing_error_sweep(pulses, error_range=0.1, points=21, duration=1.0,
                       steps=10_000, jobs=1):
    """Final target population when the interaction time is off by a
    relative error delta: integrate to T' = T*(1+delta) with the nominal
    pulse parameters frozen."""
    if error_range > 0.2:
        raise ValueError("timing error range limited to 20%")
    deltas = np.linspace(-error_range, error_range, points)

    def point(d):
        horizon = duration * (1 + d)
        if horizon <= 0:
            return (float(d), 0.0)
        tr = propagate_schrodinger(pulses, horizon=horizon, steps=steps)
        return (float(d), float(tr.final_populations[2]))

    return _pmap(point, deltas, jobs)


def amplitude_error_sweep(pulses, which=1, error_range=0.1, points=21,
                          duration=1.0, steps=10_000, jobs=1):
    """Final target population when one drive amplitude is scaled by
    (1+delta) while the other stays nominal."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    deltas = np.linspace(-error_range, error_range, points)

    def point(d):
        scaled = pulses.scaled(1 + d, 1) if which == 1 else pulses.scaled(1, 1 + d)
        tr = propagate_schrodinger(scaled, horizon=duration, steps=steps)
        return (float(d), float(tr.final_populations[2]))

    return _pmap(point, deltas, jobs)


def stirap_infidelity_curve(t0=None, tc=None, duration=1.0, amplitudes=None,
                            steps=10_000, jobs=1):
    """Final-state infidelity of the Gaussian adiabatic pair versus its
    peak amplitude."""
    if amplitudes is None:
        amplitudes = np.linspace(1.0, 80.0, 50) / duration

    def point(om0):
        proto = design_stirap(om0, t0, tc, duration)
        tr = propagate_schrodinger(stirap_pulses(proto), horizon=duration,
                                   steps=steps)
        return (float(om0), float(1 - tr.final_populations[2]))

    return _pmap(point, amplitudes, jobs)


def decoherence_map(pulses, mode, max_ratio=0.01, grid=21, amplitude=None,
                    duration=1.0, steps=2000, jobs=1):
    """P3(T) over a grid of (rate1, rate2) pairs expressed as fractions of
    the pulse amplitude.

    mode selects relaxation (both decay paths) or dephasing (both phase
    channels).  Returns (ratios, matrix) with matrix[i, j] the final
    population at rate1 = ratios[i], rate2 = ratios[j].
    """
    if mode not in ("relaxation", "dephasing"):
        raise ValueError(f"mode must be relaxation or dephasing, got {mode!r}")
    if max_ratio > 0.05:
        raise ValueError("decoherence ratios limited to 5%")
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    if amplitude is None:
        t = np.linspace(0, duration, 1001)
        amplitude = float(max(np.abs(pulses.omega1(t)).max(),
                              np.abs(pulses.omega2(t)).max()))
    ratios = np.linspace(0.0, max_ratio, grid)

    def point(pair):
        r1, r2 = pair
        if mode == "relaxation":
            rates = LindbladRates(gamma1=r1 * amplitude, gamma2=r2 * amplitude)
        else:
            rates = LindbladRates(gamma_phi1=r1 * amplitude,
                                  gamma_phi2=r2 * amplitude)
        tr = propagate_lindblad(pulses, rates=rates, horizon=duration,
                                steps=steps)
        return tr.final_populations[2]

    pairs = [(r1, r2) for r1 in ratios for r2 in ratios]
    values = _pmap(point, pairs, jobs)
    return ratios, np.array(values).reshape(grid, grid)


def fit_protocol_pulses(protocol, n_components=None, samples=1001):
    """Fit both drive schedules of a shortcut protocol.

    Higher windings produce more sign lobes, so the default component
    count grows with m (m+1 per pulse, minimum 2).
    """
    if n_components is None:
        n_components = max(2, protocol.m + 1)
    t = np.linspace(0.0, protocol.duration, samples)
    f1, r1 = fit_gaussian_sum((t, protocol.omega1(t)), n_components)
    f2, r2 = fit_gaussian_sum((t, protocol.omega2(t)), n_components)
    return (f1, r1), (f2, r2)


def table_one(max_m=7, fit_budget=None, duration=1.0, steps=10_000):
    """Fitted pulse amplitude and intermediate-population ceiling per
    winding m = 1..max_m; each row also records the transfer infidelity
    obtained when simulating with the fitted pulses."""
    if max_m > 10:
        raise ValueError("windings above 10 are not supported")
    rows = []
    for m in range(1, max_m + 1):
        p = design_sta(m, duration)
        (f1, r1), (f2, r2) = fit_protocol_pulses(p, fit_budget)
        amp = pulse_amplitude(f1, f2, 2001, duration)
        tr = propagate_schrodinger(fitted_pulse_pair(f1, f2),
                                   horizon=duration, steps=steps)
        rows.append(TableRow(
            winding_phase=m * math.pi,
            pulse_amplitude=amp,
            p2_max=2 * p.kappa - p.kappa ** 2,
            transfer_infidelity=float(1 - tr.final_populations[2]),
            fit_converged=r1.converged and r2.converged))
    return rows


def stirap_dephasing_check(duration=1.0, steps=10_000):
    """Final target population of the reference adiabatic protocol
    (amplitude 45/T) with both dephasing ratios at 1%."""
    proto = design_stirap(45.0 / duration, duration=duration)
    rates = LindbladRates(gamma_phi1=0.01 * proto.omega0,
                          gamma_phi2=0.01 * proto.omega0)
    tr = propagate_lindblad(stirap_pulses(proto), rates=rates,
                            horizon=duration, steps=steps)
    return float(tr.final_populations[2])


def write_sweep_csv(path, pairs, x_name, y_name="P3"):
    with open(path, "w") as fh:
        fh.write(f"{x_name},{y_name}\n")
        for x, y in pairs:
            fh.write(f"{x:.12g},{y:.12g}\n")


def write_map_csv(path, ratios, matrix, x_name, y_name):
    with open(path, "w") as fh:
        fh.write(f"{x_name},{y_name},P3\n")
        for i, r1 in enumerate(ratios):
            for j, r2 in enumerate(ratios):
                fh.write(f"{r1:.12g},{r2:.12g},{matrix[i, j]:.12g}\n")


def write_table_csv(path, rows):
    with open(path, "w") as fh:
        fh.write("phiT_over_pi,omega_tilde_0_T,P2max\n")
        for r in rows:
            fh.write(f"{r.winding_phase / math.pi:.12g},"
                     f"{r.pulse_amplitude:.12g},{r.p2_max:.12g}\n")


def format_table(rows):
    """Aligned text rendering of the winding/amplitude/population table."""
    lines = [f"{'|phi(T)|':>10} {'amp*T':>8} {'P2max':>8}"]
    for r in rows:
        lines.append(f"{r.winding_phase / math.pi:>9.0f}p "
                     f"{r.pulse_amplitude:>8.2f} {r.p2_max:>8.4f}")
    return "\n".join(lines)
