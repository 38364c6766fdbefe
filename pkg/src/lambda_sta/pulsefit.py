"""Fit sampled drive schedules to signed sums of Gaussian components.

The model is f(t) = sum_i zeta_i * exp(-((t - tau_i)/chi_i)^2), fitted by
damped nonlinear least squares (trust-region reflective) with the analytic
Jacobian.  The signed schedule is fitted directly, so components carry the
sign of the lobe they cover.
"""

import json
import math
from dataclasses import dataclass, asdict
from typing import List

import numpy as np
from scipy.optimize import least_squares

from .dynamics import PulsePair


class NoConvergence(RuntimeError):
    pass


class DegenerateSamples(ValueError):
    pass


@dataclass(frozen=True)
class GaussianComponent:
    amplitude: float  # zeta, 1/time, signed
    center: float     # tau
    width: float      # chi > 0

    def __post_init__(self):
        if self.width <= 0 or not math.isfinite(self.amplitude):
            raise ValueError(f"bad component {self}")


@dataclass(frozen=True)
class GaussianPulse:
    components: tuple

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in self.components:
            u = (t - c.center) / c.width
            out += c.amplitude * np.exp(-u * u)
        return out

    def scaled(self, factor):
        return GaussianPulse(tuple(
            GaussianComponent(factor * c.amplitude, c.center, c.width)
            for c in self.components))


@dataclass(frozen=True)
class FitReport:
    rms_residual: float
    max_residual: float
    peak_amplitude: float
    iterations: int
    converged: bool


def pulse_to_json(pulse, report=None):
    doc = {"components": [{"zeta": c.amplitude, "tau": c.center,
                           "chi": c.width} for c in pulse.components]}
    if report is not None:
        doc["fit_report"] = asdict(report)
    return json.dumps(doc, indent=2)


def pulse_from_json(text):
    doc = json.loads(text)
    return GaussianPulse(tuple(
        GaussianComponent(c["zeta"], c["tau"], c["chi"])
        for c in doc["components"]))


def reference_m1_fit(duration=1.0):
    """Published two-component decomposition of the m=1 schedules.

    Returns (pulse1, pulse2) scaled to the given protocol duration.
    Serves as the regression fixture the in-repo fitter is checked
    against.
    """
    T = duration
    p1 = GaussianPulse((
        GaussianComponent(-3.194 / T, 0.4396 * T, 0.2476 * T),
        GaussianComponent(-1.275 / T, 0.2159 * T, 0.1581 * T),
    ))
    p2 = GaussianPulse((
        GaussianComponent(3.194 / T, 0.5604 * T, 0.2476 * T),
        GaussianComponent(1.275 / T, 0.7841 * T, 0.1581 * T),
    ))
    return p1, p2


def fitted_pulse_pair(p1, p2, tag="gaussian-fit"):
    return PulsePair(omega1=p1, omega2=p2, tag=tag)


def _model_and_jacobian(params, t):
    n = len(params) // 3
    zeta, tau, chi = params[:n], params[n:2 * n], params[2 * n:]
    u = (t[:, None] - tau[None, :]) / chi[None, :]
    g = np.exp(-u * u)
    y = g @ zeta
    jac = np.empty((len(t), 3 * n))
    jac[:, :n] = g
    jac[:, n:2 * n] = zeta * g * 2 * u / chi
    jac[:, 2 * n:] = zeta * g * 2 * u * u / chi
    return y, jac


def _initial_guess(t, y, n):
    """Seed components on the largest lobes of the sampled signal.

    Centers go to local extrema of |y| sorted by magnitude; if the signal
    has fewer lobes than components, extra centers fall on the half-maximum
    shoulders of the dominant lobe.  Widths default to a fifth of the span.
    """
    span = t[-1] - t[0]
    mag = np.abs(y)
    interior = np.flatnonzero((mag[1:-1] >= mag[:-2]) & (mag[1:-1] >= mag[2:])) + 1
    interior = [i for i in interior if mag[i] > 0.05 * mag.max()]
    centers = sorted(interior, key=lambda i: -mag[i])[:n]
    if len(centers) < n:
        peak = int(np.argmax(mag))
        half = np.flatnonzero(np.diff(np.sign(mag - 0.5 * mag.max())) != 0)
        shoulders = sorted(half, key=lambda i: -abs(i - peak))
        for i in shoulders:
            if len(centers) >= n:
                break
            if all(abs(t[i] - t[j]) > 0.02 * span for j in centers):
                centers.append(i)
    while len(centers) < n:
        centers.append(int(len(t) * (len(centers) + 1) / (n + 1)))

    zeta = y[centers]
    tau = t[centers]
    chi = np.full(n, 0.2 * span)
    return np.concatenate([zeta, tau, chi])


def fit_gaussian_sum(samples, n_components=2, init=None):
    """Least-squares fit of a sampled schedule by n Gaussian components.

    `samples` is a sequence of (time, value) pairs or a pair of arrays.
    Returns the fitted pulse together with a FitReport; on failure to
    converge the best-so-far pulse is returned with the flag down.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 2 and samples.shape[1] == 2:
        t, y = samples[:, 0], samples[:, 1]
    else:
        t, y = samples
    if n_components < 1:
        raise ValueError("need at least one component")
    if len(t) < 30 * n_components:
        raise ValueError(f"need at least {30 * n_components} samples for "
                         f"{n_components} components, got {len(t)}")
    if np.abs(y).max() == 0:
        raise DegenerateSamples("all sample values are zero")

    if init is not None:
        x0 = np.concatenate([[c.amplitude for c in init.components],
                             [c.center for c in init.components],
                             [c.width for c in init.components]])
        n_components = len(init.components)
    else:
        x0 = _initial_guess(t, y, n_components)

    n = n_components
    span = t[-1] - t[0]
    lower = np.concatenate([np.full(n, -np.inf), np.full(n, t[0] - span),
                            np.full(n, 1e-4 * span)])
    upper = np.concatenate([np.full(n, np.inf), np.full(n, t[-1] + span),
                            np.full(n, 2 * span)])
    x0 = np.clip(x0, lower + 1e-12, upper - 1e-12)

    res = least_squares(
        lambda p: _model_and_jacobian(p, t)[0] - y, x0,
        jac=lambda p: _model_and_jacobian(p, t)[1],
        bounds=(lower, upper), method="trf",
        ftol=1e-12, xtol=1e-12, gtol=1e-12, max_nfev=500 * (3 * n))

    params = res.x
    pulse = GaussianPulse(tuple(
        GaussianComponent(params[i], params[n + i], params[2 * n + i])
        for i in range(n)))
    resid = pulse(t) - y
    report = FitReport(
        rms_residual=float(np.sqrt(np.mean(resid ** 2))),
        max_residual=float(np.abs(resid).max()),
        peak_amplitude=float(np.abs(pulse(t)).max()),
        iterations=int(res.nfev),
        converged=bool(res.status > 0))
    return pulse, report


def pulse_amplitude(p1, p2, grid=1001, duration=1.0):
    """Max absolute drive amplitude over a uniform grid on [0, duration]."""
    if grid < 100:
        raise ValueError(f"need at least 100 grid points, got {grid}")
    t = np.linspace(0.0, duration, grid)
    return float(max(np.abs(p1(t)).max(), np.abs(p2(t)).max()))
