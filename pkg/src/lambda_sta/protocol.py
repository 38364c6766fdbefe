"""Drive-protocol construction for the three-level Lambda system.

Two protocol families are provided:

* the shortcut protocol built from a single frame rotation, with winding
  integer m, constant mixing angle mu and the closed-form analytic state
  that goes with it;
* the counter-intuitively ordered Gaussian pulse pair used as the
  adiabatic (STIRAP) baseline.

Conventions: hbar = 1, all rates in units of 1/T, basis {|1>, |2>, |3>}.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

# SU(2)-like generator triple: G1 couples 1-2, G2 couples 2-3, G3 couples
# 1-3 with the imaginary phase.  [G1,G2]=iG3, [G2,G3]=iG1, [G3,G1]=iG2.
G1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
G2 = np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
G3 = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex)

KET_1 = np.array([1, 0, 0], dtype=complex)
KET_2 = np.array([0, 1, 0], dtype=complex)
KET_3 = np.array([0, 0, 1], dtype=complex)


class InvalidWinding(ValueError):
    pass


class InvalidParameters(ValueError):
    pass


class DegeneratePulse(ValueError):
    pass


class TimeOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class Generators:
    """The constant generator triple as a value object."""

    g1: np.ndarray = field(default_factory=lambda: G1.copy())
    g2: np.ndarray = field(default_factory=lambda: G2.copy())
    g3: np.ndarray = field(default_factory=lambda: G3.copy())


def build_hamiltonian(omega1, omega2):
    """Lambda-system Hamiltonian: omega1 drives 1-2, omega2 drives 2-3."""
    return omega1 * G1 + omega2 * G2


def m_eigenbasis(phi):
    """Eigenvectors (xi0, xi+, xi-) of sin(phi) G1 + cos(phi) G2.

    Eigenvalues are 0, +1, -1 respectively, for every phi.
    """
    s, c = math.sin(phi), math.cos(phi)
    xi0 = np.array([c, 0, -s], dtype=complex)
    xip = np.array([s, 1, c], dtype=complex) / math.sqrt(2)
    xim = np.array([s, -1, c], dtype=complex) / math.sqrt(2)
    return xi0, xip, xim


@dataclass(frozen=True)
class FrameMatch:
    """Drive parameters read off from the rotating-frame generator.

    gamma is the effective Rabi rate, delta the mixing-angle offset,
    epsilon_dot the rate of the frame angle; omega == gamma by
    construction and theta is the in-plane drive angle.
    """

    omega: float
    theta: float
    epsilon_dot: float
    gamma: float
    delta: float


def frame_match(mu, mu_dot, phi, phi_dot, epsilon=0.0):
    """Match the rotating-frame generator to a physical drive.

    ``epsilon`` is the accumulated frame angle (the time integral of
    ``epsilon_dot``); it shifts ``theta`` back into the lab frame.
    """
    gamma = math.hypot(mu_dot, phi_dot * math.sin(mu))
    delta = math.atan2(mu_dot, phi_dot * math.sin(mu))
    epsilon_dot = phi_dot * (1.0 - math.cos(mu))
    theta = phi - delta - math.pi / 2 - epsilon
    return FrameMatch(omega=gamma, theta=theta, epsilon_dot=epsilon_dot,
                      gamma=gamma, delta=delta)


@dataclass(frozen=True)
class StaProtocol:
    """Constant-mu shortcut protocol with winding integer m.

    phi ramps smoothly from 0 to m*pi with vanishing endpoint slope, so
    both drive amplitudes vanish at t=0 and t=T.  kappa = 1 - cos(mu)
    fixes the intermediate-state population ceiling 2*kappa - kappa^2.
    """

    m: int
    kappa: float
    mu: float
    duration: float

    def phi(self, t):
        return (self.m * math.pi / 2) * (1 - np.cos(np.pi * np.asarray(t) / self.duration))

    def phi_dot(self, t):
        return (self.m * math.pi**2 / (2 * self.duration)) * np.sin(np.pi * np.asarray(t) / self.duration)

    def epsilon(self, t):
        return self.kappa * self.phi(t)

    def theta(self, t):
        return (1.0 - self.kappa) * self.phi(t) - math.pi / 2

    def omega(self, t):
        return np.abs(self.phi_dot(t)) * math.sin(self.mu)

    def omega1(self, t):
        return self.omega(t) * np.sin(self.theta(t))

    def omega2(self, t):
        return self.omega(t) * np.cos(self.theta(t))


def design_sta(m, duration=1.0, kappa=None):
    """Design the shortcut protocol for winding m over [0, duration].

    With the default kappa = 1/(2m) the final state is exactly |3>.  An
    explicit kappa in (0, 2) overrides the default (the transfer is then
    partial, final P3 = sin^2(kappa*m*pi)).
    """
    if int(m) != m or m < 1:
        raise InvalidWinding(f"winding must be a positive integer, got {m}")
    if duration <= 0:
        raise InvalidParameters(f"duration must be positive, got {duration}")
    if kappa is None:
        kappa = 1.0 / (2 * m)
    if not 0 < kappa < 2:
        raise InvalidParameters(f"kappa must lie in (0, 2), got {kappa}")
    return StaProtocol(m=int(m), kappa=float(kappa),
                       mu=math.acos(1.0 - kappa), duration=float(duration))


def analytic_state_constant_mu(p, t):
    """Closed-form state of the constant-mu protocol at time t."""
    if not 0 <= t <= p.duration:
        raise TimeOutOfRange(f"t={t} outside [0, {p.duration}]")
    k = p.kappa
    phi = float(p.phi(t))
    sp, cp = math.sin(phi), math.cos(phi)
    ske, cke = math.sin(k * phi), math.cos(k * phi)
    c1 = cke * (1 - k * sp**2) + k * ske * sp * cp
    c2 = 1j * math.sqrt(2 * k - k * k) * sp
    c3 = ske * (1 - k * sp**2) - k * cke * sp * cp
    return np.array([c1, c2, c3], dtype=complex)


def analytic_state_general(phi, epsilon, mu):
    """State for arbitrary (phi, epsilon, mu); epsilon must be the frame
    angle accumulated from phi_dot*(1-cos mu) with epsilon(0)=phi(0)=0."""
    sp, cp = math.sin(phi), math.cos(phi)
    se, ce = math.sin(epsilon), math.cos(epsilon)
    cm = math.cos(mu)
    a = cp * cp + sp * sp * cm
    b = sp * cp * (cm - 1)
    c1 = ce * a - se * b
    c2 = 1j * sp * math.sin(mu)
    c3 = ce * b + se * a
    return np.array([c1, c2, c3], dtype=complex)


@dataclass(frozen=True)
class StirapProtocol:
    """Counter-intuitively ordered Gaussian pulse pair on [0, duration].

    omega1 (driving 1-2) peaks at T/2 + t0, after omega2 (driving 2-3)
    which peaks at T/2 - t0, as required for the 1 -> 3 transfer through
    the dark state.
    """

    omega0: float
    t0: float
    tc: float
    duration: float

    def omega1(self, t):
        u = (np.asarray(t) - self.t0 - self.duration / 2) / self.tc
        return self.omega0 * np.exp(-u * u)

    def omega2(self, t):
        u = (np.asarray(t) + self.t0 - self.duration / 2) / self.tc
        return self.omega0 * np.exp(-u * u)


def design_stirap(omega0, t0=None, tc=None, duration=1.0):
    """Reference Gaussian STIRAP pair; defaults t0=0.15T, tc=0.20T."""
    if t0 is None:
        t0 = 0.15 * duration
    if tc is None:
        tc = 0.20 * duration
    if omega0 <= 0 or tc <= 0 or not 0 < t0 < duration / 2 or duration <= 0:
        raise InvalidParameters(
            f"bad STIRAP parameters omega0={omega0}, t0={t0}, tc={tc}, T={duration}")
    return StirapProtocol(omega0=float(omega0), t0=float(t0), tc=float(tc),
                          duration=float(duration))


def dark_state(omega1, omega2):
    """Zero-eigenvalue eigenstate of the Lambda Hamiltonian."""
    norm = math.hypot(omega1, omega2)
    if norm == 0:
        raise DegeneratePulse("both drive amplitudes are zero")
    return np.array([omega2, 0, -omega1], dtype=complex) / norm


def protocol_to_json(p):
    """Serialize a protocol to the interchange JSON document."""
    if isinstance(p, StaProtocol):
        doc = {"type": "sta", "m": p.m, "kappa": p.kappa, "mu": p.mu,
               "T": p.duration}
    elif isinstance(p, StirapProtocol):
        doc = {"type": "stirap", "omega0": p.omega0, "t0": p.t0,
               "tc": p.tc, "T": p.duration}
    else:
        raise TypeError(f"not a protocol: {type(p)!r}")
    return json.dumps(doc, indent=2)


def protocol_from_json(text):
    """Rebuild a protocol from its JSON document; missing fields default
    as in design_sta / design_stirap."""
    doc = json.loads(text)
    kind = doc.get("type")
    duration = doc.get("T", 1.0)
    if kind == "sta":
        return design_sta(doc.get("m", 1), duration, kappa=doc.get("kappa"))
    if kind == "stirap":
        return design_stirap(doc.get("omega0", 45.0 / duration),
                             doc.get("t0"), doc.get("tc"), duration)
    raise InvalidParameters(f"unknown protocol type {kind!r}")
