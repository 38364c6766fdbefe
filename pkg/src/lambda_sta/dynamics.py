"""Time propagation for pulse-driven three-level dynamics.

Closed-system evolution uses a piecewise-constant midpoint propagator:
each step applies exp(-i H(t_mid) dt) built from the exact spectral
exponential, so the norm is conserved to machine precision and the norm
drift doubles as an integration diagnostic.  Open-system evolution
integrates the Lindblad master equation with fixed-step RK4 on the
vectorized density matrix.
"""

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .protocol import build_hamiltonian

EYE3 = np.eye(3, dtype=complex)


class InvalidState(ValueError):
    pass


class InvalidSteps(ValueError):
    pass


class InvalidDensity(ValueError):
    pass


class InvalidRates(ValueError):
    pass


class NegativeRate(ValueError):
    pass


@dataclass(frozen=True)
class PulsePair:
    """A pair of drive schedules t -> (omega1, omega2), tagged by origin."""

    omega1: Callable
    omega2: Callable
    tag: str = "custom"

    def scaled(self, factor1=1.0, factor2=1.0):
        """Same pulses with each amplitude multiplied by a constant."""
        o1, o2 = self.omega1, self.omega2
        return PulsePair(omega1=lambda t: factor1 * o1(t),
                         omega2=lambda t: factor2 * o2(t),
                         tag=self.tag)


def sta_pulses(p):
    return PulsePair(omega1=p.omega1, omega2=p.omega2, tag="sta-analytic")


def stirap_pulses(p):
    return PulsePair(omega1=p.omega1, omega2=p.omega2, tag="stirap")


@dataclass(frozen=True)
class LindbladRates:
    """Downward relaxation (2->1, 2->3) and dephasing (2-1, 2-3) rates."""

    gamma1: float = 0.0
    gamma2: float = 0.0
    gamma_phi1: float = 0.0
    gamma_phi2: float = 0.0

    def __post_init__(self):
        if min(self.gamma1, self.gamma2, self.gamma_phi1, self.gamma_phi2) < 0:
            raise InvalidRates(f"rates must be non-negative: {self}")


def lindblad_operators(rates):
    """The four jump operators for the relaxation/dephasing model."""
    if min(rates.gamma1, rates.gamma2, rates.gamma_phi1, rates.gamma_phi2) < 0:
        raise NegativeRate(f"rates must be non-negative: {rates}")
    l1 = np.zeros((3, 3), dtype=complex)
    l1[0, 1] = np.sqrt(rates.gamma1)
    l2 = np.zeros((3, 3), dtype=complex)
    l2[2, 1] = np.sqrt(rates.gamma2)
    l3 = np.sqrt(rates.gamma_phi1) * np.diag([-1, 1, 0]).astype(complex)
    l4 = np.sqrt(rates.gamma_phi2) * np.diag([0, 1, -1]).astype(complex)
    return l1, l2, l3, l4


@dataclass
class Trajectory:
    """Time-ordered population samples plus the final state/density matrix."""

    times: np.ndarray
    populations: np.ndarray  # shape (n, 3)
    duration: float
    steps: int
    final_state: Optional[np.ndarray] = None
    final_density: Optional[np.ndarray] = None
    states: Optional[np.ndarray] = None

    @property
    def final_populations(self):
        return self.populations[-1]

    def to_csv(self, path):
        write_population_csv(path, self.times / self.duration, self.populations)


def write_population_csv(path, t_over_T, populations):
    """`t_over_T,P1,P2,P3` rows at 12 significant digits."""
    with open(path, "w") as fh:
        fh.write("t_over_T,P1,P2,P3\n")
        for x, (p1, p2, p3) in zip(t_over_T, populations):
            fh.write(f"{x:.12g},{p1:.12g},{p2:.12g},{p3:.12g}\n")


def _hamiltonians_at(pulses, times):
    """Stack of Hamiltonians H(t) for an array of times."""
    o1 = np.asarray(pulses.omega1(times), dtype=float)
    o2 = np.asarray(pulses.omega2(times), dtype=float)
    if not (np.all(np.isfinite(o1)) and np.all(np.isfinite(o2))):
        raise ValueError("pulse evaluation produced non-finite values")
    h = np.zeros((len(times), 3, 3), dtype=complex)
    h[:, 0, 1] = h[:, 1, 0] = o1
    h[:, 1, 2] = h[:, 2, 1] = o2
    return h


def propagate_schrodinger(pulses, initial=None, horizon=1.0, steps=10_000,
                          stride=1, keep_states=False):
    """Propagate the Schrodinger equation under a pulse pair.

    Samples populations every `stride` steps (plus t=0 and t=horizon).
    """
    if steps < 100:
        raise InvalidSteps(f"need at least 100 steps, got {steps}")
    if initial is None:
        initial = np.array([1, 0, 0], dtype=complex)
    psi = np.asarray(initial, dtype=complex).copy()
    if psi.shape != (3,) or abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise InvalidState("initial state must be a unit-norm 3-vector")

    dt = horizon / steps
    mid = (np.arange(steps) + 0.5) * dt
    h = _hamiltonians_at(pulses, mid)
    # batched spectral exponential: U_k = V diag(e^{-i w dt}) V^dag
    w, v = np.linalg.eigh(h)
    u = np.einsum("kij,kj,klj->kil", v, np.exp(-1j * w * dt), v.conj())

    sample_idx = [0]
    times = [0.0]
    pops = [np.abs(psi) ** 2]
    states = [psi.copy()] if keep_states else None
    for k in range(steps):
        psi = u[k] @ psi
        if (k + 1) % stride == 0 or k == steps - 1:
            times.append((k + 1) * dt)
            pops.append(np.abs(psi) ** 2)
            if keep_states:
                states.append(psi.copy())
            sample_idx.append(k + 1)

    return Trajectory(times=np.array(times), populations=np.array(pops),
                      duration=horizon, steps=steps, final_state=psi,
                      states=np.array(states) if keep_states else None)


def _dissipator_matrix(rates):
    """Constant superoperator for the jump terms, acting on the row-major
    vectorized density matrix (vec(A rho B) = (A kron B^T) vec(rho))."""
    d = np.zeros((9, 9), dtype=complex)
    for l in lindblad_operators(rates):
        ldl = l.conj().T @ l
        d += np.kron(l, l.conj())
        d -= 0.5 * (np.kron(ldl, EYE3) + np.kron(EYE3, ldl.T))
    return d


def propagate_lindblad(pulses, initial=None, rates=None, horizon=1.0,
                       steps=10_000, stride=None):
    """Integrate the Lindblad master equation with fixed-step RK4.

    The coherent part uses the convention rho_dot = i[rho, H].
    """
    if steps < 1000:
        raise InvalidSteps(f"need at least 1000 steps, got {steps}")
    if initial is None:
        initial = np.diag([1.0, 0, 0]).astype(complex)
    rho = np.asarray(initial, dtype=complex)
    if rho.shape != (3, 3) or np.abs(rho - rho.conj().T).max() > 1e-10 \
            or abs(np.trace(rho).real - 1) > 1e-10 \
            or np.linalg.eigvalsh(rho).min() < -1e-10:
        raise InvalidDensity("initial density matrix must be Hermitian, "
                             "unit-trace and PSD")
    rates = rates or LindbladRates()
    diss = _dissipator_matrix(rates)

    dt = horizon / steps
    # coherent generator at step endpoints and midpoints
    grid = np.arange(2 * steps + 1) * (dt / 2)
    h = _hamiltonians_at(pulses, grid)
    # i(rho H - H rho) -> i((I kron H^T) - (H kron I)); H here is symmetric
    a = 1j * (np.einsum("ij,klm->kiljm", np.eye(3), h).reshape(-1, 9, 9)
              - np.einsum("kij,lm->kiljm", h, np.eye(3)).reshape(-1, 9, 9))
    a += diss

    if stride is None:
        stride = max(1, steps // 1000)
    r = rho.reshape(9).copy()
    times = [0.0]
    pops = [np.real(np.diag(rho)).copy()]
    for k in range(steps):
        m0, m1, m2 = a[2 * k], a[2 * k + 1], a[2 * k + 2]
        k1 = m0 @ r
        k2 = m1 @ (r + 0.5 * dt * k1)
        k3 = m1 @ (r + 0.5 * dt * k2)
        k4 = m2 @ (r + dt * k3)
        r = r + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (k + 1) % stride == 0 or k == steps - 1:
            times.append((k + 1) * dt)
            pops.append(np.real(r.reshape(3, 3).diagonal()).copy())

    rho = r.reshape(3, 3)
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if min_eig < -1e-7:
        warnings.warn(f"final density matrix slightly non-PSD "
                      f"(min eigenvalue {min_eig:.2e})", RuntimeWarning)
    return Trajectory(times=np.array(times), populations=np.array(pops),
                      duration=horizon, steps=steps, final_density=rho)
