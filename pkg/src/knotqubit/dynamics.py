"""Qubit dynamics: two-level Rabi evolution and full wavepacket propagation.

Two-level basis: ``|L> = (1, 0)``, ``|R> = (0, 1)``. The Hamiltonian is

    H(t) = [[+eps(t)/2, -deltaE/2], [-deltaE/2, -eps(t)/2]]

with bias ``eps(t) = bias0 + amp sin(freq t + phase)``, so a positive bias
raises ``|L>``. The drive enters through the bias, i.e. it couples to the
dipole of a charge localised in one well.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.fft import rfft, rfftfreq
from scipy.integrate import trapezoid
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.sparse.linalg import splu

from .errors import ValidationError
from .params import NATURAL, PhysParams
from .potential import DoubleWellModel, PotentialProfile, check_field
from .spectrum import Grid


@dataclass(frozen=True)
class TwoLevelState:
    aL: complex
    aR: complex

    def __post_init__(self):
        norm = abs(self.aL) ** 2 + abs(self.aR) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ValidationError(f"two-level state must be normalised, |a|^2 = {norm}")

    @classmethod
    def left(cls) -> "TwoLevelState":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def right(cls) -> "TwoLevelState":
        return cls(0j, 1.0 + 0j)

    @classmethod
    def symmetric(cls) -> "TwoLevelState":
        """Lower tunnelling eigenstate ``(|L> + |R>)/sqrt 2`` at zero bias."""
        a = 1.0 / math.sqrt(2.0)
        return cls(a + 0j, a + 0j)

    @classmethod
    def antisymmetric(cls) -> "TwoLevelState":
        a = 1.0 / math.sqrt(2.0)
        return cls(a + 0j, -a + 0j)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.aL, self.aR], dtype=complex)


@dataclass(frozen=True)
class DriveSpec:
    """Bias ``bias0 + amp sin(freq t + phase)`` in energy units."""

    bias0: float = 0.0
    amp: float = 0.0
    freq: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.amp < 0:
            raise ValidationError("drive amplitude must be non-negative")
        if self.freq < 0:
            raise ValidationError("drive frequency must be non-negative")

    def bias(self, t):
        return self.bias0 + self.amp * np.sin(self.freq * t + self.phase)


@dataclass(frozen=True)
class TLSTrajectory:
    t: np.ndarray
    amplitudes: np.ndarray  # shape (n, 2): aL, aR

    @property
    def p_left(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 0]) ** 2

    @property
    def p_right(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 1]) ** 2

    @property
    def norm(self) -> np.ndarray:
        return self.p_left + self.p_right

    def overlap_population(self, state: TwoLevelState) -> np.ndarray:
        """``|<state|psi(t)>|^2`` along the trajectory."""
        return np.abs(self.amplitudes @ np.conj(state.vector)) ** 2

    @property
    def final(self) -> np.ndarray:
        return self.amplitudes[-1]

    def __iter__(self):
        # norm drift is a diagnostic here, so bypass TwoLevelState validation
        for t, (aL, aR) in zip(self.t, self.amplitudes):
            state = object.__new__(TwoLevelState)
            object.__setattr__(state, "aL", complex(aL))
            object.__setattr__(state, "aR", complex(aR))
            yield float(t), state


def max_tls_step(deltaE: float, drive: DriveSpec, params: PhysParams = NATURAL) -> float:
    """Largest step allowed: a hundredth of the shortest of the Rabi and drive periods."""
    periods = []
    if deltaE > 0:
        periods.append(2.0 * math.pi * params.hbar / deltaE)
    if drive.freq > 0:
        periods.append(2.0 * math.pi / drive.freq)
    return 0.01 * min(periods) if periods else math.inf


def tls_evolve(deltaE: float, drive: DriveSpec, initial: TwoLevelState, t_end: float, dt: float,
               params: PhysParams = NATURAL) -> TLSTrajectory:
    """Integrate ``i hbar da/dt = H(t) a`` with classical fourth-order Runge-Kutta.

    The step is ``t_end / ceil(t_end / dt)`` so the trajectory ends exactly
    at ``t_end``. The state is never renormalised; the norm drift is left
    in the trajectory as a diagnostic.
    """
    if dt <= 0 or t_end <= 0:
        raise ValidationError("dt and t_end must be positive")
    limit = max_tls_step(deltaE, drive, params)
    if dt > limit * (1 + 1e-12):
        raise ValidationError(f"dt = {dt:.6g} exceeds the stability limit {limit:.6g}")
    steps = int(math.ceil(t_end / dt - 1e-9))
    h = t_end / steps
    hbar = params.hbar
    half_gap = -0.5 * deltaE

    def rhs(t, a):
        eps = 0.5 * drive.bias(t)
        return np.array([eps * a[0] + half_gap * a[1], half_gap * a[0] - eps * a[1]]) / (1j * hbar)

    out = np.empty((steps + 1, 2), dtype=complex)
    a = initial.vector
    out[0] = a
    for i in range(steps):
        t = i * h
        k1 = rhs(t, a)
        k2 = rhs(t + h / 2, a + h / 2 * k1)
        k3 = rhs(t + h / 2, a + h / 2 * k2)
        k4 = rhs(t + h, a + h * k3)
        a = a + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = a
    return TLSTrajectory(np.arange(steps + 1) * h, out)


def rabi_probability(deltaE: float, bias: float, t, params: PhysParams = NATURAL):
    """Exact ``P_R(t)`` from ``|L>`` under a static bias."""
    gen = math.hypot(deltaE, bias)
    if gen == 0:
        return np.zeros_like(np.asarray(t, dtype=float))
    return (deltaE / gen) ** 2 * np.sin(gen * np.asarray(t) / (2.0 * params.hbar)) ** 2


def peak_transfer(deltaE: float, drive: DriveSpec, t_end: float, dt: float,
                  params: PhysParams = NATURAL) -> float:
    """Largest population driven from the symmetric ground state into the antisymmetric one."""
    traj = tls_evolve(deltaE, drive, TwoLevelState.symmetric(), t_end, dt, params)
    return float(traj.overlap_population(TwoLevelState.antisymmetric()).max())


def prepare_and_release(model: DoubleWellModel, field: float, params: PhysParams = NATURAL) -> TwoLevelState:
    """State left behind when a longitudinal preparation field is switched off suddenly.

    The carrier sits in the downhill well of the tilted potential
    ``V + charge * field * s``: ``|R>`` when ``charge * field < 0`` (a
    negative carrier in a positive field), ``|L>`` when it is positive, and
    the equal superposition without a field.
    """
    check_field(model, field, params)
    force = params.charge * field
    if force < 0:
        return TwoLevelState.right()
    if force > 0:
        return TwoLevelState.left()
    return TwoLevelState.symmetric()


def well_population(psi, s, split_point: float = 0.0) -> tuple[float, float]:
    """Trapezoidal probabilities left and right of ``split_point``.

    ``|psi|^2`` is treated as piecewise linear between nodes, so the two
    parts add up to the full trapezoidal norm for any split point.
    """
    s = np.asarray(s, dtype=float)
    rho = np.abs(np.asarray(psi)) ** 2
    total = trapezoid(rho, s)
    if split_point <= s[0]:
        return 0.0, float(total)
    if split_point >= s[-1]:
        return float(total), 0.0
    i = int(np.searchsorted(s, split_point, side="right")) - 1
    h = s[i + 1] - s[i]
    x = split_point - s[i]
    left = trapezoid(rho[: i + 1], s[: i + 1]) + rho[i] * x + (rho[i + 1] - rho[i]) * x**2 / (2.0 * h)
    return float(left), float(total - left)


@dataclass(frozen=True)
class WavepacketTrajectory:
    t: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    norm: np.ndarray
    psi_final: np.ndarray


def cn_evolve(potential: PotentialProfile, psi0, grid: Grid, dt: float, steps: int,
              params: PhysParams = NATURAL, split_point: float = 0.0, record_every: int = 1) -> WavepacketTrajectory:
    """Crank-Nicolson propagation of the 1D Schroedinger equation.

    Solves ``(1 + i dt H / 2 hbar) psi_{n+1} = (1 - i dt H / 2 hbar) psi_n``
    with the same finite-difference Hamiltonian as
    :func:`knotqubit.spectrum.numeric_spectrum` (zero values on the grid
    ends). The left-hand matrix is factorised once.
    """
    s = grid.nodes
    h = grid.spacing
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != s.shape:
        raise ValidationError("psi0 must be sampled on the grid nodes")
    norm0 = trapezoid(np.abs(psi0) ** 2, s)
    if abs(norm0 - 1.0) > 1e-6:
        raise ValidationError(f"psi0 must be normalised, got norm {norm0:.8g}")
    inner = s[1:-1]
    v = potential.cell_average(inner, h)
    if dt * np.max(np.abs(v)) > 0.1 * params.hbar * (1 + 1e-12):
        raise ValidationError("time step too large: need dt * max|V| <= 0.1 hbar")
    if steps < 1 or record_every < 1:
        raise ValidationError("steps and record_every must be positive")

    kin = params.kinetic / h**2
    n = len(inner)
    H = sparse.diags([np.full(n - 1, -kin), 2.0 * kin + v, np.full(n - 1, -kin)], [-1, 0, 1], format="csc")
    eye = sparse.identity(n, format="csc", dtype=complex)
    factor = 0.5j * dt / params.hbar
    lhs = splu((eye + factor * H).tocsc())
    rhs = (eye - factor * H).tocsr()

    psi = psi0.copy()
    psi[0] = psi[-1] = 0.0
    records = []

    def record(step):
        pl, pr = well_population(psi, s, split_point)
        records.append((step * dt, pl, pr, trapezoid(np.abs(psi) ** 2, s)))

    record(0)
    core = psi[1:-1]
    for step in range(1, steps + 1):
        core = lhs.solve(rhs @ core)
        if step % record_every == 0 or step == steps:
            psi[1:-1] = core
            record(step)
    psi[1:-1] = core
    t, pl, pr, nm = (np.array(col) for col in zip(*records))
    return WavepacketTrajectory(t, pl, pr, nm, psi.copy())


def oscillation_period(t, signal) -> float:
    """Dominant period of a uniformly sampled oscillation.

    A zero-padded FFT locates the peak frequency, which seeds a least-squares
    fit of ``c + A cos(omega t + phi)``.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(signal, dtype=float)
    if len(t) < 8:
        raise ValidationError("need at least 8 samples to estimate a period")
    dt = t[1] - t[0]
    y0 = y - y.mean()
    n_pad = 16 * len(y0)
    spec = np.abs(rfft(y0, n_pad))
    freqs = rfftfreq(n_pad, dt)
    i = int(np.argmax(spec[1:])) + 1
    omega = 2.0 * math.pi * freqs[i]
    amp = 0.5 * (y.max() - y.min())
    phase0 = -omega * t[int(np.argmax(y))]

    def model(tt, c, a, w, phi):
        return c + a * np.cos(w * tt + phi)

    with warnings.catch_warnings():
        # only the best-fit frequency is used, not its covariance
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, _ = curve_fit(model, t, y, p0=[y.mean(), amp, omega, phase0])
    return 2.0 * math.pi / abs(popt[2])
