"""Transmission through piecewise-constant potentials by transfer matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ValidationError
from .params import NATURAL, PhysParams
from .potential import PotentialProfile

THRESHOLD_GUARD = 1e-14
THRESHOLD_NUDGE = 1e-12


@dataclass(frozen=True)
class TransmissionPoint:
    q: float
    T: float
    R: float = float("nan")


def _check_profile(potential: PotentialProfile):
    if potential.representation != "constant":
        raise ValidationError("transmission needs a piecewise-constant potential")
    if potential.boundary != "open":
        raise ValidationError("transmission needs open boundaries")


def _wavenumbers(q, levels, params):
    """Complex wave numbers ``sqrt(q^2 - 2 m V / hbar^2)`` per region, shape (nq, nregions)."""
    arg = q[:, None] ** 2 - np.asarray(levels)[None, :] / params.kinetic
    near = np.abs(arg) < THRESHOLD_GUARD
    if np.any(near):
        rows = np.any(near, axis=1)
        q = q.copy()
        q[rows] += THRESHOLD_NUDGE
        arg = q[:, None] ** 2 - np.asarray(levels)[None, :] / params.kinetic
    return np.sqrt(arg.astype(complex))


def transfer_amplitudes(q, potential: PotentialProfile, params: PhysParams = NATURAL):
    """Reflection and transmission amplitudes for a wave incident from the left.

    In each region the wavefunction is ``A exp(ik(s - s_j)) + B exp(-ik(s - s_j))``
    about the region's left edge ``s_j`` (the first breakpoint for the
    incoming lead). Interface matrices match value and slope; the running
    product is renormalised by its largest entry and the scale is tracked
    in ``log_scale`` so that wide evanescent regions cannot overflow.

    Returns ``(r, t, k_in, k_out)`` arrays over ``q``.
    """
    _check_profile(potential)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    levels = [potential.asymptotes[0], *potential.values, potential.asymptotes[1]]
    k = _wavenumbers(q, levels, params)
    widths = potential.widths
    nq = len(q)
    M = np.zeros((nq, 2, 2), dtype=complex)
    M[:, 0, 0] = M[:, 1, 1] = 1.0
    log_scale = np.zeros(nq)
    for j in range(len(levels) - 1):
        ka, kb = k[:, j], k[:, j + 1]
        if j > 0:
            phase = np.exp(1j * ka * widths[j - 1])
            prop = np.zeros_like(M)
            prop[:, 0, 0] = phase
            prop[:, 1, 1] = 1.0 / phase
            M = prop @ M
        ratio = ka / kb
        step = np.empty_like(M)
        step[:, 0, 0] = step[:, 1, 1] = 0.5 * (1.0 + ratio)
        step[:, 0, 1] = step[:, 1, 0] = 0.5 * (1.0 - ratio)
        M = step @ M
        big = np.max(np.abs(M), axis=(1, 2))
        M /= big[:, None, None]
        log_scale += np.log(big)
    r = -M[:, 1, 0] / M[:, 1, 1]
    # det of each interface factor is ka/kb, so the product's det telescopes
    # to k_in/k_out; t = det / M11 avoids cancellation in M00 + M01 r
    t = (k[:, 0] / k[:, -1]) / (M[:, 1, 1] * np.exp(log_scale))
    return r, t, k[:, 0], k[:, -1]


def _transmission_arrays(q, potential, params):
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any(q <= 0):
        raise ValidationError("incident wave number q must be positive")
    r, t, k_in, k_out = transfer_amplitudes(q, potential, params)
    if np.any(np.abs(k_in.imag) > 0):
        raise ValidationError("incident energy lies below the left asymptote; no incoming wave")
    flux = np.where(np.abs(k_out.imag) > 0, 0.0, k_out.real / k_in.real)
    return np.abs(t) ** 2 * flux, np.abs(r) ** 2


def transmission(q: float, potential: PotentialProfile, params: PhysParams = NATURAL) -> TransmissionPoint:
    """Ratio of transmitted to incident probability current at wave number ``q``.

    The energy is ``(hbar^2 / 2m) q^2``. Flux factors ``k_out / k_in``
    cancel when both leads sit at the same potential.
    """
    T, R = _transmission_arrays([q], potential, params)
    return TransmissionPoint(float(q), float(T[0]), float(R[0]))


def transmission_sweep(q_min: float, q_max: float, n: int, potential: PotentialProfile,
                       params: PhysParams = NATURAL) -> list[TransmissionPoint]:
    if not 0 < q_min < q_max:
        raise ValidationError("need 0 < q_min < q_max")
    if n < 2:
        raise ValidationError("need at least two sweep points")
    qs = np.linspace(q_min, q_max, n)
    T, R = _transmission_arrays(qs, potential, params)
    return [TransmissionPoint(float(a), float(b), float(c)) for a, b, c in zip(qs, T, R)]


def sweep_arrays(sweep):
    return np.array([p.q for p in sweep]), np.array([p.T for p in sweep])


def find_resonances(sweep, threshold: float = 0.999, potential: PotentialProfile | None = None,
                    params: PhysParams = NATURAL, window: int = 5, q_tol: float = 1e-4) -> list[float]:
    """Wave numbers of full transparency.

    A sample is a candidate when it is the largest value within a centred
    ``window`` of samples, stands above the window's smallest value (flat
    plateaus such as free propagation do not count) and reaches
    ``threshold``. With ``potential`` supplied, each candidate is refined
    by golden-section maximisation over its neighbouring samples to
    ``q_tol``.
    """
    if len(sweep) == 0:
        raise ValidationError("empty sweep")
    qs, Ts = sweep_arrays(sweep)
    if np.any(np.diff(qs) <= 0):
        raise ValidationError("sweep must be sorted by q")
    half = window // 2
    found = []
    for i in range(half, len(qs) - half):
        win = Ts[i - half:i + half + 1]
        if Ts[i] < threshold or Ts[i] < win.max() or Ts[i] - win.min() <= 1e-9:
            continue
        if found and i - found[-1][0] <= half:
            continue
        found.append((i, float(qs[i])))

    resonances = []
    for i, q_grid in found:
        if potential is None:
            resonances.append(q_grid)
            continue
        a, b, c = qs[i - 1], qs[i], qs[i + 1]

        def neg_t(x):
            return -transmission(x, potential, params).T

        try:
            res = minimize_scalar(neg_t, bracket=(a, b, c), method="golden",
                                  options={"xtol": q_tol / (4.0 * c)})
            q_best = float(res.x) if a <= res.x <= c else q_grid
        except ValueError:
            q_best = q_grid
        resonances.append(q_best)
    return resonances


def ramsauer_wavenumbers(depth: float, width: float, q_max: float, params: PhysParams = NATURAL) -> list[float]:
    """Transparency condition of a single square well, ``sqrt(q^2 + k0^2) width = n pi``.

    ``k0^2 = depth / (hbar^2/2m)``. Returns every positive solution below ``q_max``.
    """
    k0_sq = depth / params.kinetic
    out = []
    n = 1
    while True:
        kin = n * math.pi / width
        q_sq = kin**2 - k0_sq
        if q_sq > 0:
            q = math.sqrt(q_sq)
            if q > q_max:
                break
            out.append(q)
        n += 1
    return out
