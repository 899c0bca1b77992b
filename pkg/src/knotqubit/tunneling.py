"""Tunnel splitting of the double-well ground level.

Convention: the even (symmetric) state is the lower level, so
``deltaE = E_odd - E_even > 0``, ``E+ = E - deltaE/2`` and
``E- = E + deltaE/2`` about the mean level ``E``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .errors import DegenerateCombinationError, NoDoubletError, ValidationError
from .params import NATURAL, PhysParams
from .potential import DoubleWellModel, PotentialProfile
from .spectrum import BoundState, Grid, binding_reference, numeric_spectrum, solve_single_well


@dataclass(frozen=True)
class SplitResult:
    deltaE: float
    omega_cl: float
    omega_res: float
    method: str
    p1: float | None = None
    level: float | None = None
    diagnostics: dict = field(default_factory=dict)
    states: tuple = field(default=(), repr=False, compare=False)

    @property
    def e_plus(self) -> float | None:
        return None if self.level is None else self.level - self.deltaE / 2.0

    @property
    def e_minus(self) -> float | None:
        return None if self.level is None else self.level + self.deltaE / 2.0

    @property
    def classical_period(self) -> float:
        return 2.0 * math.pi / self.omega_cl

    def to_dict(self) -> dict:
        out = {
            "deltaE": self.deltaE,
            "omega_cl": self.omega_cl,
            "omega_res": self.omega_res,
            "method": self.method,
        }
        if self.p1 is not None:
            out["p1"] = self.p1
        if self.level is not None:
            out["level"] = self.level
        if self.diagnostics:
            out["diagnostics"] = dict(self.diagnostics)
        return out


def wkb_split(model: DoubleWellModel, k1: float, params: PhysParams = NATURAL) -> SplitResult:
    """Quasi-classical splitting from the single-well ground root ``k1``.

    ``deltaE = (hbar^2 |k1| / (m D)) exp(-|k1| d)`` and the classical well
    frequency ``omega_cl = pi hbar |k1| / (m D)``, so that
    ``deltaE = (hbar omega_cl / pi) exp(-|k1| d)``.

    ``diagnostics`` also carries the same estimate with the under-barrier
    decay constant ``q1 = sqrt(k0^2 - k1^2)`` in the exponent.
    """
    k = abs(k1)
    hbar, m = params.hbar, params.mass
    prefactor = hbar**2 * k / (m * model.D)
    deltaE = prefactor * math.exp(-k * model.d)
    omega_cl = math.pi * hbar * k / (m * model.D)
    q1 = math.sqrt(max(model.k0**2 - k**2, 0.0))
    diagnostics = {
        "exponent_k1": k * model.d,
        "exponent_q1": q1 * model.d,
        "deltaE_q1": prefactor * math.exp(-q1 * model.d),
        "q1": q1,
    }
    return SplitResult(
        deltaE=deltaE,
        omega_cl=omega_cl,
        omega_res=deltaE / hbar,
        method="wkb",
        p1=hbar * k,
        level=-params.kinetic * q1**2,
        diagnostics=diagnostics,
    )


def wkb_order_of_magnitude(model: DoubleWellModel, params: PhysParams = NATURAL) -> float:
    """Rough splitting ``hbar^2 / (25 m rho0^2) exp(-d / (5 rho0))`` for the knot."""
    if model.rho0 is None:
        raise ValidationError("the order-of-magnitude form needs rho0")
    r = model.rho0
    return params.hbar**2 / (25.0 * params.mass * r**2) * math.exp(-model.d / (5.0 * r))


def numeric_split(
    potential: PotentialProfile,
    grid: Grid,
    params: PhysParams = NATURAL,
    model: DoubleWellModel | None = None,
) -> SplitResult:
    """Splitting between the two lowest finite-difference levels.

    Raises :class:`NoDoubletError` unless both levels are bound. When
    ``model`` is given, ``omega_cl`` is filled in from the quasi-classical
    formula for reference; otherwise it is NaN.
    """
    states = numeric_spectrum(potential, grid, 2, params)
    ref = binding_reference(potential)
    bound = [st for st in states if st.energy < ref]
    if len(bound) < 2:
        raise NoDoubletError(
            f"only {len(bound)} bound state(s) below {ref:.6g}; "
            f"levels are {[round(st.energy, 12) for st in states]}"
        )
    lower, upper = states
    deltaE = upper.energy - lower.energy
    omega_cl = float("nan")
    p1 = None
    if model is not None:
        k1 = solve_single_well(model, params)[0].k
        ref_split = wkb_split(model, k1, params)
        omega_cl, p1 = ref_split.omega_cl, ref_split.p1
    return SplitResult(
        deltaE=deltaE,
        omega_cl=omega_cl,
        omega_res=deltaE / params.hbar,
        method="numeric",
        p1=p1,
        level=0.5 * (lower.energy + upper.energy),
        diagnostics={"E_even": lower.energy, "E_odd": upper.energy,
                     "parities": [lower.parity, upper.parity]},
        states=(lower, upper),
    )


def _is_symmetric_grid(s):
    span = s[-1] - s[0]
    return np.allclose(s, -s[::-1], rtol=0.0, atol=1e-12 * span)


def symmetrize(psi, s):
    """Symmetric and antisymmetric combinations ``[psi(s) +- psi(-s)] / sqrt 2``.

    Both are renormalised. If either combination vanishes (``psi`` already
    even or odd) a :class:`DegenerateCombinationError` is raised; it carries
    the surviving combination as ``.plus`` or ``.minus``.
    """
    psi = np.asarray(psi, dtype=float)
    s = np.asarray(s, dtype=float)
    if psi.shape != s.shape:
        raise ValidationError("psi and s must have the same shape")
    if not _is_symmetric_grid(s):
        raise ValidationError("symmetrize needs a grid symmetric about s = 0")
    mirrored = psi[::-1]
    plus = (psi + mirrored) / math.sqrt(2.0)
    minus = (psi - mirrored) / math.sqrt(2.0)
    scale = trapezoid(psi**2, s)
    norm_p = trapezoid(plus**2, s)
    norm_m = trapezoid(minus**2, s)
    if norm_m <= 1e-20 * scale or norm_p <= 1e-20 * scale:
        err = DegenerateCombinationError("psi is already of definite parity; one combination vanishes")
        err.plus = plus / math.sqrt(norm_p) if norm_p > 1e-20 * scale else None
        err.minus = minus / math.sqrt(norm_m) if norm_m > 1e-20 * scale else None
        raise err
    return plus / math.sqrt(norm_p), minus / math.sqrt(norm_m)


def localized_pair(even: BoundState, odd: BoundState):
    """Well-localised states ``(psi_even + psi_odd)/sqrt 2`` and ``(psi_even - psi_odd)/sqrt 2``.

    With the sign convention of :func:`numeric_spectrum` the first sits in
    the right well and the second in the left.
    """
    if even.psi is None or odd.psi is None:
        raise ValidationError("both states need sampled wavefunctions")
    right = (even.psi + odd.psi) / math.sqrt(2.0)
    left = (even.psi - odd.psi) / math.sqrt(2.0)
    return right, left
