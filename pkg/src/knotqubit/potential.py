"""Curvature-induced potentials, the idealised knot double well, and field control.

The potential felt by a particle on a wire with curvature ``kappa`` is
``V(s) = -(hbar^2 / 2m) kappa(s)^2 / 4``. A tight symmetric knot has two
curvature plateaus, which this module idealises as two square wells of
depth ``U0 = hbar^2 kappa^2 / (8m)`` and width ``D`` separated by a barrier
of width ``d``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import LevelDestroyedError, ValidationError
from .geometry import CurvatureProfile
from .params import NATURAL, PhysParams

__all__ = [
    "PhysParams",
    "PotentialProfile",
    "DoubleWellModel",
    "effective_potential",
    "double_well_potential",
    "single_well_potential",
    "field_device_potential",
    "tilt_potential",
    "critical_field",
    "critical_field_bound",
    "check_field",
    "dipole_moment",
    "max_temperature",
]


@dataclass(frozen=True)
class PotentialProfile:
    """Piecewise potential on ``[breakpoints[0], breakpoints[-1]]``.

    With ``representation="constant"`` there is one value per interval.
    With ``representation="linear"`` each interval carries its left and right
    end values, shape ``(n, 2)``, so jumps at breakpoints are allowed.

    Outside the domain an ``"open"`` profile continues at the constant
    ``asymptotes`` (left, right); a ``"hard-wall"`` profile is infinite there.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    representation: str = "constant"
    boundary: str = "open"
    asymptotes: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or len(bp) < 2:
            raise ValidationError("need at least two breakpoints")
        if np.any(np.diff(bp) <= 0) or not np.all(np.isfinite(bp)):
            raise ValidationError("breakpoints must be finite and strictly increasing")
        n = len(bp) - 1
        if self.representation == "constant":
            if vals.shape != (n,):
                raise ValidationError(f"constant profile needs {n} values, got shape {vals.shape}")
        elif self.representation == "linear":
            if vals.shape != (n, 2):
                raise ValidationError(f"linear profile needs values of shape ({n}, 2), got {vals.shape}")
        else:
            raise ValidationError(f"unknown representation {self.representation!r}")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("potential values must be finite")
        if self.boundary not in ("open", "hard-wall"):
            raise ValidationError(f"unknown boundary {self.boundary!r}")
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "asymptotes", (float(self.asymptotes[0]), float(self.asymptotes[1])))

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def min_feature(self) -> float:
        return float(self.widths.min())

    def interval_ends(self) -> np.ndarray:
        """Values at the left and right end of every interval, shape (n, 2)."""
        if self.representation == "linear":
            return self.values
        return np.column_stack([self.values, self.values])

    def as_linear(self) -> "PotentialProfile":
        return dataclasses.replace(self, values=self.interval_ends(), representation="linear")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        bp = self.breakpoints
        ends = self.interval_ends()
        idx = np.clip(np.searchsorted(bp, s, side="right") - 1, 0, len(bp) - 2)
        if self.representation == "constant":
            out = self.values[idx]
        else:
            frac = (s - bp[idx]) / self.widths[idx]
            out = ends[idx, 0] * (1.0 - frac) + ends[idx, 1] * frac
        left, right = s < bp[0], s > bp[-1]
        if self.boundary == "hard-wall":
            out = np.where(left | right, np.inf, out)
        else:
            out = np.where(left, self.asymptotes[0], out)
            out = np.where(right, self.asymptotes[1], out)
        return out

    def antiderivative(self, s):
        """``F(s) = integral of V from breakpoints[0] to s``.

        Beyond the domain the potential continues at the asymptotes (the
        outermost interval values for hard-wall profiles, which keeps the
        result finite).
        """
        s = np.asarray(s, dtype=float)
        bp = self.breakpoints
        ends = self.interval_ends()
        w = self.widths
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (ends[:, 0] + ends[:, 1]) * w)])
        idx = np.clip(np.searchsorted(bp, s, side="right") - 1, 0, len(bp) - 2)
        x = np.clip(s - bp[idx], 0.0, w[idx])
        slope = (ends[idx, 1] - ends[idx, 0]) / w[idx]
        out = cum[idx] + ends[idx, 0] * x + 0.5 * slope * x**2
        if self.boundary == "open":
            lo, hi = self.asymptotes
        else:
            lo, hi = ends[0, 0], ends[-1, 1]
        out = out + np.where(s < bp[0], lo * (s - bp[0]), 0.0)
        out = out + np.where(s > bp[-1], hi * (s - bp[-1]), 0.0)
        return out

    def cell_average(self, s, h: float):
        """Exact mean of the potential over ``[s - h/2, s + h/2]``."""
        return (self.antiderivative(np.asarray(s) + 0.5 * h) - self.antiderivative(np.asarray(s) - 0.5 * h)) / h

    def mirrored(self) -> "PotentialProfile":
        """The reflected profile ``V(-s)``."""
        bp = -self.breakpoints[::-1]
        if self.representation == "constant":
            vals = self.values[::-1]
        else:
            vals = self.values[::-1, ::-1]
        return dataclasses.replace(self, breakpoints=bp, values=vals, asymptotes=self.asymptotes[::-1])

    def is_even(self, tol: float = 1e-12) -> bool:
        m = self.mirrored()
        return (
            np.allclose(m.breakpoints, self.breakpoints, rtol=0, atol=tol)
            and np.allclose(m.values, self.values, rtol=0, atol=tol)
            and abs(self.asymptotes[0] - self.asymptotes[1]) <= tol
        )

    def max_abs(self) -> float:
        vmax = float(np.max(np.abs(self.values)))
        if self.boundary == "open":
            vmax = max(vmax, abs(self.asymptotes[0]), abs(self.asymptotes[1]))
        return vmax

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Node positions and values; a jump appears as a repeated position."""
        ends = self.interval_ends()
        bp = self.breakpoints
        s = [bp[0]]
        v = [ends[0, 0]]
        for i in range(len(ends)):
            if i > 0 and ends[i, 0] != ends[i - 1, 1]:
                s.append(bp[i])
                v.append(ends[i, 0])
            s.append(bp[i + 1])
            v.append(ends[i, 1])
        return np.array(s), np.array(v)

    @classmethod
    def from_nodes(cls, s, v, boundary: str = "open", asymptotes=None) -> "PotentialProfile":
        """Build a linear profile from node samples; a repeated ``s`` is a jump."""
        s = np.asarray(s, dtype=float)
        v = np.asarray(v, dtype=float)
        if s.shape != v.shape or s.ndim != 1 or len(s) < 2:
            raise ValidationError("node arrays must be 1D, equal length, at least two entries")
        ds = np.diff(s)
        if np.any(ds < 0):
            raise ValidationError("node positions must be non-decreasing")
        keep = ds > 0
        if np.any(~keep[:-1] & ~keep[1:]):
            raise ValidationError("a node position may repeat at most once")
        left = np.nonzero(keep)[0]
        bp = np.concatenate([s[left], s[-1:]])
        vals = np.column_stack([v[left], v[left + 1]])
        if asymptotes is None:
            asymptotes = (v[0], v[-1])
        return cls(bp, vals, "linear", boundary, tuple(asymptotes))


@dataclass(frozen=True)
class DoubleWellModel:
    """Idealised symmetric double well of a tight knot.

    Two wells of depth ``U0`` and width ``D`` sit on either side of a barrier
    of width ``d``. ``kappa`` is the plateau curvature, so that the inside
    wave number at the well bottom is ``k0 = kappa / 2`` and
    ``U0 = hbar^2 kappa^2 / (8 m)``. ``l``, when set, places hard walls at a
    distance ``l`` from the centre of each well.
    """

    kappa: float
    D: float
    d: float
    U0: float
    rho0: float | None = None
    l: float | None = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValidationError("kappa must be positive")
        if not self.D > 0:
            raise ValidationError("well width D must be positive")
        if self.d < 0:
            raise ValidationError(f"barrier width d must be non-negative, got {self.d}")
        if not self.U0 > 0:
            raise ValidationError("well depth U0 must be positive")
        if self.l is not None and not self.l > self.D / 2:
            raise ValidationError(f"hard-wall distance l must exceed D/2 = {self.D / 2}, got {self.l}")

    @property
    def C(self) -> float:
        """Dimensionless well strength ``kappa D / 4``."""
        return self.kappa * self.D / 4.0

    @property
    def k0(self) -> float:
        return self.kappa / 2.0

    @classmethod
    def from_curvature(cls, kappa, D, d, l=None, rho0=None, params: PhysParams = NATURAL):
        U0 = params.hbar**2 * kappa**2 / (8.0 * params.mass)
        return cls(kappa=kappa, D=D, d=d, U0=U0, rho0=rho0, l=l)

    @classmethod
    def knot(cls, rho0: float = 1.0, d: float = 0.0, l=None, params: PhysParams = NATURAL):
        """Tight-knot defaults: ``kappa = 1/(2 rho0)``, ``D = 5 rho0`` (so ``C = 5/8``)."""
        if not rho0 > 0:
            raise ValidationError("rho0 must be positive")
        return cls.from_curvature(1.0 / (2.0 * rho0), 5.0 * rho0, d, l=l, rho0=rho0, params=params)

    def replace(self, **changes) -> "DoubleWellModel":
        return dataclasses.replace(self, **changes)


def effective_potential(profile: CurvatureProfile, params: PhysParams = NATURAL) -> PotentialProfile:
    """Curvature-induced potential ``-(hbar^2/2m) kappa^2 / 4`` along a profile.

    Sampled profiles give a piecewise-linear potential through the sample
    values; piecewise-constant (rod and arc) profiles give a piecewise-constant
    one. The ends continue at the edge values.
    """
    v = -params.kinetic * profile.kappa**2 / 4.0
    s = profile.s
    if profile.kind == "piecewise":
        return PotentialProfile(s, v[:-1], "constant", "open", (v[0], v[-2]))
    return PotentialProfile(s, np.column_stack([v[:-1], v[1:]]), "linear", "open", (v[0], v[-1]))


def double_well_potential(model: DoubleWellModel) -> PotentialProfile:
    """Square double well symmetric about ``s = 0``.

    Wells occupy ``[-d/2 - D, -d/2]`` and ``[d/2, d/2 + D]``. With ``d = 0``
    they merge into one well of width ``2D``. With ``model.l`` set, hard walls
    stand at ``+-(d/2 + D/2 + l)``, a distance ``l`` beyond each well centre.
    """
    D, d, U0 = model.D, model.d, model.U0
    if d < 0:
        raise ValidationError("barrier width must be non-negative")
    if d == 0:
        bp = [-D, D]
        vals = [-U0]
    else:
        bp = [-d / 2 - D, -d / 2, d / 2, d / 2 + D]
        vals = [-U0, 0.0, -U0]
    if model.l is None:
        return PotentialProfile(bp, vals)
    wall = d / 2 + D / 2 + model.l
    return PotentialProfile([-wall] + bp + [wall], [0.0] + vals + [0.0], boundary="hard-wall")


def single_well_potential(model: DoubleWellModel) -> PotentialProfile:
    """One square well of width ``D`` and depth ``U0``.

    Without walls the well is centred on ``s = 0``. With ``model.l`` set the
    well occupies ``[0, D]`` between hard walls at ``+-(l + D/2)``, so its
    edges lie ``l + D/2`` and ``l - D/2`` from the walls; this is the geometry
    solved by :func:`knotqubit.spectrum.solve_hard_wall`.
    """
    D, U0 = model.D, model.U0
    if model.l is None:
        return PotentialProfile([-D / 2, D / 2], [-U0])
    wall = model.l + D / 2
    return PotentialProfile([-wall, 0.0, D, wall], [0.0, -U0, 0.0], boundary="hard-wall")


def field_device_potential(model: DoubleWellModel, field: float, params: PhysParams = NATURAL) -> PotentialProfile:
    """Merged-well device shaped by a symmetric applied field.

    The central rod is removed (``d = 0``) and insulating ends act as hard
    walls at ``+-D``. The electrodes put the electrostatic potential at zero
    at the merger point and raise it linearly toward both ends, so the
    potential energy is ``-U0 + charge * field * |s|``.
    """
    D, U0 = model.D, model.U0
    edge = -U0 + params.charge * field * D
    return PotentialProfile([-D, 0.0, D], [[edge, -U0], [-U0, edge]], "linear", "hard-wall")


def tilt_potential(profile: PotentialProfile, field: float, params: PhysParams = NATURAL) -> PotentialProfile:
    """Add the ramp ``charge * field * s`` across the profile's domain.

    The ramp vanishes at ``s = 0``. Open asymptotes move with the ramp's end
    values, so the leads stay equipotential and the profile continuous.
    """
    slope = params.charge * field
    lin = profile.as_linear()
    ramp = slope * np.column_stack([lin.breakpoints[:-1], lin.breakpoints[1:]])
    lo, hi = lin.domain
    asym = (lin.asymptotes[0] + slope * lo, lin.asymptotes[1] + slope * hi)
    return dataclasses.replace(lin, values=lin.values + ramp, asymptotes=asym)


def critical_field(model: DoubleWellModel, params: PhysParams = NATURAL) -> float:
    """Largest longitudinal field that keeps the bound level alive.

    ``hbar^2 kappa^2 (1 + cos(kappa D / 2)) / (4 m |e| D)``; infinite for a
    neutral particle.
    """
    charge = abs(params.charge)
    if charge == 0:
        return float("inf")
    kappa, D = model.kappa, model.D
    return params.hbar**2 * kappa**2 * (1.0 + np.cos(D * kappa / 2.0)) / (4.0 * params.mass * charge * D)


def critical_field_bound(model: DoubleWellModel, params: PhysParams = NATURAL) -> float:
    """Quoted ceiling ``hbar^2 / (20 m |e| rho0^2)`` for the knot geometry."""
    if model.rho0 is None:
        raise ValidationError("the critical-field bound needs the thread radius rho0")
    charge = abs(params.charge)
    if charge == 0:
        return float("inf")
    return params.hbar**2 / (20.0 * params.mass * charge * model.rho0**2)


def check_field(model: DoubleWellModel, field: float, params: PhysParams = NATURAL) -> None:
    limit = critical_field(model, params)
    if abs(field) > limit:
        raise LevelDestroyedError(f"|field| = {abs(field):.6g} exceeds the critical field {limit:.6g}")


def dipole_moment(model: DoubleWellModel, params: PhysParams = NATURAL) -> float:
    """Dipole of a charge sitting in one well: ``charge * (d + D)``."""
    return params.charge * (model.d + model.D)


def max_temperature(model: DoubleWellModel, params: PhysParams = NATURAL) -> float:
    """Temperature ``U0 / k_B`` below which the two lowest states are resolved."""
    return model.U0 / params.boltzmann
