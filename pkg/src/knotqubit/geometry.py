"""Space curves, curvature profiles and curvature integrals.

Lengths are dimensionless throughout; the knot model measures them in units
of the thread radius ``rho0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import CubicSpline

from .errors import ValidationError
from .params import NATURAL, PhysParams

MIN_CURVE_POINTS = 8
MIN_CURVATURE_POINTS = 5


@dataclass(frozen=True)
class SpaceCurve:
    """Ordered 3D samples of a centreline.

    A closed curve is periodic: the last point connects back to the first,
    so the first point must not be repeated at the end.
    """

    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValidationError(f"points must have shape (n, 3), got {pts.shape}")
        if len(pts) < MIN_CURVE_POINTS:
            raise ValidationError(f"a curve needs at least {MIN_CURVE_POINTS} points, got {len(pts)}")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("curve contains NaN or infinite coordinates")
        if np.any(_chords(pts, self.closed) == 0.0):
            raise ValidationError("consecutive curve points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def length(self) -> float:
        """Polygonal length, including the closing chord for closed curves."""
        return float(np.sum(_chords(self.points, self.closed)))


@dataclass(frozen=True)
class CurvatureProfile:
    """Curvature sampled along arclength.

    ``kind="sampled"`` profiles are point samples (integrated with the
    trapezoidal rule). ``kind="piecewise"`` profiles are step functions:
    ``kappa[i]`` holds on ``[s[i], s[i+1])`` and the final entry repeats the
    last step so that ``s`` and ``kappa`` stay aligned.

    For closed profiles ``period`` is the full loop length; it defaults to
    ``s[-1]`` for piecewise profiles and must exceed ``s[-1]`` otherwise.
    """

    s: np.ndarray
    kappa: np.ndarray
    closed: bool = False
    kind: str = "sampled"
    period: float | None = None

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        kappa = np.asarray(self.kappa, dtype=float)
        if s.ndim != 1 or s.shape != kappa.shape:
            raise ValidationError("s and kappa must be 1D arrays of equal length")
        if len(s) < 2:
            raise ValidationError("a profile needs at least two samples")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(kappa))):
            raise ValidationError("profile contains NaN or infinite values")
        if np.any(np.diff(s) <= 0):
            raise ValidationError("arclength samples must be strictly increasing")
        if np.any(kappa < 0):
            raise ValidationError("curvature must be non-negative")
        if self.kind not in ("sampled", "piecewise"):
            raise ValidationError(f"unknown profile kind {self.kind!r}")
        period = self.period
        if self.closed:
            if period is None:
                if self.kind != "piecewise":
                    raise ValidationError("closed sampled profiles need an explicit period")
                period = float(s[-1] - s[0])
            elif self.kind == "sampled" and period <= s[-1] - s[0]:
                raise ValidationError("period must exceed the sampled arclength span")
        s.setflags(write=False)
        kappa.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "period", None if period is None else float(period))

    @property
    def length(self) -> float:
        if self.closed:
            return self.period
        return float(self.s[-1] - self.s[0])

    def __call__(self, s):
        """Evaluate the curvature at arbitrary arclength positions."""
        s = np.asarray(s, dtype=float)
        if self.closed:
            s = self.s[0] + np.mod(s - self.s[0], self.period)
        if self.kind == "piecewise":
            idx = np.clip(np.searchsorted(self.s, s, side="right") - 1, 0, len(self.s) - 1)
            return self.kappa[idx]
        if self.closed:
            xp = np.append(self.s, self.s[0] + self.period)
            fp = np.append(self.kappa, self.kappa[0])
            return np.interp(s, xp, fp)
        return np.interp(s, self.s, self.kappa)


@dataclass(frozen=True)
class PiecewiseSegment:
    """A straight rod or a circular arc of the given length."""

    kind: str
    length: float
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in ("straight", "arc"):
            raise ValidationError(f"segment kind must be 'straight' or 'arc', got {self.kind!r}")
        if not self.length > 0:
            raise ValidationError(f"segment length must be positive, got {self.length}")
        if self.kind == "arc":
            if self.radius is None or not self.radius > 0:
                raise ValidationError(f"arc radius must be positive, got {self.radius}")

    @property
    def curvature(self) -> float:
        return 0.0 if self.kind == "straight" else 1.0 / self.radius

    @classmethod
    def straight(cls, length: float) -> "PiecewiseSegment":
        return cls("straight", length)

    @classmethod
    def arc(cls, radius: float, length: float | None = None) -> "PiecewiseSegment":
        """Circular arc; a quarter circle when ``length`` is omitted."""
        if length is None:
            length = np.pi * radius / 2.0
        return cls("arc", length, radius)


def _chords(points, closed):
    diffs = np.diff(points, axis=0)
    if closed:
        diffs = np.vstack([diffs, points[:1] - points[-1:]])
    return np.linalg.norm(diffs, axis=1)


def reparametrize_arclength(curve: SpaceCurve, n: int, tol: float = 1e-10, max_iter: int = 100) -> SpaceCurve:
    """Resample a curve at ``n`` points with equal consecutive chord lengths.

    A cubic spline (periodic for closed curves) is fitted through the input
    points against cumulative chord length. Points are first placed at equal
    spline arclength, then their parameters are adjusted until every chord
    has the same length to relative tolerance ``tol``. Open curves keep both
    endpoints; closed curves keep the first point and include the closing
    chord in the equal spacing.
    """
    if n < MIN_CURVE_POINTS:
        raise ValidationError(f"n must be at least {MIN_CURVE_POINTS}")
    pts = curve.points
    chords = _chords(pts, curve.closed)
    total = chords.sum()
    if total < 1e-12:
        raise ValidationError("degenerate curve: total length below 1e-12")

    u = np.concatenate([[0.0], np.cumsum(chords)])
    if curve.closed:
        spline = CubicSpline(u, np.vstack([pts, pts[:1]]), bc_type="periodic")
    else:
        spline = CubicSpline(u, pts)
    u_end = u[-1]

    dense = np.linspace(0.0, u_end, 64 * len(u) + 1)
    speed = np.linalg.norm(spline(dense, 1), axis=1)
    arc = cumulative_trapezoid(speed, dense, initial=0.0)
    n_seg = n if curve.closed else n - 1
    params = np.interp(np.linspace(0.0, arc[-1], n_seg + 1), arc, dense)

    for _ in range(max_iter):
        q = spline(params)
        c = np.linalg.norm(np.diff(q, axis=0), axis=1)
        if np.max(np.abs(c / c.mean() - 1.0)) < tol:
            break
        cum = np.concatenate([[0.0], np.cumsum(c)])
        params = np.interp(np.linspace(0.0, cum[-1], n_seg + 1), cum, params)
        params[0], params[-1] = 0.0, u_end

    out = spline(params[:-1] if curve.closed else params)
    if not curve.closed:
        out[0], out[-1] = pts[0], pts[-1]
    return SpaceCurve(out, curve.closed)


def _periodic_gradient(f, s, period):
    f_ext = np.concatenate([f[-1:], f, f[:1]])
    s_ext = np.concatenate([[s[-1] - period], s, [s[0] + period]])
    return np.gradient(f_ext, s_ext, axis=0)[1:-1]


def curvature_profile(curve: SpaceCurve) -> CurvatureProfile:
    """Curvature from central differences of the unit tangent.

    Arclength is the cumulative chord length, so the curve should already be
    resampled with :func:`reparametrize_arclength`. Closed curves use
    periodic stencils; open curves use one-sided second-order stencils at
    the endpoints.
    """
    pts = np.asarray(curve.points, dtype=float)
    if len(pts) < MIN_CURVATURE_POINTS:
        raise ValidationError(f"need at least {MIN_CURVATURE_POINTS} points for curvature")
    if np.isnan(pts).any():
        raise ValidationError("curve contains NaN")
    chords = _chords(pts, curve.closed)
    if curve.closed:
        s = np.concatenate([[0.0], np.cumsum(chords[:-1])])
        period = float(chords.sum())
        tangent = _periodic_gradient(pts, s, period)
        tangent /= np.linalg.norm(tangent, axis=1)[:, None]
        dtds = _periodic_gradient(tangent, s, period)
    else:
        s = np.concatenate([[0.0], np.cumsum(chords)])
        period = None
        tangent = np.gradient(pts, s, axis=0, edge_order=2)
        tangent /= np.linalg.norm(tangent, axis=1)[:, None]
        dtds = np.gradient(tangent, s, axis=0, edge_order=2)
    kappa = np.linalg.norm(dtds, axis=1)
    return CurvatureProfile(s, kappa, closed=curve.closed, period=period)


def _integrate(profile: CurvatureProfile, values) -> float:
    s = profile.s
    if profile.kind == "piecewise":
        return float(np.sum(values[:-1] * np.diff(s)))
    total = trapezoid(values, s)
    if profile.closed:
        total += 0.5 * (values[-1] + values[0]) * (profile.period - (s[-1] - s[0]))
    return float(total)


def total_curvature(profile: CurvatureProfile) -> float:
    """Integral of curvature over arclength (the full loop if closed)."""
    return _integrate(profile, profile.kappa)


def state_count_estimate(profile: CurvatureProfile, params: PhysParams = NATURAL) -> float:
    """Quasi-classical estimate of the number of bound states.

    Integrates ``sqrt(-2 m V_eff) / (2 pi hbar)`` with the curvature-induced
    potential ``V_eff = -(hbar^2 / 2m) kappa^2 / 4``. The result reduces to
    ``total_curvature / (4 pi)`` for any unit system.
    """
    v_eff = -params.kinetic * profile.kappa**2 / 4.0
    momentum = np.sqrt(-2.0 * params.mass * v_eff)
    return _integrate(profile, momentum) / (2.0 * np.pi * params.hbar)


def compose_segments(segments: Sequence[PiecewiseSegment], closed: bool = False) -> CurvatureProfile:
    """Concatenate rods and arcs into a piecewise-constant curvature profile."""
    if len(segments) == 0:
        raise ValidationError("need at least one segment")
    lengths = [seg.length for seg in segments]
    kappas = [seg.curvature for seg in segments]
    s = np.concatenate([[0.0], np.cumsum(lengths)])
    kappa = np.array(kappas + kappas[-1:])
    return CurvatureProfile(s, kappa, closed=closed, kind="piecewise")


def nanobar_segments(radius: float, gap: float, lead: float = 0.0) -> list[PiecewiseSegment]:
    """Rods of the bent nano-bar device.

    Two quarter-circle arcs of the given radius are joined by a straight rod
    of length ``gap`` (the barrier between the wells). Optional straight
    leads of length ``lead`` flank the arcs. With ``gap = 0`` the central rod
    is removed and the arcs meet directly.
    """
    segs = []
    if lead > 0:
        segs.append(PiecewiseSegment.straight(lead))
    segs.append(PiecewiseSegment.arc(radius))
    if gap > 0:
        segs.append(PiecewiseSegment.straight(gap))
    segs.append(PiecewiseSegment.arc(radius))
    if lead > 0:
        segs.append(PiecewiseSegment.straight(lead))
    return segs


def circle_curve(radius: float = 1.0, n: int = 256, angles=None) -> SpaceCurve:
    """Closed planar circle sampled at ``angles`` (uniform when omitted)."""
    if angles is None:
        angles = 2.0 * np.pi * np.arange(n) / n
    angles = np.asarray(angles, dtype=float)
    pts = np.column_stack([radius * np.cos(angles), radius * np.sin(angles), np.zeros_like(angles)])
    return SpaceCurve(pts, closed=True)


def torus_knot_curve(n: int = 2048, p: int = 2, q: int = 3, major: float = 2.0, minor: float = 1.0) -> SpaceCurve:
    """Closed (p, q) torus knot sampled uniformly in its parameter.

    The default is the trefoil
    ``((2 + cos 3t) cos 2t, (2 + cos 3t) sin 2t, sin 3t)``.
    """
    t = 2.0 * np.pi * np.arange(n) / n
    rad = major + minor * np.cos(q * t)
    pts = np.column_stack([rad * np.cos(p * t), rad * np.sin(p * t), minor * np.sin(q * t)])
    return SpaceCurve(pts, closed=True)


def trefoil_profile(n: int = 2048) -> CurvatureProfile:
    """Curvature profile of the equal-arclength-resampled trefoil."""
    curve = reparametrize_arclength(torus_knot_curve(max(n, 512)), n)
    return curvature_profile(curve)
