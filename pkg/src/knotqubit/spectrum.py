"""Bound states: transcendental roots for square wells and a finite-difference solver.

For a square well of width ``D`` and inside wave number ``k`` the natural
variable is ``x = k D / 2``, which ranges over ``(0, C)`` with
``C = kappa D / 4``. Even states satisfy ``tan x = sqrt(C^2 - x^2) / x`` and
odd states ``tan x = -x / sqrt(C^2 - x^2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import bisect

from .errors import GridTooCoarseError, ValidationError
from .params import NATURAL, PhysParams
from .potential import DoubleWellModel, PotentialProfile, double_well_potential

SCAN_POINTS = 10_000
ROOT_XTOL = 1e-13
THRESHOLD_Q2 = 1e-14
PARITY_OVERLAP = 0.9


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n`` nodes on ``[s_min, s_max]``, ends included."""

    s_min: float
    s_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValidationError(f"a grid needs at least 16 nodes, got {self.n}")
        if not self.s_max > self.s_min:
            raise ValidationError("grid needs s_max > s_min")

    @property
    def spacing(self) -> float:
        return (self.s_max - self.s_min) / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.s_min, self.s_max, self.n)

    @property
    def is_symmetric(self) -> bool:
        return math.isclose(self.s_min, -self.s_max, rel_tol=0.0, abs_tol=1e-12 * (self.s_max - self.s_min))

    @classmethod
    def symmetric(cls, half_width: float, spacing: float) -> "Grid":
        n = 2 * int(math.ceil(half_width / spacing)) + 1
        return cls(-half_width, half_width, n)

    @classmethod
    def spanning(cls, potential: PotentialProfile, spacing: float, margin: float = 0.0) -> "Grid":
        """Grid over the potential's domain (walls exactly on the end nodes)."""
        lo, hi = potential.domain
        if potential.boundary == "open":
            lo, hi = lo - margin, hi + margin
        n = int(math.ceil((hi - lo) / spacing)) + 1
        return cls(lo, hi, max(n, 16))


@dataclass
class BoundState:
    """One energy level.

    ``k`` is the inside wave number and ``q`` the decay constant outside the
    well, with ``k^2 + q^2 = k0^2`` for square-well states. Numeric states
    carry the sampled wavefunction ``psi`` on the nodes ``s``, normalised so
    that the trapezoidal integral of ``psi^2`` is one.
    """

    energy: float
    parity: str = "none"
    k: float | None = None
    q: float | None = None
    psi: np.ndarray | None = field(default=None, repr=False)
    s: np.ndarray | None = field(default=None, repr=False)
    threshold: bool = False
    branch: int | None = None

    def to_dict(self) -> dict:
        out = {"k": self.k, "q": self.q, "energy": self.energy, "parity": self.parity}
        if self.threshold:
            out["threshold"] = True
        return out


def even_residual(x, C):
    """Pole-free form of the even condition: ``x sin x - sqrt(C^2 - x^2) cos x``."""
    return x * np.sin(x) - np.sqrt(np.maximum(C**2 - x**2, 0.0)) * np.cos(x)


def odd_residual(x, C):
    """Pole-free form of the odd condition: ``x cos x + sqrt(C^2 - x^2) sin x``."""
    return x * np.cos(x) + np.sqrt(np.maximum(C**2 - x**2, 0.0)) * np.sin(x)


def _open_scan(a, b, n):
    return a + (b - a) * np.arange(1, n + 1) / (n + 1)


def _roots_on(func, a, b, n_scan):
    """Sign-change scan of ``func`` on the open interval (a, b), then bisection."""
    xs = _open_scan(a, b, n_scan)
    fs = func(xs)
    roots = []
    for i in np.nonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) <= 0)[0]:
        if fs[i] == 0.0:
            roots.append(float(xs[i]))
        elif fs[i + 1] != 0.0:
            roots.append(bisect(func, xs[i], xs[i + 1], xtol=ROOT_XTOL))
    return roots


def solve_single_well(model: DoubleWellModel, params: PhysParams = NATURAL, n_scan: int = SCAN_POINTS) -> list[BoundState]:
    """All bound states of one square well of width ``D`` and depth ``U0``.

    Each branch interval of ``tan`` (where the even or odd right-hand side
    can be matched) is scanned for sign changes on its open interior and the
    brackets are bisected. The lowest even state always exists.

    Returns states sorted by energy, with
    ``E_n = -U0 [1 - (k_n D / 2C)^2]``.
    """
    C, D, U0, k0 = model.C, model.D, model.U0, model.k0
    found = []
    n = 0
    while n * math.pi < C:
        base = n * math.pi
        for parity, lo, hi, resid in (
            ("even", base, base + math.pi / 2, even_residual),
            ("odd", base + math.pi / 2, base + math.pi, odd_residual),
        ):
            if lo >= C:
                continue
            for x in _roots_on(lambda t: resid(t, C), lo, min(hi, C), n_scan):
                found.append((x, parity, False))
            if lo < C <= hi and abs(resid(C, C)) < 1e-14:
                found.append((C, parity, True))
        n += 1

    states = []
    for x, parity, at_threshold in found:
        k = 2.0 * x / D
        q2 = k0**2 - k**2
        threshold = at_threshold or q2 < THRESHOLD_Q2
        energy = -U0 * (1.0 - (x / C) ** 2)
        states.append(BoundState(energy, parity, k=k, q=math.sqrt(max(q2, 0.0)), threshold=threshold))
    states.sort(key=lambda st: st.energy)
    return states


def single_well_residual(state: BoundState, model: DoubleWellModel) -> float:
    x = state.k * model.D / 2.0
    resid = even_residual if state.parity == "even" else odd_residual
    return float(resid(x, model.C))


def hard_wall_residual(k, model: DoubleWellModel, branch: int):
    """``k D - sum of arctan[(q/k) coth(q L)] - branch * pi`` for the walled well.

    The well's edges lie ``L = l + D/2`` and ``L = l - D/2`` from the walls.
    Even branches reproduce the ``+`` form of the condition and odd branches
    the ``-`` form ``arctan(-[(q/k) coth(q L)]^-1)``, which differs by ``pi/2``
    per term.
    """
    k = np.asarray(k, dtype=float)
    D, l, k0 = model.D, model.l, model.k0
    q = np.sqrt(np.maximum(k0**2 - k**2, 0.0))
    total = k * D - branch * np.pi
    for L in (l + D / 2.0, l - D / 2.0):
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(q > 0, (q / k) / np.tanh(q * L), 1.0 / (k * L))
        total = total - np.arctan(ratio)
    return total


def solve_hard_wall(model: DoubleWellModel, params: PhysParams = NATURAL, n_scan: int = SCAN_POINTS) -> list[BoundState]:
    """Negative-energy states of a square well between hard walls.

    ``model.l`` must be set. Branch ``n`` solves ``hard_wall_residual = 0``
    for ``k`` in ``(0, k0)``; even ``n`` are labelled even, odd ``n`` odd.
    A branch without a root is omitted.
    """
    if model.l is None:
        raise ValidationError("solve_hard_wall needs the wall distance l")
    k0, U0 = model.k0, model.U0
    top = float(hard_wall_residual(k0, model, 0))
    states = []
    branch = 0
    while top - branch * math.pi >= -1e-12:
        for k in _roots_on(lambda t: hard_wall_residual(t, model, branch), 0.0, k0, n_scan):
            q2 = k0**2 - k**2
            energy = -U0 * q2 / k0**2
            states.append(
                BoundState(energy, "even" if branch % 2 == 0 else "odd", k=k, q=math.sqrt(q2),
                           threshold=q2 < THRESHOLD_Q2, branch=branch)
            )
        if abs(top - branch * math.pi) < 1e-12:
            states.append(BoundState(0.0, "even" if branch % 2 == 0 else "odd", k=k0, q=0.0,
                                     threshold=True, branch=branch))
        branch += 1
    states.sort(key=lambda st: st.energy)
    return states


def _check_grid(potential: PotentialProfile, grid: Grid, min_nodes: int):
    lo, hi = potential.domain
    h = grid.spacing
    tol = 1e-9 * (hi - lo)
    if potential.boundary == "hard-wall":
        if abs(grid.s_min - lo) > tol or abs(grid.s_max - hi) > tol:
            raise ValidationError(f"hard-wall grids must end exactly on the walls {lo} and {hi}")
    elif grid.s_min > lo + tol or grid.s_max < hi - tol:
        raise ValidationError("grid must cover the whole potential domain")
    if potential.min_feature < min_nodes * h * (1 - 1e-9):
        raise GridTooCoarseError(
            f"grid spacing {h:.4g} gives fewer than {min_nodes} nodes across the "
            f"shortest feature ({potential.min_feature:.4g})"
        )


def _fix_sign(psi, s):
    right = trapezoid(np.where(s > 0, psi, 0.0), s)
    scale = trapezoid(np.abs(psi), s)
    ref = right if abs(right) > 1e-8 * scale else trapezoid(psi, s)
    return -psi if ref < 0 else psi


def binding_reference(potential: PotentialProfile) -> float:
    """Energy below which a state counts as bound."""
    if potential.boundary == "open":
        return min(potential.asymptotes)
    return float(np.max(potential.values))


def numeric_spectrum(
    potential: PotentialProfile,
    grid: Grid,
    n_states: int = 2,
    params: PhysParams = NATURAL,
    min_nodes_per_feature: int = 8,
) -> list[BoundState]:
    """Lowest eigenpairs of the finite-difference Hamiltonian.

    Uses the 3-point Laplacian with zero boundary values on the grid ends
    and the cell-averaged potential at each interior node. Wavefunctions
    are normalised and signed so that their right half (``s > 0``)
    integrates positive. Parity is classified from the overlap of
    ``psi(s)`` with ``psi(-s)`` when both the grid and the potential are
    symmetric.

    Parameters
    ----------
    potential : PotentialProfile
        Hard-wall profiles need a grid ending exactly on the walls; open
        profiles need a grid covering the domain with margin for the
        evanescent tails (a warning is issued below ``3 / q``).
    grid : Grid
    n_states : int
    params : PhysParams
    min_nodes_per_feature : int
        Grids with fewer nodes across the narrowest interval are rejected.
    """
    _check_grid(potential, grid, min_nodes_per_feature)
    s = grid.nodes
    h = grid.spacing
    inner = s[1:-1]
    if not 1 <= n_states <= len(inner):
        raise ValidationError(f"n_states must be between 1 and {len(inner)}")
    kin = params.kinetic / h**2
    diag = 2.0 * kin + potential.cell_average(inner, h)
    off = np.full(len(inner) - 1, -kin)
    energies, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_states - 1))

    symmetric = grid.is_symmetric and potential.is_even()
    ref = binding_reference(potential)
    lo, hi = potential.domain
    margin = min(lo - grid.s_min, grid.s_max - hi)
    states = []
    for energy, vec in zip(energies, vecs.T):
        psi = np.zeros_like(s)
        psi[1:-1] = vec
        psi /= math.sqrt(trapezoid(psi**2, s))
        psi = _fix_sign(psi, s)
        parity = "none"
        if symmetric:
            overlap = trapezoid(psi * psi[::-1], s)
            if overlap > PARITY_OVERLAP:
                parity = "even"
            elif overlap < -PARITY_OVERLAP:
                parity = "odd"
        q = None
        if energy < ref:
            q = math.sqrt(2.0 * params.mass * (ref - energy)) / params.hbar
            if potential.boundary == "open" and margin < 3.0 / q:
                warnings.warn(
                    f"grid margin {margin:.4g} is below 3/q = {3.0 / q:.4g} for E = {energy:.6g}",
                    RuntimeWarning,
                    stacklevel=2,
                )
        states.append(BoundState(float(energy), parity, q=q, psi=psi, s=s))
    return states


def default_grid(model: DoubleWellModel, params: PhysParams = NATURAL, spacing: float | None = None,
                 potential: PotentialProfile | None = None, tail: float = 30.0) -> Grid:
    """Grid for the double well of ``model``.

    Open wells extend to ``+-(d/2 + D + tail/q1)`` with ``q1`` the decay
    constant of the analytic single-well ground state. Walled wells end on
    the walls. The spacing defaults to the coarser of ``D/200`` and a tenth
    of the narrowest feature.
    """
    if potential is None:
        potential = double_well_potential(model)
    if spacing is None:
        spacing = min(model.D / 200.0, potential.min_feature / 10.0)
    if potential.boundary == "hard-wall":
        return Grid.spanning(potential, spacing)
    q1 = solve_single_well(model, params)[0].q
    half = model.d / 2.0 + model.D + tail / q1
    return Grid.symmetric(half, spacing)
