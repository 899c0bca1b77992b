"""Command-line front end.

Every run writes its artifacts plus ``manifest.json`` (resolved inputs, unit
system and library versions) into ``--out-dir``. Parameter precedence is
command-line flag, then the matching block of the ``--config`` JSON file,
then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import sys
from pathlib import Path

import numpy as np
import scipy
from scipy import constants

from . import __version__
from . import io as kio
from .dynamics import (
    DriveSpec,
    TwoLevelState,
    cn_evolve,
    oscillation_period,
    prepare_and_release,
    tls_evolve,
)
from .errors import (
    DegenerateCombinationError,
    GridTooCoarseError,
    InputFormatError,
    KnotQubitError,
    LevelDestroyedError,
    NoDoubletError,
    ValidationError,
)
from .geometry import (
    compose_segments,
    curvature_profile,
    nanobar_segments,
    reparametrize_arclength,
    state_count_estimate,
    total_curvature,
    torus_knot_curve,
)
from .params import PhysParams
from .potential import (
    DoubleWellModel,
    critical_field,
    critical_field_bound,
    dipole_moment,
    double_well_potential,
    field_device_potential,
    max_temperature,
    single_well_potential,
    tilt_potential,
)
from .scattering import find_resonances, ramsauer_wavenumbers, transmission_sweep
from .spectrum import binding_reference, default_grid, numeric_spectrum, solve_hard_wall, solve_single_well
from .tunneling import localized_pair, numeric_split, wkb_split, wkb_order_of_magnitude

EXIT_CODES = (
    (InputFormatError, 3),
    (GridTooCoarseError, 6),
    (ValidationError, 2),
    (NoDoubletError, 4),
    (LevelDestroyedError, 5),
    (DegenerateCombinationError, 7),
    (KnotQubitError, 1),
)

REFERENCE_TRANSMISSION = {"kappa": 1.0, "D": 2.5, "rho0": 0.5, "d": 0.01}
QUOTED_RESONANCES = [0.38, 1.15, 1.81, 2.46, 3.06, 3.74]

NM = 1e-9

DEFAULTS = {
    "geometry": {"curve": None, "segments": None, "trefoil": None, "nanobar": None,
                 "closed": False, "resample": 2048, "lead": 0.0},
    "spectrum": {"rho0": 1.0, "d": 0.0, "l": None, "kappa": None, "D": None, "well": "single",
                 "field": 0.0, "n_states": 4, "spacing": None, "wavefunctions": False},
    "split": {"rho0": 1.0, "d": 5.0, "kappa": None, "D": None, "method": "both", "spacing": None},
    "transmission": {"rho0": 1.0, "d": 0.01, "kappa": None, "D": None, "qmin": 0.01, "qmax": 4.0,
                     "n": 4000, "threshold": 0.999, "field": 0.0},
    "dynamics": {"mode": "tls", "deltaE": None, "rho0": 1.0, "d": 5.0, "bias0": 0.0, "amp": None,
                 "drive_freq": None, "phase": 0.0, "periods": 3.0, "t_end": None, "dt": None,
                 "initial": "L", "field": None, "steps": None, "spacing": None},
    "reproduce": {},
}

REFERENCE_DEFAULTS = {
    "spectrum": {"rho0": 0.5, "d": 0.01, "well": "single"},
    "split": {"rho0": 1.0, "d": 5.0},
    "transmission": {**REFERENCE_TRANSMISSION, "qmin": 0.01, "qmax": 4.0, "n": 4000},
    "dynamics": {"rho0": 1.0, "d": 5.0},
}

EPILOG = """\
output files (UTF-8 CSV, header row, full round-trip precision):
  geometry      profile.csv     s,kappa
  spectrum      wavefunctions_*.csv   s,psi
  transmission  sweep.csv       q,T
  dynamics tls  trajectory.csv  t,reP_aL,imP_aL,reP_aR,imP_aR
  dynamics wavepacket  trajectory.csv  t,P_L,P_R,norm
JSON summaries and manifest.json are written next to them.

units: 'natural' uses hbar = 1, m = 1/2 (E = q^2). 'physical' treats the
carrier as an electron; lengths are read in nm, wave numbers in 1/nm and
energies in eV, and results are reported in SI units.
"""


class Context:
    def __init__(self, units: str, out_dir: Path):
        self.units = units
        self.out_dir = out_dir
        self.params = PhysParams.physical() if units == "physical" else PhysParams.natural()
        self.length = NM if units == "physical" else 1.0
        self.energy = constants.e if units == "physical" else 1.0
        self.outputs: list[str] = []

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.outputs.append(str(p))
        return p


def _model(ctx: Context, cfg: dict, l=None) -> DoubleWellModel:
    L = ctx.length
    d = cfg["d"] * L
    if cfg.get("kappa") is not None or cfg.get("D") is not None:
        if cfg.get("kappa") is None or cfg.get("D") is None:
            raise ValidationError("--kappa and --D must be given together")
        rho0 = cfg["rho0"] * L if cfg.get("rho0") is not None else None
        return DoubleWellModel.from_curvature(cfg["kappa"] / L, cfg["D"] * L, d, l=l, rho0=rho0, params=ctx.params)
    return DoubleWellModel.knot(cfg["rho0"] * L, d=d, l=l, params=ctx.params)


def cmd_geometry(ctx: Context, cfg: dict) -> dict:
    sources = [k for k in ("curve", "segments", "trefoil", "nanobar") if cfg.get(k) is not None]
    if len(sources) != 1:
        raise ValidationError("give exactly one of --curve, --segments, --trefoil, --nanobar")
    if cfg.get("curve"):
        curve = kio.read_curve_csv(cfg["curve"], closed=cfg["closed"])
        profile = curvature_profile(reparametrize_arclength(curve, int(cfg["resample"])))
    elif cfg.get("trefoil"):
        curve = torus_knot_curve(max(int(cfg["trefoil"]), 512))
        profile = curvature_profile(reparametrize_arclength(curve, int(cfg["trefoil"])))
    elif cfg.get("segments"):
        profile = compose_segments(kio.read_segments_csv(cfg["segments"]), closed=cfg["closed"])
    else:
        radius, gap = (float(x) for x in str(cfg["nanobar"]).split(","))
        profile = compose_segments(nanobar_segments(radius, gap, float(cfg["lead"])))
    kio.write_profile_csv(ctx.path("profile.csv"), profile)
    tk = total_curvature(profile)
    summary = {
        "closed": profile.closed,
        "length": profile.length,
        "total_curvature": tk,
        "total_curvature_over_4pi": tk / (4 * math.pi),
        "N_s": state_count_estimate(profile, ctx.params),
        "kappa_max": float(profile.kappa.max()),
        "kappa_min": float(profile.kappa.min()),
    }
    kio.write_json(ctx.path("geometry.json"), summary)
    return summary


def _numeric_states(ctx, potential, model, cfg, n_states):
    spacing = cfg.get("spacing")
    spacing = spacing * ctx.length if spacing is not None else None
    grid = default_grid(model, ctx.params, spacing=spacing, potential=potential)
    return grid, numeric_spectrum(potential, grid, n_states, ctx.params)


def cmd_spectrum(ctx: Context, cfg: dict) -> dict:
    l = cfg["l"] * ctx.length if cfg.get("l") is not None else None
    model = _model(ctx, cfg, l=l)
    well = cfg["well"]
    analytic = []
    if well == "single":
        potential = single_well_potential(model)
        analytic = solve_hard_wall(model, ctx.params) if l is not None else solve_single_well(model, ctx.params)
    elif well == "double":
        potential = double_well_potential(model)
        if cfg["field"]:
            potential = tilt_potential(potential, cfg["field"], ctx.params)
    elif well == "device":
        potential = field_device_potential(model, cfg["field"], ctx.params)
    else:
        raise ValidationError(f"unknown well kind {well!r}")
    grid, numeric = _numeric_states(ctx, potential, model, cfg, int(cfg["n_states"]))
    if cfg.get("wavefunctions"):
        for i, st in enumerate(numeric):
            kio.write_wavefunction_csv(ctx.path(f"wavefunctions_{i}.csv"), st.s, st.psi)
    summary = {
        "model": {"kappa": model.kappa, "D": model.D, "d": model.d, "U0": model.U0, "C": model.C,
                  "rho0": model.rho0, "l": model.l},
        "well": well,
        "analytic": [st.to_dict() for st in analytic],
        "numeric": [st.to_dict() for st in numeric],
        "numeric_bound": sum(st.energy < binding_reference(potential) for st in numeric),
        "grid": {"s_min": grid.s_min, "s_max": grid.s_max, "n": grid.n},
    }
    kio.write_json(ctx.path("spectrum.json"), summary)
    return summary


def cmd_split(ctx: Context, cfg: dict) -> dict:
    model = _model(ctx, cfg)
    if cfg["method"] not in ("wkb", "numeric", "both"):
        raise ValidationError("--method must be wkb, numeric or both")
    out = {"model": {"kappa": model.kappa, "D": model.D, "d": model.d, "U0": model.U0, "rho0": model.rho0}}
    if cfg["method"] in ("wkb", "both"):
        k1 = solve_single_well(model, ctx.params)[0].k
        out["wkb"] = wkb_split(model, k1, ctx.params).to_dict()
    if cfg["method"] in ("numeric", "both"):
        potential = double_well_potential(model)
        spacing = cfg.get("spacing")
        grid = default_grid(model, ctx.params, spacing=spacing * ctx.length if spacing else None)
        out["numeric"] = numeric_split(potential, grid, ctx.params, model=model).to_dict()
    if "wkb" in out and "numeric" in out:
        out["wkb_over_numeric"] = out["wkb"]["deltaE"] / out["numeric"]["deltaE"]
    kio.write_json(ctx.path("split.json"), out)
    return out


def cmd_transmission(ctx: Context, cfg: dict) -> dict:
    model = _model(ctx, cfg)
    potential = double_well_potential(model)
    if cfg["field"]:
        raise ValidationError("transmission needs a piecewise-constant potential; --field is not supported")
    inv = 1.0 / ctx.length
    sweep = transmission_sweep(cfg["qmin"] * inv, cfg["qmax"] * inv, int(cfg["n"]), potential, ctx.params)
    res = find_resonances(sweep, cfg["threshold"], potential, ctx.params)
    kio.write_sweep_csv(ctx.path("sweep.csv"), sweep)
    width = 2 * model.D + model.d
    ramsauer = ramsauer_wavenumbers(model.U0, width, cfg["qmax"] * inv, ctx.params)
    kio.write_json(ctx.path("resonances.json"), res)
    summary = {"resonances": res, "ramsauer": ramsauer, "n_points": len(sweep)}
    kio.write_json(ctx.path("transmission.json"), summary)
    return summary


def _parse_freq(value, deltaE, hbar):
    if value is None:
        return 0.0
    if isinstance(value, str):
        if value == "resonant":
            return deltaE / hbar
        return float(value)
    return float(value)


def cmd_dynamics(ctx: Context, cfg: dict) -> dict:
    hbar = ctx.params.hbar
    if cfg["mode"] == "tls":
        if cfg.get("deltaE") is None:
            raise ValidationError("dynamics tls needs --deltaE")
        deltaE = cfg["deltaE"] * ctx.energy
        freq = _parse_freq(cfg.get("drive_freq"), deltaE, hbar)
        amp = cfg["amp"] * ctx.energy if cfg.get("amp") is not None else (0.1 * deltaE if freq > 0 else 0.0)
        drive = DriveSpec(cfg["bias0"] * ctx.energy, amp, freq, cfg["phase"])
        if cfg.get("field") is not None:
            model = _model(ctx, cfg)
            initial = prepare_and_release(model, cfg["field"], ctx.params)
        else:
            initial = {"L": TwoLevelState.left(), "R": TwoLevelState.right(),
                       "sym": TwoLevelState.symmetric(), "anti": TwoLevelState.antisymmetric()}[cfg["initial"]]
        rabi = 2 * math.pi * hbar / deltaE
        if cfg.get("t_end") is not None:
            t_end = cfg["t_end"]
        elif amp > 0 and freq > 0:
            t_end = 2 * math.pi * hbar / (amp / 2.0)
        else:
            t_end = cfg["periods"] * rabi
        dt = cfg["dt"] if cfg.get("dt") is not None else 0.005 * min(rabi, 2 * math.pi / freq if freq else rabi)
        traj = tls_evolve(deltaE, drive, initial, t_end, dt, ctx.params)
        kio.write_tls_csv(ctx.path("trajectory.csv"), traj)
        summary = {
            "deltaE": deltaE,
            "drive": {"bias0": drive.bias0, "amp": drive.amp, "freq": drive.freq, "phase": drive.phase},
            "initial": [[initial.aL.real, initial.aL.imag], [initial.aR.real, initial.aR.imag]],
            "t_end": float(traj.t[-1]),
            "steps": len(traj.t) - 1,
            "max_P_R": float(traj.p_right.max()),
            "min_P_R": float(traj.p_right.min()),
            "norm_drift": float(np.max(np.abs(traj.norm - 1.0))),
            "rabi_period": rabi,
        }
    elif cfg["mode"] == "wavepacket":
        model = _model(ctx, cfg)
        potential = double_well_potential(model)
        spacing = cfg.get("spacing")
        grid = default_grid(model, ctx.params, spacing=spacing * ctx.length if spacing else None, tail=20.0)
        split = numeric_split(potential, grid, ctx.params)
        _, psi_left = localized_pair(*split.states)
        period = 2 * math.pi * hbar / split.deltaE
        dt = cfg["dt"] if cfg.get("dt") is not None else min(period / 200.0, 0.1 * hbar / potential.max_abs())
        steps = int(cfg["steps"]) if cfg.get("steps") else int(math.ceil(cfg["periods"] * period / dt))
        traj = cn_evolve(potential, psi_left, grid, dt, steps, ctx.params)
        kio.write_wavepacket_csv(ctx.path("trajectory.csv"), traj)
        summary = {
            "deltaE": split.deltaE,
            "expected_period": period,
            "measured_period": oscillation_period(traj.t, traj.p_left),
            "dt": dt,
            "steps": steps,
            "norm_drift": float(np.max(np.abs(traj.norm - 1.0))),
        }
    else:
        raise ValidationError("dynamics mode must be 'tls' or 'wavepacket'")
    kio.write_json(ctx.path("dynamics.json"), summary)
    return summary


def reference_numbers(params: PhysParams | None = None) -> dict:
    """Every quantity that can be checked against a quoted value."""
    params = params or PhysParams.natural()
    knot = DoubleWellModel.knot(0.5, d=0.01, params=params)
    ground = solve_single_well(knot, params)
    k1 = ground[0].k
    out = {
        "C": knot.C,
        "single_well": {
            "n_even": sum(st.parity == "even" for st in ground),
            "n_odd": sum(st.parity == "odd" for st in ground),
            "k1_rho0_exact": k1 * knot.rho0,
            "k1_rho0_quoted": 0.2,
            "E_over_U0_exact": ground[0].energy / knot.U0,
            "E_over_U0_quoted": -(3 / 5) ** 2,
        },
    }
    ref = DoubleWellModel.from_curvature(**REFERENCE_TRANSMISSION, params=params)
    pot = double_well_potential(ref)
    res = find_resonances(transmission_sweep(0.01, 4.0, 4000, pot, params), 0.999, pot, params)
    out["resonances"] = {"computed": res, "quoted": QUOTED_RESONANCES,
                         "ramsauer": ramsauer_wavenumbers(ref.U0, 2 * ref.D + ref.d, 4.0, params)}
    profile = curvature_profile(reparametrize_arclength(torus_knot_curve(1024), 2048))
    tk = total_curvature(profile)
    out["trefoil"] = {"total_curvature": tk, "four_pi": 4 * math.pi, "N_s": state_count_estimate(profile, params)}
    out["field_control"] = {
        "critical_field": critical_field(knot, params),
        "critical_field_bound": critical_field_bound(knot, params),
        "dipole_moment": dipole_moment(knot, params),
        "max_temperature": max_temperature(knot, params),
    }
    phys = PhysParams.physical()
    knot_si = DoubleWellModel.knot(1e-9, d=0.0, params=phys)
    out["max_temperature_kelvin_rho0_1nm"] = max_temperature(knot_si, phys)
    knot1 = DoubleWellModel.knot(1.0, d=5.0, params=params)
    k1 = solve_single_well(knot1, params)[0].k
    wkb = wkb_split(knot1, k1, params)
    num = numeric_split(double_well_potential(knot1), default_grid(knot1, params), params, model=knot1)
    out["split_rho0_1_d_5"] = {"wkb": wkb.to_dict(), "numeric": num.to_dict(),
                               "order_of_magnitude": wkb_order_of_magnitude(knot1, params)}
    return out


def cmd_reproduce(ctx: Context, cfg: dict) -> dict:
    out = reference_numbers(ctx.params if ctx.units == "natural" else None)
    kio.write_json(ctx.path("paper_numbers.json"), out)
    return out


COMMANDS = {
    "geometry": cmd_geometry,
    "spectrum": cmd_spectrum,
    "split": cmd_split,
    "transmission": cmd_transmission,
    "dynamics": cmd_dynamics,
    "reproduce": cmd_reproduce,
}


def _add_model_flags(p):
    S = argparse.SUPPRESS
    p.add_argument("--rho0", type=float, default=S, help="thread radius (sets kappa = 1/(2 rho0), D = 5 rho0)")
    p.add_argument("--d", type=float, default=S, help="barrier width between the wells")
    p.add_argument("--kappa", type=float, default=S, help="plateau curvature (with --D, overrides --rho0)")
    p.add_argument("--D", type=float, default=S, help="well width (with --kappa)")
    p.add_argument("--paper-defaults", action="store_true", default=S,
                   help="use the reference parameter set for this quantity")


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(
        prog="knotqubit",
        description="Curvature-induced double-well qubit: geometry, spectra, splitting, transport, dynamics.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--units", choices=("natural", "physical"), default=S)
    parser.add_argument("--out-dir", default=S, help="directory for output files (default: ./out)")
    parser.add_argument("--config", default=None, help="JSON file with per-subcommand parameter blocks")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("geometry", help="curvature profile, total curvature and state count")
    g.add_argument("--curve", default=S, help="CSV with header x,y,z")
    g.add_argument("--segments", default=S, help="CSV with header kind,length,radius")
    g.add_argument("--trefoil", type=int, default=S, metavar="N", help="built-in trefoil resampled at N points")
    g.add_argument("--nanobar", default=S, metavar="R,d", help="bent nano-bar device with arc radius R and gap d")
    g.add_argument("--lead", type=float, default=S, help="straight lead length for --nanobar")
    g.add_argument("--closed", action="store_true", default=S)
    g.add_argument("--resample", type=int, default=S, help="equal-arclength sample count for --curve")

    sp = sub.add_parser("spectrum", help="bound states, analytic and finite-difference")
    _add_model_flags(sp)
    sp.add_argument("--l", type=float, default=S, help="hard-wall distance from the well centre")
    sp.add_argument("--well", choices=("single", "double", "device"), default=S)
    sp.add_argument("--field", type=float, default=S, help="tilt (double) or shaping (device) field")
    sp.add_argument("--n-states", dest="n_states", type=int, default=S)
    sp.add_argument("--spacing", type=float, default=S)
    sp.add_argument("--wavefunctions", action="store_true", default=S)

    st = sub.add_parser("split", help="tunnel splitting of the ground doublet")
    _add_model_flags(st)
    st.add_argument("--method", choices=("wkb", "numeric", "both"), default=S)
    st.add_argument("--spacing", type=float, default=S)

    tr = sub.add_parser("transmission", help="transmission sweep and resonances")
    _add_model_flags(tr)
    tr.add_argument("--qmin", type=float, default=S)
    tr.add_argument("--qmax", type=float, default=S)
    tr.add_argument("--n", type=int, default=S)
    tr.add_argument("--threshold", type=float, default=S)

    dy = sub.add_parser("dynamics", help="two-level or wavepacket dynamics")
    dy.add_argument("mode", choices=("tls", "wavepacket"))
    _add_model_flags(dy)
    dy.add_argument("--deltaE", type=float, default=S)
    dy.add_argument("--bias0", type=float, default=S)
    dy.add_argument("--amp", type=float, default=S)
    dy.add_argument("--drive-freq", dest="drive_freq", default=S, help="angular frequency or 'resonant'")
    dy.add_argument("--phase", type=float, default=S)
    dy.add_argument("--periods", type=float, default=S)
    dy.add_argument("--t-end", dest="t_end", type=float, default=S)
    dy.add_argument("--dt", type=float, default=S)
    dy.add_argument("--initial", choices=("L", "R", "sym", "anti"), default=S)
    dy.add_argument("--field", type=float, default=S, help="prepare by releasing this longitudinal field")
    dy.add_argument("--steps", type=int, default=S)
    dy.add_argument("--spacing", type=float, default=S)

    sub.add_parser("reproduce", help="recompute every reference number into paper_numbers.json")
    return parser


def resolve_config(args: argparse.Namespace) -> tuple[str, str, Path, dict]:
    explicit = vars(args).copy()
    command = explicit.pop("command")
    config_path = explicit.pop("config", None)
    file_cfg = {}
    if config_path:
        try:
            file_cfg = kio.read_json(config_path)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {config_path}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ValidationError("config file must hold a JSON object")
    units = explicit.pop("units", file_cfg.get("units", "natural"))
    if units not in ("natural", "physical"):
        raise ValidationError(f"unknown unit system {units!r}")
    out_dir = Path(explicit.pop("out_dir", file_cfg.get("out_dir", "out")))
    cfg = dict(DEFAULTS[command])
    block = file_cfg.get(command, {})
    if not isinstance(block, dict):
        raise ValidationError(f"config block {command!r} must be an object")
    unknown = set(block) - set(cfg) - {"paper_defaults"}
    if unknown:
        raise ValidationError(f"unknown keys in config block {command!r}: {sorted(unknown)}")
    use_ref = explicit.pop("paper_defaults", block.get("paper_defaults", False))
    if use_ref:
        cfg.update(REFERENCE_DEFAULTS.get(command, {}))
    cfg.update({k: v for k, v in block.items() if k != "paper_defaults"})
    cfg.update(explicit)
    cfg["paper_defaults"] = bool(use_ref)
    return command, units, out_dir, cfg


def _manifest(ctx: Context, command: str, cfg: dict) -> dict:
    return {
        "command": command,
        "inputs": cfg,
        "units": ctx.units,
        "params": {"hbar": ctx.params.hbar, "mass": ctx.params.mass, "charge": ctx.params.charge,
                   "boltzmann": ctx.params.boltzmann},
        "versions": {"knotqubit": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
        "seeds": None,
        "outputs": list(ctx.outputs),
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        command, units, out_dir, cfg = resolve_config(args)
        ctx = Context(units, out_dir)
        result = COMMANDS[command](ctx, cfg)
        kio.write_json(out_dir / "manifest.json", _manifest(ctx, command, cfg))
    except KnotQubitError as exc:
        print(f"knotqubit {args.command}: error: {exc}", file=sys.stderr)
        for cls, code in EXIT_CODES:
            if isinstance(exc, cls):
                return code
        return 1
    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
