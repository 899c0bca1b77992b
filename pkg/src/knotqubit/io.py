"""CSV and JSON readers and writers for profiles, spectra, sweeps and trajectories.

All files are UTF-8 with LF line endings. Floats are written with ``repr``
so that they round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputFormatError
from .geometry import CurvatureProfile, PiecewiseSegment, SpaceCurve
from .potential import PotentialProfile


def _fmt(x) -> str:
    return repr(float(x))


def _read_table(path, header: tuple[str, ...]):
    path = Path(path)
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise InputFormatError("file is empty", path, 1) from None
        if tuple(c.strip() for c in first) != header:
            raise InputFormatError(f"expected header {','.join(header)!r}, got {','.join(first)!r}", path, 1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputFormatError(f"expected {len(header)} columns, got {len(row)}", path, lineno)
            rows.append((lineno, [c.strip() for c in row]))
    if not rows:
        raise InputFormatError("no data rows", path)
    return path, rows


def _floats(path, rows):
    out = []
    for lineno, row in rows:
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise InputFormatError(f"non-numeric value in {row!r}", path, lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise InputFormatError(f"non-finite value in {row!r}", path, lineno)
        out.append(vals)
    return np.array(out)


def _write_rows(path, header, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def read_curve_csv(path, closed: bool = False) -> SpaceCurve:
    path, rows = _read_table(path, ("x", "y", "z"))
    return SpaceCurve(_floats(path, rows), closed=closed)


def write_curve_csv(path, curve: SpaceCurve):
    pts = curve.points
    return _write_rows(path, ("x", "y", "z"), (pts[:, 0], pts[:, 1], pts[:, 2]))


def read_profile_csv(path, closed: bool = False, period: float | None = None) -> CurvatureProfile:
    """Read ``s,kappa``; arclength must be strictly increasing."""
    path, rows = _read_table(path, ("s", "kappa"))
    data = _floats(path, rows)
    for (lineno, _), prev, cur in zip(rows[1:], data[:-1, 0], data[1:, 0]):
        if cur <= prev:
            raise InputFormatError(f"arclength not strictly increasing ({cur!r} after {prev!r})", path, lineno)
    for (lineno, _), k in zip(rows, data[:, 1]):
        if k < 0:
            raise InputFormatError(f"negative curvature {k!r}", path, lineno)
    if closed and period is None:
        step = data[-1, 0] - data[-2, 0]
        period = data[-1, 0] - data[0, 0] + step
    return CurvatureProfile(data[:, 0], data[:, 1], closed=closed, period=period)


def write_profile_csv(path, profile: CurvatureProfile):
    return _write_rows(path, ("s", "kappa"), (profile.s, profile.kappa))


def read_segments_csv(path) -> list[PiecewiseSegment]:
    """Read ``kind,length,radius``; ``radius`` may be empty for straight rods."""
    path, rows = _read_table(path, ("kind", "length", "radius"))
    segs = []
    for lineno, (kind, length, radius) in rows:
        try:
            seg = PiecewiseSegment(
                kind,
                float(length),
                float(radius) if radius else None,
            )
        except ValueError as exc:
            raise InputFormatError(str(exc), path, lineno) from None
        segs.append(seg)
    return segs


def write_potential_csv(path, potential: PotentialProfile):
    s, v = potential.nodes()
    return _write_rows(path, ("s", "V"), (s, v))


def read_potential_csv(path, boundary: str = "open") -> PotentialProfile:
    path, rows = _read_table(path, ("s", "V"))
    data = _floats(path, rows)
    try:
        return PotentialProfile.from_nodes(data[:, 0], data[:, 1], boundary=boundary)
    except ValueError as exc:
        raise InputFormatError(str(exc), path) from None


def potential_to_dict(potential: PotentialProfile) -> dict:
    return {
        "breakpoints": potential.breakpoints.tolist(),
        "values": potential.values.tolist(),
        "representation": potential.representation,
        "boundary": potential.boundary,
        "asymptotes": list(potential.asymptotes),
    }


def potential_from_dict(data: dict) -> PotentialProfile:
    return PotentialProfile(
        data["breakpoints"],
        data["values"],
        data.get("representation", "constant"),
        data.get("boundary", "open"),
        tuple(data.get("asymptotes", (0.0, 0.0))),
    )


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, allow_nan=True)
        fh.write("\n")
    return path


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_wavefunction_csv(path, s, psi):
    return _write_rows(path, ("s", "psi"), (s, psi))


def write_sweep_csv(path, sweep):
    return _write_rows(path, ("q", "T"), ([p.q for p in sweep], [p.T for p in sweep]))


def write_tls_csv(path, traj):
    a = traj.amplitudes
    return _write_rows(
        path,
        ("t", "reP_aL", "imP_aL", "reP_aR", "imP_aR"),
        (traj.t, a[:, 0].real, a[:, 0].imag, a[:, 1].real, a[:, 1].imag),
    )


def write_wavepacket_csv(path, traj):
    return _write_rows(path, ("t", "P_L", "P_R", "norm"), (traj.t, traj.p_left, traj.p_right, traj.norm))
