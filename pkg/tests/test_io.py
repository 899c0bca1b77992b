import numpy as np
import pytest

from knotqubit import io as kio
from knotqubit.dynamics import DriveSpec, TwoLevelState, tls_evolve
from knotqubit.errors import InputFormatError
from knotqubit.geometry import circle_curve, compose_segments, curvature_profile, nanobar_segments
from knotqubit.potential import DoubleWellModel, double_well_potential, field_device_potential
from knotqubit.scattering import transmission_sweep


def test_curve_roundtrip(tmp_path):
    c = circle_curve(1.3, 50)
    kio.write_curve_csv(tmp_path / "c.csv", c)
    back = kio.read_curve_csv(tmp_path / "c.csv", closed=True)
    np.testing.assert_array_equal(back.points, c.points)


def test_profile_roundtrip(tmp_path):
    prof = curvature_profile(circle_curve(2.0, 64))
    kio.write_profile_csv(tmp_path / "p.csv", prof)
    back = kio.read_profile_csv(tmp_path / "p.csv", closed=True)
    np.testing.assert_array_equal(back.s, prof.s)
    np.testing.assert_array_equal(back.kappa, prof.kappa)
    assert back.period == pytest.approx(prof.period, rel=1e-12)


def test_profile_non_monotone(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("s,kappa\n0,1\n1,1\n0.5,1\n")
    with pytest.raises(InputFormatError) as info:
        kio.read_profile_csv(path)
    assert info.value.line == 4
    assert ":4:" in str(info.value)


@pytest.mark.parametrize("body,line", [
    ("x,y\n1,2\n", 1),
    ("x,y,z\n1,2,3\n4,5\n", 3),
    ("x,y,z\n1,2,3\n4,five,6\n", 3),
    ("x,y,z\n1,2,nan\n", 2),
    ("", 1),
])
def test_curve_errors(tmp_path, body, line):
    path = tmp_path / "c.csv"
    path.write_text(body)
    with pytest.raises(InputFormatError) as info:
        kio.read_curve_csv(path)
    assert info.value.line == line


def test_no_rows(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("x,y,z\n")
    with pytest.raises(InputFormatError):
        kio.read_curve_csv(path)


def test_segments(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("kind,length,radius\nstraight,2,\narc,1.5707963267948966,1\nstraight,2,\n")
    prof = compose_segments(kio.read_segments_csv(path))
    assert prof.length == pytest.approx(4 + np.pi / 2)


def test_segment_error_line(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("kind,length,radius\nstraight,2,\narc,1,-3\n")
    with pytest.raises(InputFormatError) as info:
        kio.read_segments_csv(path)
    assert info.value.line == 3


def test_potential_csv_roundtrip(tmp_path):
    pot = double_well_potential(DoubleWellModel.knot(0.5, d=0.01))
    kio.write_potential_csv(tmp_path / "v.csv", pot)
    back = kio.read_potential_csv(tmp_path / "v.csv")
    np.testing.assert_array_equal(back.breakpoints, pot.breakpoints)
    np.testing.assert_array_equal(back.interval_ends(), pot.interval_ends())


def test_potential_json_roundtrip(tmp_path):
    pot = field_device_potential(DoubleWellModel.knot(1.0), 0.01)
    kio.write_json(tmp_path / "v.json", kio.potential_to_dict(pot))
    back = kio.potential_from_dict(kio.read_json(tmp_path / "v.json"))
    np.testing.assert_array_equal(back.breakpoints, pot.breakpoints)
    np.testing.assert_array_equal(back.values, pot.values)
    assert (back.boundary, back.representation, back.asymptotes) == (pot.boundary, pot.representation, pot.asymptotes)


def test_full_precision(tmp_path):
    x = 0.1 + 0.2
    kio.write_wavefunction_csv(tmp_path / "w.csv", [x], [1 / 3])
    text = (tmp_path / "w.csv").read_text()
    assert text == f"s,psi\n{x!r},{1 / 3!r}\n"
    row = text.splitlines()[1].split(",")
    assert float(row[0]) == x and float(row[1]) == 1 / 3


def test_sweep_and_tls(tmp_path):
    pot = double_well_potential(DoubleWellModel.knot(0.5, d=0.01))
    kio.write_sweep_csv(tmp_path / "t.csv", transmission_sweep(0.1, 1.0, 5, pot))
    assert (tmp_path / "t.csv").read_text().startswith("q,T\n")
    traj = tls_evolve(0.03, DriveSpec(), TwoLevelState.left(), 1.0, 0.5)
    kio.write_tls_csv(tmp_path / "a.csv", traj)
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "t,reP_aL,imP_aL,reP_aR,imP_aR"
    assert len(lines) == len(traj.t) + 1


def test_nanobar_segments_file(tmp_path):
    segs = nanobar_segments(1.0, 0.5, lead=2.0)
    path = tmp_path / "n.csv"
    path.write_text("kind,length,radius\n" + "".join(
        f"{s.kind},{s.length!r},{'' if s.radius is None else repr(s.radius)}\n" for s in segs))
    prof = compose_segments(kio.read_segments_csv(path))
    ref = compose_segments(segs)
    np.testing.assert_array_equal(prof.s, ref.s)
    np.testing.assert_array_equal(prof.kappa, ref.kappa)
