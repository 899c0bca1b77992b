"""Quantum states of a carrier confined to a curved or knotted nanowire.

The wire's curvature produces an attractive effective potential. A tight
knot gives a symmetric double well whose tunnel-split ground doublet can
serve as a qubit. Natural units (hbar = 1, m = 1/2, so E = q^2) are the
default; see :class:`knotqubit.params.PhysParams`.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateCombinationError,
    GridTooCoarseError,
    InputFormatError,
    KnotQubitError,
    LevelDestroyedError,
    NoDoubletError,
    ValidationError,
)
from .params import NATURAL, PhysParams
from .geometry import (
    CurvatureProfile,
    PiecewiseSegment,
    SpaceCurve,
    circle_curve,
    compose_segments,
    curvature_profile,
    nanobar_segments,
    reparametrize_arclength,
    state_count_estimate,
    torus_knot_curve,
    total_curvature,
    trefoil_profile,
)
from .potential import (
    DoubleWellModel,
    PotentialProfile,
    check_field,
    critical_field,
    critical_field_bound,
    dipole_moment,
    double_well_potential,
    effective_potential,
    field_device_potential,
    max_temperature,
    single_well_potential,
    tilt_potential,
)
from .spectrum import (
    BoundState,
    Grid,
    default_grid,
    hard_wall_residual,
    numeric_spectrum,
    single_well_residual,
    solve_hard_wall,
    solve_single_well,
)
from .tunneling import SplitResult, localized_pair, numeric_split, symmetrize, wkb_split
from .scattering import (
    TransmissionPoint,
    find_resonances,
    ramsauer_wavenumbers,
    transmission,
    transmission_sweep,
)
from .dynamics import (
    DriveSpec,
    TLSTrajectory,
    TwoLevelState,
    WavepacketTrajectory,
    cn_evolve,
    oscillation_period,
    peak_transfer,
    prepare_and_release,
    rabi_probability,
    tls_evolve,
    well_population,
)
