"""qcmap: planar quasiconformal maps from piecewise-Lipschitz Beltrami
coefficients, built on an FFT singular-integral engine, with the operator
identities and regularity claims behind the construction exposed as
measurable diagnostics."""

from .domains import (
    BoundaryPoint,
    Disc,
    DiscMinusTwoDiscs,
    DisjointUnion,
    Domain,
    Drop,
    Peach,
    SmoothJordan,
    Square,
    boundary_distance,
    boundary_parametrization,
    contains,
    geodesic_distance,
    indicator,
)
from .estimators import QuasiconformalMapper
from .grid import (
    Field,
    FrequencyMultiplier,
    GridSpec,
    apply_multiplier,
    bilinear,
    l2_norm,
    make_grid,
    read_field,
    sample,
    write_field,
)
from .operators import (
    CZConstant,
    KernelDescriptor,
    beurling,
    beurling_power,
    boundary_beurling,
    cauchy,
    commutator,
    cz_constant,
    disc_oracle,
    drop_example_oracle,
    maximal,
    pv_quadrature,
    truncated,
)
from .regularity import (
    BilipschitzReport,
    SeminormEstimate,
    bilipschitz_constants,
    cancellation_defect,
    holder_seminorm,
    measured_holder_exponent,
    theorem1_defect,
)
from .solve import (
    BeltramiCoefficient,
    MapEvaluator,
    Solution,
    evaluate_map,
    factor_solve,
    invert_map,
    jacobian_scan,
    map_partials,
    mori_exponent,
    neumann_solve,
    residual,
)

__version__ = "0.1.0"
