"""Multiple orthogonal polynomials on the unit circle from moment data."""
from .cd import (
    CDEvaluation,
    LatticePath,
    PathError,
    admissible_at,
    bivariate_residual,
    cd_bivariate,
    cd_check,
    cd_sides,
    circle_points,
    make_path,
    random_admissible_path,
    sample_points,
)
from .core import (
    MomentMatrix,
    Mopuc,
    NotNormal,
    ZeroIndex,
    assemble_M,
    box_indices,
    graded_indices,
    inner,
    is_normal,
    type1,
    type1star,
    type2,
    type2star,
)
from .linalg import Normality
from .measures import (
    BernsteinSzego1,
    ConfigError,
    IndefiniteDensityWarning,
    LebesgueAtoms,
    MeasureSystem,
    TrigDensity,
    bernstein_szego,
    lebesgue_atoms,
    moment,
    parse_system,
    trig_density,
)
from .poly import Poly, PolyVector
from .corpus import random_corpus, random_system
from .recurrence import (
    CoeffRecord,
    IdentityReport,
    alpha,
    beta,
    coeffs,
    gamma,
    kappa,
    rho,
    verify_A_matrix,
    verify_biorthogonality,
    verify_compat_coeffs,
    verify_compat_polys,
    verify_gamma,
    verify_third,
    verify_type1,
    verify_type2,
    verify_type2star,
)
from .scalars import (
    DEFAULT_POLICY,
    ExactField,
    FloatField,
    GaussRat,
    TolerancePolicy,
    make_field,
    scalar_is_zero,
)
from .sweep import SweepSummary, box_sweep, graded_sweep, reports_at, sweep
from .szego import SingularMinorError, szego_oracle
