"""Moran measures on the line: spectra, certificates, densities, tilings."""

from .core import (
    AtomCollisionError,
    DigitSet,
    DiscreteMeasure,
    Level,
    LevelClass,
    MoranError,
    MoranStructureError,
    MoranSyntaxError,
    MoranSystem,
    ZeroWitness,
    atoms,
    classify_level,
    fourier_level,
    fourier_tail,
    make_system,
    mask_eval,
    normalize_level,
    parse_system,
    zero_set_contains,
)
from .hadamard import (
    HadamardTriple,
    construct_L,
    hadamard_triple,
    is_hadamard,
    unitarity_residual,
)
from .spectrum import (
    OrthogonalityReport,
    SpectrumLevel,
    check_orthogonal,
    digit_star,
    exp_matrix_residual,
    level_factors,
    level_spectrum,
    q_partial,
    q_sum_finite,
)
from .certificates import (
    Certificate,
    Verdict,
    certify,
    epsilon_next_level,
    f_eval,
    f_min_points,
    h_bound,
    lambda_norm_check,
    mask_lower_bound,
    tail_constant,
)
from .density import (
    Histogram,
    IntervalUnion,
    density_histogram,
    density_verdict,
    support_cover,
    tiling_check,
    uniformity_check,
)

__version__ = "0.1.0"
