"""Double-exponential Sinc collocation for radial Schrodinger eigenvalues."""
from .analysis import (
    ConvergenceRecord,
    StudyConfig,
    count_convergent,
    emit_csv,
    relative_error,
    relative_error_approximation,
    run_study,
)
from .kernels import BACKEND
from .maps import (
    DecayProfile,
    GeneralizedMap,
    RateMode,
    SimpleMap,
    decay_profile,
    map_eval,
    transformed_potential,
)
from .potential import BUILTIN_POTENTIALS, Potential, asymptotics, builtin, evaluate, scale, unscale_eigenvalue
from .solver import assemble, lambert_w, mesh_size, solve, spectrum

__version__ = "0.1.0"
