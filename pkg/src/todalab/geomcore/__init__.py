"""Chart-agnostic Poisson-geometry kernel."""
from .charts import Chart, ChartError, PhasePoint, SingularPoint
from .checks import (
    IdentityReport,
    SamplerConfig,
    check_casimir,
    check_compatibility,
    check_equal,
    check_involution,
    check_jacobi,
    check_lie_relation,
    check_poisson_map,
    check_trivial_bracket,
    default_seed,
    fields_equal,
    run_identity,
    sample_points,
)
from .fields import BivectorField, ScalarField, VectorField, as_array
from .ops import (
    apply_vf,
    bracket_at,
    combine,
    constant_field,
    coordinate_function,
    eval_bivector,
    hamiltonian_vf,
    lie_derivative_bivector,
    map_jacobian,
    poisson_bracket,
    schouten_22,
    schouten_at,
    vf_commutator,
)
from .scalars import Dual, Q, exact, exp, qstr, sqrt

__all__ = [
    "apply_vf",
    "as_array",
    "BivectorField",
    "bracket_at",
    "Chart",
    "ChartError",
    "check_casimir",
    "check_compatibility",
    "check_equal",
    "check_involution",
    "check_jacobi",
    "check_lie_relation",
    "check_poisson_map",
    "check_trivial_bracket",
    "combine",
    "constant_field",
    "coordinate_function",
    "default_seed",
    "Dual",
    "eval_bivector",
    "exact",
    "exp",
    "fields_equal",
    "hamiltonian_vf",
    "IdentityReport",
    "lie_derivative_bivector",
    "map_jacobian",
    "PhasePoint",
    "poisson_bracket",
    "Q",
    "qstr",
    "run_identity",
    "sample_points",
    "SamplerConfig",
    "ScalarField",
    "schouten_22",
    "schouten_at",
    "SingularPoint",
    "sqrt",
    "VectorField",
    "vf_commutator",
]
