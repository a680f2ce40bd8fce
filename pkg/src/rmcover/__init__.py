"""Classification of Boolean function windows under AGL(m,2) and
Reed-Muller covering-radius computation."""

__version__ = "0.1.0"

from .boolfun import (
    AnfPolynomial,
    BooleanFunction,
    anf_from_string,
    anf_to_string,
    apply_affine,
    degree_valuation,
    derivative,
    dirac,
    from_anf,
    is_periodic,
    mobius_transform,
    parse_function,
    restrict,
    to_anf,
    tt_from_hex,
    tt_to_hex,
    weight,
)
from .classify import (
    Classification,
    CoverSet,
    SpaceTooLargeError,
    UndecidableError,
    class_of,
    classify_pipeline,
    initial_cover_set,
    load_classification,
    orbit_enumerate,
    reduce_cover_set,
    save_classification,
    stabilizer_generators,
)
from .equivalence import (
    EQUIV,
    NOT_EQUIV,
    UNDEFINED,
    EquivalenceOutcome,
    admissible,
    candidate_checking,
    equivalent,
)
from .group import (
    AffineTransformation,
    LinearMap,
    SingularMatrixError,
    adjoint_inverse,
    agl_generators,
    agl_order,
    compose,
    identity,
    invert,
    random_affine,
    translation,
    transvection,
)
from .invariant import (
    ClassMap,
    InvariantSignature,
    class_map,
    fourier_map,
    j_hat_signature,
    j_signature,
    wht,
)
from .nonlinearity import (
    Bound,
    GeneratorMatrix,
    InconsistentTableError,
    InfeasibleError,
    ProbeResult,
    RadiusTable,
    ScanReport,
    bounds_propagate,
    covering_radius_exact,
    exact_nonlinearity,
    nl_probe,
    odd_weight_reduction,
    relative_rho,
    rm_dimension,
    rm_generator_matrix,
    scan_representatives,
    walsh_spectrum,
)
from .quotient import (
    Decomposition,
    QuotientFunction,
    QuotientSpace,
    compose_decomposition,
    decompose,
    delta_membership,
    delta_space_basis,
    parse_quotient,
    project,
    q_apply_affine,
    quotient_derivative,
    quotient_space,
)
