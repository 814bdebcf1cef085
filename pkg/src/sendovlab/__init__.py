"""Tools for checking a lower bound on the real part of a critical point of a
polynomial with a zero at a in (0, 1) and all zeros in the closed unit disk."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InvalidInputError,
    NoIntersectionError,
    NotFoundError,
    SendovLabError,
)
from .polynomial import (
    Polynomial,
    conjugate_flip,
    derivative,
    evaluate,
    find_roots,
    min_modulus_on_circle,
    poly_from_roots,
)
from .geometry import (
    BisectorGeometry,
    CriticalProfile,
    RootConfiguration,
    bisector_geometry,
    check_distance_bounds,
    circle_intersections,
    cos_beta0_closed_form,
    distance_profile,
    half_plane_side,
)
from .extremal import (
    F,
    G,
    ExtremalProfile,
    closed_form_extremum,
    g1,
    g2,
    grid_maximize_g,
    quartic_identity_check,
    theorem_bound,
)
from .theorem import (
    TheoremVerdict,
    chain_check,
    check_preconditions,
    grace_heawood_check,
    lemma_a_check,
    solve_z0,
    theorem_verdict,
)
from .harness import GeneratorSpec, RunReport, emit_plot_data, generate, run_suite

__version__ = "0.1.0"
