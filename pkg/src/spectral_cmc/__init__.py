"""Spectral data of finite-type CMC cylinders in the 3-sphere.

Construction, validation, Whitham deformation, and geometric realization of
hyperelliptic spectral data, plus the rotational closed-form families.
"""

import os as _os

# Cap BLAS/OpenMP parallelism before numpy is first imported.
_threads = _os.environ.get("SPECTRAL_CMC_THREADS")
if _threads and _threads.isdigit():
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .polynomials import (  # noqa: E402
    DegreeError,
    Poly,
    RealityClass,
    RealityViolation,
    check_reality,
    conjugate_reflect,
    reflect_pairing,
    roots,
)
from .curve import (  # noqa: E402
    BranchAmbiguity,
    BranchProximity,
    ConditionReport,
    CurvePoint,
    PoleError,
    SheetPath,
    SpectralData,
    check_conditions,
    delta_eval,
    h_on_circle,
    h_values,
    integrate_dh,
    nu_continue,
    short_arc_length,
)
from .rotational import (  # noqa: E402
    DomainError,
    Membership,
    RotParams,
    classify_membership,
    embed_genus0_to_1,
    genus0,
    genus0_closed_h,
    genus1,
    genus1_closed_h,
)
from .whitham import (  # noqa: E402
    CVector,
    DivisionResidual,
    FlowEvent,
    FlowState,
    JumpObstruction,
    MoveCircleRoot,
    NotSimple,
    SeparateDoubleRootOfB,
    ShrinkShortArc,
    SingularVectorField,
    StepRejected,
    StrategyError,
    SymSingularity,
    TrackTargets,
    derivative,
    genus_jump_down,
    genus_jump_up,
    make_strategy,
    monitors,
    run_flow,
    solve_c_for_targets,
    step,
)
from .frames import (  # noqa: E402
    GaugeError,
    IntegratorDrift,
    KillingSample,
    NotPeriodic,
    PeriodNotFound,
    Potential,
    SelectionError,
    extract_omega,
    find_period,
    frame_integrate,
    frame_integrate_multi,
    isospectral_step,
    lax_flow,
    monodromy,
    offdiag_potential,
    pinkall_sterling_fields,
    sym_bobenko,
)
from .surface import (  # noqa: E402
    SurfaceMesh,
    build_surface,
    detect_invariance_direction,
    mesh_diagnostics,
)
from .serialization import (  # noqa: E402
    ParseError,
    TrajectoryWriter,
    load_potential,
    load_spectral_data,
    save_potential,
    save_spectral_data,
)

__all__ = [
    "__version__",
    # polynomials
    "Poly", "RealityClass", "check_reality", "conjugate_reflect",
    "reflect_pairing", "roots", "DegreeError", "RealityViolation",
    # curve
    "SpectralData", "CurvePoint", "SheetPath", "ConditionReport",
    "check_conditions", "delta_eval", "h_on_circle", "h_values",
    "integrate_dh", "nu_continue", "short_arc_length",
    "PoleError", "BranchAmbiguity", "BranchProximity",
    # rotational
    "RotParams", "Membership", "genus0", "genus1", "embed_genus0_to_1",
    "genus0_closed_h", "genus1_closed_h", "classify_membership", "DomainError",
    # whitham
    "CVector", "FlowState", "FlowEvent", "derivative", "solve_c_for_targets",
    "step", "run_flow", "monitors", "make_strategy", "ShrinkShortArc",
    "SeparateDoubleRootOfB", "MoveCircleRoot", "TrackTargets",
    "genus_jump_up", "genus_jump_down",
    "SingularVectorField", "SymSingularity", "NotSimple", "StrategyError",
    "StepRejected", "JumpObstruction", "DivisionResidual",
    # frames
    "Potential", "KillingSample", "offdiag_potential", "lax_flow",
    "extract_omega", "frame_integrate", "frame_integrate_multi",
    "sym_bobenko", "monodromy", "find_period", "isospectral_step",
    "pinkall_sterling_fields",
    "SelectionError", "IntegratorDrift", "GaugeError", "NotPeriodic",
    "PeriodNotFound",
    # surface
    "SurfaceMesh", "build_surface", "detect_invariance_direction",
    "mesh_diagnostics",
    # serialization
    "ParseError", "TrajectoryWriter", "load_spectral_data",
    "save_spectral_data", "load_potential", "save_potential",
]
