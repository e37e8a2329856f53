"""Vibrating string above a rigid obstacle: exact solver and verification suite."""

from wavecontact.contact import (
    ContactCurve,
    CurveVerificationError,
    EmptyContact,
    classify,
    influence_membership,
    negativity_frontier,
)
from wavecontact.freewave import (
    FreeGradient,
    InitialData,
    InvalidInitialData,
    RiemannPair,
    cone_negative_sup,
    decompose,
    half_plane_infimum,
)
from wavecontact.piecewise import (
    IncompatiblePeriods,
    PiecewiseConstantFn,
    PiecewiseLinearFn,
    combine,
    extremum_on_interval,
    running_min,
)
from wavecontact.schatzman import (
    ReflectionMeasure,
    SolutionField,
    TransportGradient,
    build_measure,
    energy,
    eval_u,
    lipschitz_norms,
    reflection_check,
    solve,
    transport_derivatives,
)

__version__ = "0.1.0"

__all__ = [
    "ContactCurve",
    "CurveVerificationError",
    "EmptyContact",
    "FreeGradient",
    "IncompatiblePeriods",
    "InitialData",
    "InvalidInitialData",
    "PiecewiseConstantFn",
    "PiecewiseLinearFn",
    "ReflectionMeasure",
    "RiemannPair",
    "SolutionField",
    "TransportGradient",
    "build_measure",
    "classify",
    "combine",
    "cone_negative_sup",
    "decompose",
    "energy",
    "eval_u",
    "extremum_on_interval",
    "half_plane_infimum",
    "influence_membership",
    "lipschitz_norms",
    "negativity_frontier",
    "reflection_check",
    "running_min",
    "solve",
    "transport_derivatives",
]
