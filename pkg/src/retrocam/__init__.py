"""Retarded-time photography of two-object scenes.

A pinhole camera at the origin exposes at t = 0.  Each particle appears
where its light left from, not where it is, which lets a fast train still
sit on the image of its rails while its sections shift and turn.  The
same machinery reduces photographs of touching objects to finite set
computations with a verifiable assertion suite.
"""

from .errors import InputError, NumericalError, RetrocamError
from .expressions import ExpressionAst, parse_expression
from .kinematics import (
    Boost,
    CircularWorldline,
    Event,
    RailMotion,
    RailWorldline,
    SampledWorldline,
    SpatialPoint,
    StaticWorldline,
    UniformWorldline,
    Worldline,
    boost_event,
    emission_time_residual,
    retarded_emission,
    retarded_emission_uniform_closed_form,
)
from .optics import (
    FilmConfig,
    FilmPoint,
    RailCurve,
    comoving_film_point,
    project,
    rail_image_residual,
    sample_rail_image,
    unproject,
)
from .regions import (
    Analysis,
    AssertionReport,
    ContactEvent,
    IsotropicShell,
    PhotographicInterval,
    RegionSet,
    analyze,
    find_contacts,
    region_report,
    verify_assertions,
)
from .render import (
    HistoryImage,
    apparent_rotation_angle,
    geometric_image,
    history_image,
    measure_section_displacements,
    rasterize,
    train_on_rails_residual,
)
from .scenes import (
    ObjectSpec,
    Scene,
    Tolerances,
    build_rail_train,
    demo_scene,
    parse_scene,
    scene_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "AssertionReport",
    "Boost",
    "CircularWorldline",
    "ContactEvent",
    "Event",
    "ExpressionAst",
    "FilmConfig",
    "FilmPoint",
    "HistoryImage",
    "InputError",
    "IsotropicShell",
    "NumericalError",
    "ObjectSpec",
    "PhotographicInterval",
    "RailCurve",
    "RailMotion",
    "RailWorldline",
    "RegionSet",
    "RetrocamError",
    "SampledWorldline",
    "Scene",
    "SpatialPoint",
    "StaticWorldline",
    "Tolerances",
    "UniformWorldline",
    "Worldline",
    "analyze",
    "apparent_rotation_angle",
    "boost_event",
    "build_rail_train",
    "comoving_film_point",
    "demo_scene",
    "emission_time_residual",
    "find_contacts",
    "geometric_image",
    "history_image",
    "measure_section_displacements",
    "parse_expression",
    "parse_scene",
    "project",
    "rail_image_residual",
    "rasterize",
    "region_report",
    "retarded_emission",
    "retarded_emission_uniform_closed_form",
    "sample_rail_image",
    "scene_to_json",
    "train_on_rails_residual",
    "unproject",
    "verify_assertions",
]
