"""Target localization in one-transmitter multistatic radar networks.

The main entry points are :func:`arce_estimate` (delays to position) and the
scikit-learn style :class:`ArceLocalizer`.
"""
from .arce import (
    Candidate,
    Estimate,
    arce_estimate,
    azimuth_face_candidates,
    corner_candidates,
    elevation_face_candidates,
    interior_candidates,
    select_optimum,
    solve_model,
)
from .baselines import roce_estimate, u_tdoa_estimate
from .crlb import FisherInfo, delay_gradient, fisher_information, rcrlb
from .estimators import ArceLocalizer, RoceLocalizer, UTdoaLocalizer
from .geometry import (
    SPEED_OF_LIGHT,
    BeamCone,
    SensorNetwork,
    bistatic_delay,
    bistatic_delays,
    in_beam,
    place_target,
)
from .measurement import (
    DelaySet,
    LinearModel,
    NoiseModel,
    SnrScenario,
    build_linear_model,
    link_snr,
    project_range,
    sigma_from_snr,
    simulate_delays,
)
from .secular import RootSet, SecularProblem, bisection_iterations_bound, normalize, secular_roots

__version__ = "0.1.0"

__all__ = [
    "ArceLocalizer", "BeamCone", "Candidate", "DelaySet", "Estimate", "FisherInfo",
    "LinearModel", "NoiseModel", "RoceLocalizer", "RootSet", "SPEED_OF_LIGHT",
    "SecularProblem", "SensorNetwork", "SnrScenario", "UTdoaLocalizer",
    "arce_estimate", "azimuth_face_candidates", "bisection_iterations_bound",
    "bistatic_delay", "bistatic_delays", "build_linear_model", "corner_candidates",
    "delay_gradient", "elevation_face_candidates", "fisher_information", "in_beam",
    "interior_candidates", "link_snr", "normalize", "place_target", "project_range",
    "rcrlb", "roce_estimate", "secular_roots", "select_optimum", "sigma_from_snr",
    "simulate_delays", "solve_model", "u_tdoa_estimate",
]
