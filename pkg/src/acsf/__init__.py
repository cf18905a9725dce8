"""Anisotropic curve shortening: translators, compact flow and ancient solutions."""
from .anisotropy import AnisotropyFn, slab_width, speed_sigma
from .convexgeom import SupportCurve, area
from .flow import FlowState, FlowTrace, evolve, evolve_graph
from .translator import TranslatorProfile, build_profile
from .ancient import build_initial, converge_sequence, run_obna, verify_bounds

__all__ = [
    "AnisotropyFn", "slab_width", "speed_sigma", "SupportCurve", "area", "FlowState",
    "FlowTrace", "evolve", "evolve_graph", "TranslatorProfile", "build_profile",
    "build_initial", "converge_sequence", "run_obna", "verify_bounds",
]
__version__ = "0.1.0"
