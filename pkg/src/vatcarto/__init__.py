"""Exact cartographic images of vertical almost-toric systems.

Regions, focus-focus values and sign choices are handled with exact
rationals; only the smoothing module uses floating point.
"""

from .zaffine import VertElement, ZAffine2, apply, compose, is_vert
from .region import (PLBoundaryFn, Region, agl_equivalence, apply_affine, check_delzant, corners,
                     slice_region, validate)
from .cuts import (FocusSet, SignChoice, complement_connected, j_closed_form, j_direct, order_focus,
                   reduce_signs)
from .cartography import (PiecewiseVertMap, Presentation, cartographic_family, develop_atlas, l_map,
                          monodromy_at, r_map, transition, verify_jump, vert_twist)
from .strips import (AdmissibleTriple, HalfStrip, check_admissible, construct_admissible,
                     strips_complement_connected)
from .smoothing import EtaEmbedding, build_embedding, check_embedding, limit_sequence
from .document import Document, emit, parse
from .render import render_svg

__all__ = [
    "VertElement", "ZAffine2", "apply", "compose", "is_vert",
    "PLBoundaryFn", "Region", "agl_equivalence", "apply_affine", "check_delzant", "corners", "slice_region",
    "validate",
    "FocusSet", "SignChoice", "complement_connected", "j_closed_form", "j_direct", "order_focus", "reduce_signs",
    "PiecewiseVertMap", "Presentation", "cartographic_family", "develop_atlas", "l_map", "monodromy_at", "r_map",
    "transition", "verify_jump", "vert_twist",
    "AdmissibleTriple", "HalfStrip", "check_admissible", "construct_admissible", "strips_complement_connected",
    "EtaEmbedding", "build_embedding", "check_embedding", "limit_sequence",
    "Document", "emit", "parse",
    "render_svg",
]

__version__ = "0.1.0"
