"""Exact spectra and perfect state transfer on gcd-graphs over finite
commutative rings.

Build a ring from text, pick a set of principal-ideal divisors, and the
library gives the Cayley graph, its integer spectrum (two independent ways),
and an exact verdict on perfect state transfer, certified either by a
rational transfer time or by a finite witness.
"""

from .dsl import format_ring, parse_divisors, parse_element, parse_ring
from .duality import Functional, build_psi, minimal_element
from .errors import (
    DslSyntaxError,
    InputError,
    InternalCheckError,
    ResourceCapError,
    RingConstructionError,
    RingwalkError,
)
from .graphs import (
    DivisorSet,
    GcdGraph,
    build_divisor_set,
    build_graph,
    connected_components,
    unitary_graph,
)
from .oracle import char_poly_exact, delta_full, verify_verdict, walk_amplitude
from .pst import (
    NoPstWitness,
    PstCertificate,
    PstVerdict,
    candidate_targets,
    classify_unitary,
    classify_unitary_poly,
    has_pst,
    parity_fast_path,
    scan_divisor_sets,
    solve_pst,
)
from .rings import Ideal, Ring, build_ring, euler_phi, moebius
from .spectra import Spectrum, ramanujan_sum, spectrum_from_characters, spectrum_from_ramanujan

__version__ = "0.1.0"

__all__ = [
    "DivisorSet",
    "DslSyntaxError",
    "Functional",
    "GcdGraph",
    "Ideal",
    "InputError",
    "InternalCheckError",
    "NoPstWitness",
    "PstCertificate",
    "PstVerdict",
    "ResourceCapError",
    "Ring",
    "RingConstructionError",
    "RingwalkError",
    "Spectrum",
    "build_divisor_set",
    "build_graph",
    "build_psi",
    "build_ring",
    "candidate_targets",
    "char_poly_exact",
    "classify_unitary",
    "classify_unitary_poly",
    "connected_components",
    "delta_full",
    "euler_phi",
    "format_ring",
    "has_pst",
    "minimal_element",
    "moebius",
    "parity_fast_path",
    "parse_divisors",
    "parse_element",
    "parse_ring",
    "ramanujan_sum",
    "scan_divisor_sets",
    "solve_pst",
    "spectrum_from_characters",
    "spectrum_from_ramanujan",
    "unitary_graph",
    "verify_verdict",
    "walk_amplitude",
]
