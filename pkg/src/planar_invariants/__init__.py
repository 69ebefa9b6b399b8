"""Biholomorphic invariants of punctured discs and annuli.

Caratheodory distance on the annulus via the Schottky-Klein prime function and
via Simha's product, squeezing functions, Fridman invariants and injectivity
radius functions, and raster experiments on the topology of metric balls.
"""
from .annulus import (
    DistanceValue,
    SimhaAnnulus,
    caratheodory_annulus,
    normalize_annulus,
    simha_caratheodory,
    slit_map,
    tanh_c_minus_sqrt_r,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InvariantError,
    MultiComponentError,
    PreconditionError,
    ResolutionError,
)
from .hyperbolic import (
    RadiusPair,
    disc_automorphism,
    mu,
    poincare_distance,
    pseudo_hyperbolic,
)
from .invariants import (
    UNIT_DISC,
    InvariantReport,
    PuncturedDomain,
    annulus_gap_report,
    annulus_metric,
    disc_metric,
    fridman_h_from_H,
    fridman_injectivity_punctured_disc,
    general_upper_bound,
    punctured_disc_report,
    squeezing_annulus,
    squeezing_punctured_disc,
)
from .prime import AnnulusDomain, TruncationPolicy, prime_omega, truncation_terms
from .topology import (
    GridMask,
    GridSpec,
    connected_component_count,
    is_simply_connected,
    sample_metric_ball,
    simple_connectivity_threshold,
)

__version__ = "0.1.0"
