"""Distance-ratio and quasihyperbolic metrics on planar domains."""

from .errors import (BranchError, CertificationError, ChainOverflowError, DocumentError,
                     InvalidPathError, NoPathError, PreconditionError, QHError, SamplingError,
                     UnsupportedImageError)
from .geometry import (Disk, Domain, HalfPlane, Polygon, Punctured, PuncturedPlane, SlitDisk,
                       boundary_distance, contains, domain_from_dict, domain_to_dict,
                       inner_distance, sample_interior, segment_visible)
from .metrics import (MetricResult, PathPolyline, SolverConfig, j_distance, lower_bound,
                      qh_closed_form, qh_distance, qh_length)
from .geodesics import ChainResult, chain_points, extract_neargeodesic, verify_neargeodesic
from .maps import (Composition, ConformalSlitChain, MapSpec, RadialStretch, Restriction, Similarity,
                   apply, apply_inverse, image_domain, local_bilipschitz_estimate, map_from_dict,
                   map_to_dict)
from .envelope import AffineDominator, GrowthTable, MonotoneEnvelope
from .distortion import (DistortionReport, cigar_check, j_inequality_check, lemma34_check,
                         qh_constant_estimate, semisolidity_profile, theorem2_phi2,
                         theorem3_constants, uniformity_constant)
from .counterexamples import example1_run, example2_bounds

__version__ = "0.1.0"
