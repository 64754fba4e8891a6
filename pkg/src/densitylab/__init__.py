"""densitylab: residue-class density bounds and smallness certificates for
integer sets.

Core pieces:
- setspec: a small algebra of set descriptions with membership, bounded
  enumeration, and exact/search-bounded residue-hit oracles;
- density: residue profiles and the upper Buck density bound
  (min over moduli of r_k/k along a divisibility ladder);
- certify: finite, independently verifiable smallness certificates via
  coprime residue-count products and divisibility criteria;
- quadform: classification of binary quadratic form value sets;
- estimators: numeric (non-certifying) estimators of classical upper
  densities;
- kernels: compiled hot loops with a pure-Python/numpy fallback.
"""

from .density import BuckBound, ResidueProfile, ap_union_density, buck_upper, residue_count
from .errors import DensityLabError
from .kernels import BACKEND
from .numtheory import (
    NonResidueCover,
    SquarefreeDecomposition,
    crt,
    jacobi,
    modulus_sequence,
    nonresidue_cover,
    squarefree_decompose,
)
from .setspec import (
    AMBIENT_N,
    AMBIENT_Z,
    APUnionNormalForm,
    HitSet,
    SetSpec,
    ap_union_normalize,
    complement_hits,
    enumerate_members,
    hits,
    member,
    spec_digest,
    spec_from_obj,
    spec_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "AMBIENT_N",
    "AMBIENT_Z",
    "APUnionNormalForm",
    "BACKEND",
    "BuckBound",
    "DensityLabError",
    "HitSet",
    "NonResidueCover",
    "ResidueProfile",
    "SetSpec",
    "SquarefreeDecomposition",
    "ap_union_density",
    "ap_union_normalize",
    "buck_upper",
    "complement_hits",
    "crt",
    "enumerate_members",
    "hits",
    "jacobi",
    "member",
    "modulus_sequence",
    "nonresidue_cover",
    "residue_count",
    "spec_digest",
    "spec_from_obj",
    "spec_to_json",
    "squarefree_decompose",
]
