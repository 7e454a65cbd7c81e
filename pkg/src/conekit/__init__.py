"""conekit: membership testing for copositive-type matrix cones and friends.

Subpackages by theme:

- linalg:   shared symmetric/hermitian helpers and tolerance conventions
- optim:    dense SDP interior-point solver and LP front end
- cones:    CP / DNN / SPN / COP and the sum-of-squares hierarchy between them
- pairwise: cones of matrix pairs and the lifting between pairs and COP
- graphs:   decomposability thresholds, fractional clique-type parameters
- quantum:  diagonal-symmetric states, LDUI twirling, extendibility checks
- cli:      the `conekit` command-line entry point
"""

from .linalg import Tolerance, eig_sym, hadamard, is_psd, off_diag
from .optim import SdpProblem, SdpStatus, solve_lp, solve_sdp
from .cones import (
    ConeVerdict,
    Verdict,
    berman_matrix,
    classify_elementary,
    horn_matrix,
    in_kr_dual,
    is_cop,
    is_cp,
    is_kr,
    is_spn,
)
from .graphs import Graph, SrgParams, catalog, classify_map, scan_gap, sigma
from .pairwise import (
    MatrixPair,
    PairVerdict,
    copcp_form_value,
    is_cldui_plus,
    is_copcp,
    is_pdec,
    is_pdnn,
    lift_check,
    pair_form,
    pcp_checks,
    spn_lift_check,
    verify_pair,
)
from .quantum import (
    ChoiMatrix,
    DickeWitness,
    apply_map,
    block_positivity_value,
    choi,
    dicke,
    dicke_class,
    dicke_extendibility,
    ext_necessary_star,
    find_extendible_entangled,
    markov_choi_check,
    twirl_ldui,
    witness_from_cop,
)

__version__ = "0.1.0"

__all__ = [
    "Tolerance",
    "eig_sym",
    "is_psd",
    "off_diag",
    "hadamard",
    "SdpProblem",
    "SdpStatus",
    "solve_sdp",
    "solve_lp",
    "Verdict",
    "ConeVerdict",
    "horn_matrix",
    "berman_matrix",
    "classify_elementary",
    "is_cp",
    "is_spn",
    "is_cop",
    "is_kr",
    "in_kr_dual",
    "Graph",
    "SrgParams",
    "catalog",
    "sigma",
    "classify_map",
    "scan_gap",
    "MatrixPair",
    "PairVerdict",
    "pair_form",
    "copcp_form_value",
    "is_copcp",
    "is_pdec",
    "is_pdnn",
    "is_cldui_plus",
    "pcp_checks",
    "lift_check",
    "spn_lift_check",
    "verify_pair",
    "ChoiMatrix",
    "choi",
    "twirl_ldui",
    "apply_map",
    "block_positivity_value",
    "markov_choi_check",
    "dicke",
    "dicke_class",
    "dicke_extendibility",
    "DickeWitness",
    "witness_from_cop",
    "find_extendible_entangled",
    "ext_necessary_star",
    "__version__",
]
