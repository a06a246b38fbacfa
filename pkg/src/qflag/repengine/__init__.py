"""*-representations of C_q[U] on truncated tensor powers of l_2(Z_+)."""

from .checks import (compare_spectra, homomorphism_check, inequivalence_patterns,
                     irreducibility_diagnostic, plucker_vanishing_pattern,
                     reduced_word_independence, restriction_identity_check, star_rep_check,
                     sup_norm_vs_haar, verify_theorem_ss_b)
from .fock import FockOp
from .rank1 import InternalError, derived_su2_relations, phi_star_expand, pi_q_generator
from .soibelman import RepSpec, TorusPoint, TruncatedOp, pi_w, pi_wt, tau_t

__all__ = [
    "FockOp", "InternalError", "RepSpec", "TorusPoint", "TruncatedOp",
    "compare_spectra", "derived_su2_relations", "homomorphism_check",
    "inequivalence_patterns", "irreducibility_diagnostic", "phi_star_expand",
    "pi_q_generator", "pi_w", "pi_wt", "plucker_vanishing_pattern",
    "reduced_word_independence", "restriction_identity_check", "star_rep_check",
    "sup_norm_vs_haar", "tau_t", "verify_theorem_ss_b",
]
