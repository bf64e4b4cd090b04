"""Random walks induced on finite-index subgroups.

Exact coset chains and return times, hitting measures, the free-group
boundary with its Radon-Nikodym cocycle, random-walk entropy brackets and
Monte Carlo cross-checks.
"""

from .boundary import (BoundaryModel, furstenberg_entropy, furstenberg_entropy_hitting,
                       nearly_harmonic_residual, phi_bound_check, telescoping_check)
from .chain import (CosetChain, avoidance_tail, avoidance_tails, build_chain,
                    conditional_avoidance, expected_return_time, tail_rate_certificate)
from .cosets import CosetAction, action_from_config, coset_of, cyclic_action, index, trivial_action
from .entropy import EntropySequence, corollary_check, entropy_sequence, smb_estimate
from .errors import (ConfigError, ModelMismatchError, NotInSupportError, ReducibleChainError,
                     ShallowCylinderError, SupportCapExceeded, TransitivityError,
                     UnsupportedOperationError, WalkInductionError)
from .groups import (FreeAbelianGroup, FreeGroup, GroupElement, PermutationGroup, invert,
                     multiply, word_length)
from .hitting import HittingTruncation, first_passage, sample_hits, theta_from
from .logvalue import LogValue
from .measures import (EntropyValue, FinMeasure, convolution_power, convolve, dirac, entropy,
                       projected_generation_check, srw)

__version__ = "0.1.0"

__all__ = [
    "BoundaryModel", "CosetAction", "CosetChain", "ConfigError", "EntropySequence",
    "EntropyValue", "FinMeasure", "FreeAbelianGroup", "FreeGroup", "GroupElement",
    "HittingTruncation", "LogValue", "ModelMismatchError", "NotInSupportError",
    "PermutationGroup", "ReducibleChainError", "ShallowCylinderError", "SupportCapExceeded",
    "TransitivityError", "UnsupportedOperationError", "WalkInductionError", "action_from_config",
    "avoidance_tail", "avoidance_tails", "build_chain", "conditional_avoidance", "convolution_power",
    "convolve", "corollary_check", "coset_of", "cyclic_action", "dirac", "entropy",
    "entropy_sequence", "expected_return_time", "first_passage", "furstenberg_entropy",
    "furstenberg_entropy_hitting", "index", "invert", "multiply", "nearly_harmonic_residual",
    "phi_bound_check", "projected_generation_check", "sample_hits", "smb_estimate", "srw",
    "tail_rate_certificate", "telescoping_check", "theta_from", "trivial_action", "word_length",
]
