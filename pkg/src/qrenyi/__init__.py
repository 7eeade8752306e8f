"""Quantum Renyi divergences, classical-quantum channel capacities and strong converse exponents."""

from .config import Config, get_config
from .divergences import (DivergenceVariant, d_alpha, d_max, hellinger_arc, pinched_divergence,
                          psi_alpha, q_alpha, relative_entropy, tropp_value,
                          variational_identity, variational_objective, von_neumann_entropy)
from .errors import *  # noqa: F401,F403
from .operators import (PinchingMap, SpectralDecomposition, distinct_eigenvalue_count,
                        log_on_support, partial_trace, pinch, pinching_from, positive_part,
                        power_on_support, psd_leq, spectral_decompose, support_meet,
                        support_projection, tensor, tensor_power)

__version__ = "0.1.0"
