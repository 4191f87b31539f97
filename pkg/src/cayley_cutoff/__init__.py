"""Random walks on random Cayley graphs of finite Abelian groups.

Exact spectral heat kernels and TV distances, entropic/cutoff time solving,
Monte Carlo probes of the Gaussian cutoff profile, and brute-force checks of
the supporting lemmas, plus a reproducible experiment CLI.
"""

from .groups import (GeneratorMultiset, GroupSpec, HypothesisReport, add,
                     check_hypotheses, dot, element_of, index_of, make_group,
                     neg, parse_group, replicate_rng, sample_generators)
from .spectral import (GapSummary, HeatKernelRow, SpectralData, character,
                       cheeger_bounds, cheeger_exact, eigenvalues, gap_summary,
                       heat_kernel_row, l2_bound, tv_exact)
from .entropic import (AsymptoticReport, EntropicSolution, StepDistribution,
                       asymptotic_times, entropy, entropy_derivative, f_lambda,
                       g_lambda, q1_moments, solve_times, step_pmf)
from .walk import (AuxiliaryState, ProbeResult, TypicalityParams, clt_probe,
                   psi, q_value, sample_W, simulate_S, tv_error_budget,
                   typicality_params, typicality_probe)

__version__ = "0.1.0"
