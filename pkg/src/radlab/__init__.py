"""Radicals of coprime partitions a + b = c.

Exact computation of the product G_c of the radicals R(abc) over all coprime
partitions of c, the inclusion-exclusion counting function E_c(x), and
numerical checks of the lower and upper bounds on the geometric mean
G_c^(2/phi(c)).
"""

from .arith import (
    Factorization,
    SpfTable,
    SquarefreeDivisor,
    build_spf_table,
    chebyshev_theta,
    coprime_count,
    euler_phi,
    factorize,
    mertens_logsum,
    prime_count,
    radical,
    radical_of,
    squarefree_divisors,
)
from .bounds import (
    BaseConstants,
    BoundCheck,
    ClassCounts,
    EpsilonPlan,
    classify_factors,
    estimate_base_constants,
    f_factor,
    make_epsilon_plan,
    solve_m_epsilon,
    solve_n_epsilon,
    theorem2_lower,
    theorem3_check,
    theorem5_upper,
)
from .ec import EcBounds, ec, ec_bounds, ec_lemma3, ec_lemma4
from .products import (
    CoprimePartition,
    ExponentVector,
    GcReport,
    all_partitions_product,
    corollary_product,
    enumerate_coprime_partitions,
    gc_bruteforce,
    gc_report,
    gc_theorem1,
)
from .scan import (
    FixedRadicalResult,
    ScanResult,
    WitnessReport,
    abc_quality,
    fixed_radical_scan,
    theorem4_witnesses,
    verify_range,
)

__version__ = "0.1.0"
