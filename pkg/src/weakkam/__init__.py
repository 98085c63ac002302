"""Discrete weak KAM theory on finite cost spaces.

Discounted Lax-Oleinik fixed points, the critical value, Peierls barrier,
Aubry set, Mather measures and the selected vanishing-discount limit.
"""

from .core import (
    FLOAT,
    RATIONAL,
    CostSpace,
    InstanceError,
    SolverConfig,
    brute_cn,
    brute_min_mean_cycle,
    path_cost,
    validate_space,
)
from .critical import (
    BarrierData,
    aubry_set,
    barrier_data,
    critical_graph,
    critical_value_discounted_estimate,
    critical_value_karp,
    mane_potential,
    min_plus_power,
    peierls_barrier,
    peierls_liminf_oracle,
    weak_kam_solution,
)
from .instances import GeneratorSpec, gen_random, gen_torus
from .lax_oleinik import (
    DiscountedSolution,
    SolverError,
    apply_T,
    apply_T_discounted,
    beta_shift_identity,
    check_subsolution,
    check_supersolution,
    comparison_sandwich,
    discounted_series_value,
    solve_discounted,
)
from .mather import (
    CycleMeasure,
    EdgeMeasure,
    check_closed,
    discounted_occupation,
    extreme_mather_measures,
    integrate_node,
    minimize_cost_lp,
    project,
    support_in_aubry,
)
from .selection import (
    SelectionResult,
    SweepReport,
    compute_u0,
    convergence_sweep,
    f_minus_member,
    h_mu,
    key_inequality_check,
    max_principle_check,
    select,
)

__version__ = "0.1.0"
