"""Least totient preimages in residue classes.

For odd m and gcd(a, m) = 1, the toolkit computes the least n with
phi(n) = a (mod m) by exact scan, searches for solutions of the form
4^d * p1 p2 p3 over three prime intervals, counts solutions through
Dirichlet-character orthogonality, and certifies the identities and
bounds the counting argument rests on.
"""

from .arith import (
    Factorization,
    crt_combine,
    discrete_log,
    euler_phi,
    factorize,
    infty_quotient,
    is_prime,
    log_integral,
    log_integral_between,
    moebius,
    primitive_root,
)
from .bounds import (
    euler_product_constant,
    interval_count_accuracy,
    moment_ratio,
    rakhmonov_inequality_check,
)
from .characters import (
    DirichletCharacter,
    UnitGroupContext,
    all_characters,
    build_unit_group,
    primitive_inducing,
    principal_character,
    psi_character,
    write_character_table,
)
from .counting import (
    CountReport,
    conductor_split,
    count_report,
    count_solutions_characters,
    count_solutions_direct,
    count_solutions_enumerate,
    indicator_1am,
    main_term,
    default_split_threshold,
    positivity_certificate,
    psi_term,
    remainder_term,
)
from .errors import (
    BoundsError,
    ConsistencyError,
    DomainError,
    EvenModulusError,
    PhiminError,
)
from .intervals import (
    PrimeIntervalSet,
    SmallKWarning,
    build_custom_interval,
    build_interval,
    cardinality_prediction,
    character_sum,
    main_term_prediction,
    parseval_sum,
    rho_closed_form,
    rho_definition,
    write_character_sums,
)
from .search import (
    OracleResult,
    SearchWitness,
    constructive_search,
    exponent_scan,
    oracle_N,
    phi_residue_table,
)
from .sieve import SieveTables, build_sieve

__version__ = "0.1.0"
