"""
sturmkit: exact continued fractions and the symbolic dynamics they classify.

Sturmian, Denjoy and interval-exchange invariants, flow-equivalence and
isogeny decisions with re-checkable certificates, Rauzy–Veech induction and
the SAF invariant, all over exact rational coordinates.
"""

from .cfrac import (
    ContinuedFraction,
    canonical_cycle,
    complete_quotient,
    convergent_matrix,
    expand_periodic,
    expand_prefix,
    from_cf,
    parse_cf_text,
    pgl2z_witness,
)
from .decide import (
    self_mult_equivalent,
    sturmian_conjugate,
    sturmian_eventually_flow_equivalent,
    sturmian_flow_equivalent,
    sturmian_isogenous,
    verify_certificate,
)
from .decision import NO, UNKNOWN, YES, Decision
from .denjoy import (
    DenjoyParams,
    flow_equivalent,
    infinitesimal_rank,
    normalize,
    power_params,
    two_ai_equivalent,
    two_ai_infinitesimal,
    verify_isogeny_certificate,
)
from .errors import SturmkitError
from .expr_parser import parse_number
from .iet import (
    IETSpec,
    RauzyPath,
    ies_conjugate,
    ies_flow_equivalent,
    induced_on_cylinder,
    keane_check,
    minimal_model,
    new_iet,
    rational_invariants,
    rauzy_path,
    rauzy_step,
    saf,
    sturmian_iet,
)
from .moebius import Mat2, apply, pell_fundamental, smith_factor, stabilizer_matrix
from .realnum import (
    Basis,
    QSpan,
    RealValue,
    WedgeValue,
    ZModule,
    compare,
    formal_basis,
    make,
    qspan_of,
    quadratic_basis,
    rational_basis,
    wedge,
    zmodule_of,
)
from .sturmian import SturmianParams, Word, factors, sadic_prefix, sturmian_params, sturmian_window, substitution_apply

__all__ = [
    # numbers
    "Basis", "RealValue", "ZModule", "QSpan", "WedgeValue",
    "rational_basis", "quadratic_basis", "formal_basis", "make", "compare",
    "zmodule_of", "qspan_of", "wedge", "parse_number",
    # continued fractions and matrices
    "ContinuedFraction", "expand_prefix", "expand_periodic", "from_cf", "parse_cf_text",
    "canonical_cycle", "complete_quotient", "convergent_matrix", "pgl2z_witness",
    "Mat2", "apply", "smith_factor", "stabilizer_matrix", "pell_fundamental",
    # Sturmian and Denjoy systems
    "Word", "SturmianParams", "sturmian_params", "sturmian_window", "factors",
    "substitution_apply", "sadic_prefix",
    "DenjoyParams", "normalize", "power_params", "infinitesimal_rank",
    "two_ai_infinitesimal", "two_ai_equivalent", "flow_equivalent", "verify_isogeny_certificate",
    # interval exchanges
    "IETSpec", "RauzyPath", "new_iet", "sturmian_iet", "rauzy_step", "rauzy_path",
    "keane_check", "induced_on_cylinder", "minimal_model", "saf", "rational_invariants",
    "ies_conjugate", "ies_flow_equivalent",
    # decisions
    "Decision", "YES", "NO", "UNKNOWN",
    "sturmian_conjugate", "sturmian_flow_equivalent", "sturmian_isogenous",
    "sturmian_eventually_flow_equivalent", "self_mult_equivalent", "verify_certificate",
    "SturmkitError",
]
