"""Certified lower bounds for gamma_{sigma,d}: the limit of the expected LCS
length of d random sigma-ary strings of length n, normalized by n.

The package iterates a monotone, translation-invariant recurrence operator
on the space of tuple states, extracts feasible triplets (u, r, epsilon)
certifying gamma_{sigma,d} >= d*(r - epsilon), and verifies, serializes, and
cross-checks those certificates against independent oracles.
"""

__version__ = "1.0.0"

from .certificate import (
    LUEKER_LOWER_2_2,
    LUEKER_UPPER_2_2,
    Certificate,
    SteeleReport,
    VerificationReport,
    floor_str,
    from_triplet,
    read_certificate,
    simple_bound,
    steele_check,
    verify,
    write_certificate,
)
from .errors import (
    CertificateError,
    CertificateFormatError,
    CsBoundError,
    ResourceGuardError,
)
from .operators import OperatorContext, fz_nonzero_count
from .oracles import (
    LcsInstance,
    McEstimate,
    diagonal_lcs,
    exhaustive_w,
    exhaustive_w_vector,
    lcs,
    mc_estimate,
    mc_exact,
)
from .solver import (
    SolverConfig,
    TripletResult,
    check_convergence,
    feasible_triplet,
    iterate_trace,
    required_bytes,
)
from .states import (
    TupleState,
    all_heads_equal,
    decode,
    encode,
    head,
    n_z,
    state_from_text,
    tail,
    tau_z,
)

__all__ = [
    "Certificate",
    "CertificateError",
    "CertificateFormatError",
    "CsBoundError",
    "LcsInstance",
    "LUEKER_LOWER_2_2",
    "LUEKER_UPPER_2_2",
    "McEstimate",
    "OperatorContext",
    "ResourceGuardError",
    "SolverConfig",
    "SteeleReport",
    "TripletResult",
    "TupleState",
    "VerificationReport",
    "all_heads_equal",
    "check_convergence",
    "decode",
    "diagonal_lcs",
    "encode",
    "exhaustive_w",
    "exhaustive_w_vector",
    "feasible_triplet",
    "floor_str",
    "from_triplet",
    "fz_nonzero_count",
    "head",
    "iterate_trace",
    "lcs",
    "mc_estimate",
    "mc_exact",
    "n_z",
    "read_certificate",
    "required_bytes",
    "simple_bound",
    "state_from_text",
    "steele_check",
    "tail",
    "tau_z",
    "verify",
    "write_certificate",
]
