"""Representing primes by x^2 + n*y^2 (n = 1, 2, 3, 5) through descent,
with replayable certificates."""

from .arith import factorize, is_prime, legendre, pow_mod, sqrt_mod
from .certificate import Certificate, Step, StepKind, deserialize, serialize, verify
from .descent import (
    represent,
    represent_2p,
    represent_fermat,
    represent_form_2_2_3,
    represent_n5,
    represent_pair,
)
from .errors import (
    CertificateParseError,
    DescentError,
    InvalidArgumentError,
    NoSquareRootError,
    NotPrimeError,
    NotRepresentableError,
    OracleBoundError,
    OutOfRangeError,
    QuadRepError,
)
from .forms import Form223Val, compose_form, double_form
from .oracle import brute_force_rep
from .quadform import (
    Branch,
    CancelOutcome,
    QuadRep,
    cancel_prime,
    cancel_square,
    compose,
    halve,
    make_rep,
    square_rep,
)

__version__ = "0.1.0"
