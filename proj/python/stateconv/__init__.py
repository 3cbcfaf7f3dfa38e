"""gamma_2 norms, adversary bounds and state-conversion simulation."""

from ._core import *  # noqa: F401,F403
from ._core import (
    CertificateError,
    InputError,
    SolverError,
    VerificationFailure,
)

__all__ = [name for name in dir() if not name.startswith("_")]
