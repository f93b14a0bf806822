"""Exact hyper-Catalan and Geode numbers, their recurrences, and a guess-and-verify toolkit."""

from __future__ import annotations

from .closed_form import g2_closed, g2_fast, g2_step_factor_m1, g2_step_factor_m2
from .core import (GeodeTable, HomogeneousPoly, build_P, divide_by_simplex, geode_number_oracle,
                   geode_poly, geode_table, hyper_catalan)
from .errors import (GeodeError, InconsistencyError, InsufficientDataError, NonIntegralStepError,
                     OracleFallbackError, ReconstructionError, ResourceLimitError,
                     UnverifiedSystemError)
from .guesser import AnsatzSpec, GuessReport, build_system, guess, search
from .modular import solve_modular
from .recurrence import (IndexPolynomial, PureRecurrence, RationalCoeff, RecurrenceSystem,
                         canonicalize, diagonal_values, digit_count, eval_diagonal, eval_pure)
from .verifier import (VerificationReport, verify, verify_compatibility, verify_divisibility,
                       verify_identity, verify_recurrence, verify_window)

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec", "GeodeError", "GeodeTable", "GuessReport", "HomogeneousPoly", "IndexPolynomial",
    "InconsistencyError", "InsufficientDataError", "NonIntegralStepError", "OracleFallbackError",
    "PureRecurrence", "RationalCoeff", "ReconstructionError", "RecurrenceSystem",
    "ResourceLimitError", "UnverifiedSystemError", "VerificationReport", "build_P",
    "build_system", "canonicalize", "diagonal_values", "digit_count", "divide_by_simplex",
    "eval_diagonal", "eval_pure", "g2_closed", "g2_fast", "g2_step_factor_m1",
    "g2_step_factor_m2", "geode_number_oracle", "geode_poly", "geode_table", "guess",
    "hyper_catalan", "search", "solve_modular", "verify", "verify_compatibility",
    "verify_divisibility", "verify_identity", "verify_recurrence", "verify_window",
]
