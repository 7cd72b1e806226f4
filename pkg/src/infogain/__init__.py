"""Differential, relative and expected information gain for coin tosses under beta priors."""

from .errors import BracketError, ConvergenceError, DomainError
from .gains import (
    GainReport,
    diff_gain,
    diff_gain_asymptotic,
    expected_gain,
    expected_gain_asymptotic,
    gain_report,
    rel_gain,
    rel_gain_asymptotic,
)
from .model import BetaPrior, Outcome, PosteriorBeta, TossSummary, expected_p, posterior, posterior_pdf
from .special_fn import digamma, log_beta, log_gamma

__version__ = "0.1.0"
