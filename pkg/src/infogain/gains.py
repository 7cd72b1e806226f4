"""Closed-form information gains of the (N+1)th toss under a symmetric beta prior.

All quantities are in nats. Each measure comes in two flavours:

* ``*_values(alpha, n, h, ...)`` works on broadcastable numpy arrays and is
  what the sweep engine uses;
* the scalar form takes model objects (``BetaPrior``, ``TossSummary``,
  ``Outcome``) and returns a float.

The Tail branch of every measure is the Head branch with h replaced by n - h.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .model import BetaPrior, Outcome, TossSummary
from .special_fn import digamma


def _validated(alpha, n, h):
    alpha = np.asarray(alpha, dtype=np.float64)
    n = np.asarray(n)
    h = np.asarray(h)
    if not np.all(np.isfinite(alpha)) or np.any(alpha <= -1.0):
        raise DomainError("alpha must be > -1")
    if np.any(n < 0) or np.any(h < 0) or np.any(h > n):
        raise DomainError("require 0 <= h <= n")
    return alpha, n.astype(np.float64), h.astype(np.float64)


def _oriented(n, h, outcome):
    # heads count as seen from the observed outcome
    return h if outcome is Outcome.HEAD else n - h


def _scalar(value, *inputs):
    return float(value) if all(np.ndim(v) == 0 for v in inputs) else value


def rel_gain_values(alpha, n, h, outcome=Outcome.HEAD):
    """KL divergence from the N-toss posterior to the (N+1)-toss posterior."""
    a, nf, hf = _validated(alpha, n, h)
    k = _oriented(nf, hf, outcome)
    total = nf + 2.0 * a + 2.0
    shape = k + a + 1.0
    value = digamma(shape + 1.0) - digamma(total + 1.0) + np.log(total / shape)
    return _scalar(value, alpha, n, h)


def diff_gain_values(alpha, n, h, outcome=Outcome.HEAD):
    """Change in KL(posterior || prior) caused by the (N+1)th toss."""
    a, nf, hf = _validated(alpha, n, h)
    k = _oriented(nf, hf, outcome)
    total = nf + 2.0 * a + 2.0
    shape = k + a + 1.0
    value = (
        digamma(shape + 1.0)
        - digamma(total + 1.0)
        + k / shape
        - nf / total
        + np.log(total / shape)
    )
    return _scalar(value, alpha, n, h)


def expected_gain_values(alpha, n, h):
    """Posterior-predictive average of the gain of the next toss.

    Evaluated from its own closed form rather than by combining the Head and
    Tail branches, so that the two routes can be checked against each other.
    """
    a, nf, hf = _validated(alpha, n, h)
    total = nf + 2.0 * a + 2.0
    head_shape = hf + a + 1.0
    tail_shape = nf - hf + a + 1.0
    p_head = head_shape / total
    p_tail = tail_shape / total
    value = (
        p_head * digamma(head_shape + 1.0)
        + p_tail * digamma(tail_shape + 1.0)
        - digamma(total + 1.0)
        + p_head * np.log(total / head_shape)
        + p_tail * np.log(total / tail_shape)
    )
    return _scalar(value, alpha, n, h)


def diff_gain_asymptotic_values(alpha, n, h, outcome=Outcome.HEAD):
    a, nf, hf = _validated(alpha, n, h)
    k = _oriented(nf, hf, outcome)
    value = (2.0 * k + 1.0) / (2.0 * (k + a + 1.0)) - (2.0 * nf + 1.0) / (2.0 * (nf + 2.0 * a + 2.0))
    return _scalar(value, alpha, n, h)


def rel_gain_asymptotic_values(n, h, outcome=Outcome.HEAD):
    _, nf, hf = _validated(0.0, n, h)
    k = _oriented(nf, hf, outcome)
    if np.any(k == 0):
        raise DomainError(
            "large-N relative gain is undefined when no prior toss matches the observed outcome"
        )
    value = (nf - k) / (2.0 * k * nf)
    return _scalar(value, n, h)


def expected_gain_asymptotic_values(n):
    nf = np.asarray(n, dtype=np.float64)
    if np.any(nf < 1):
        raise DomainError("large-N expected gain needs n >= 1")
    return _scalar(1.0 / (2.0 * nf), n)


def diff_gain(prior: BetaPrior, data: TossSummary, next: Outcome = Outcome.HEAD) -> float:
    return diff_gain_values(prior.alpha, data.n, data.h, next)


def rel_gain(prior: BetaPrior, data: TossSummary, next: Outcome = Outcome.HEAD) -> float:
    return rel_gain_values(prior.alpha, data.n, data.h, next)


def expected_gain(prior: BetaPrior, data: TossSummary) -> float:
    return expected_gain_values(prior.alpha, data.n, data.h)


def diff_gain_asymptotic(prior: BetaPrior, data: TossSummary, next: Outcome = Outcome.HEAD) -> float:
    return diff_gain_asymptotic_values(prior.alpha, data.n, data.h, next)


def rel_gain_asymptotic(data: TossSummary, next: Outcome = Outcome.HEAD) -> float:
    return rel_gain_asymptotic_values(data.n, data.h, next)


def expected_gain_asymptotic(data: TossSummary) -> float:
    return expected_gain_asymptotic_values(data.n)


@dataclass(frozen=True)
class GainReport:
    """All three gains of one toss plus their large-N forms.

    An asymptotic field is None where the large-N expression is undefined
    (the relative form in the black-swan corner, the expected form at N = 0).
    """

    i_diff: float
    i_rel: float
    i_expected: float
    i_diff_asym: float
    i_rel_asym: Optional[float]
    i_expected_asym: Optional[float]

    def as_dict(self):
        return asdict(self)


def gain_report(prior: BetaPrior, data: TossSummary, next: Outcome = Outcome.HEAD) -> GainReport:
    try:
        rel_asym = rel_gain_asymptotic(data, next)
    except DomainError:
        rel_asym = None
    exp_asym = expected_gain_asymptotic(data) if data.n >= 1 else None
    return GainReport(
        i_diff=diff_gain(prior, data, next),
        i_rel=rel_gain(prior, data, next),
        i_expected=expected_gain(prior, data),
        i_diff_asym=diff_gain_asymptotic(prior, data, next),
        i_rel_asym=rel_asym,
        i_expected_asym=exp_asym,
    )
