"""Priors, toss data and beta posteriors for the coin-tossing model."""

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .special_fn import log_beta

# Returned by posterior_pdf exactly at an endpoint where the density diverges.
ENDPOINT_SENTINEL = 1e300


class Outcome(enum.Enum):
    HEAD = "head"
    TAIL = "tail"

    @classmethod
    def parse(cls, text):
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise DomainError(f"outcome must be 'head' or 'tail', got {text!r}") from None


@dataclass(frozen=True)
class BetaPrior:
    """Symmetric beta prior p^alpha (1-p)^alpha / B(alpha+1, alpha+1).

    alpha = 0 is the uniform prior and alpha = -1/2 the Jeffreys prior.
    """

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha <= -1.0:
            raise DomainError(f"alpha must be a finite number > -1, got {self.alpha!r}")


@dataclass(frozen=True)
class TossSummary:
    """Sufficient statistic of a toss sequence: n tosses, h of them heads."""

    n: int
    h: int

    def __post_init__(self):
        if isinstance(self.n, bool) or isinstance(self.h, bool):
            raise DomainError("n and h must be integers")
        if int(self.n) != self.n or int(self.h) != self.h:
            raise DomainError(f"n and h must be integers, got n={self.n!r}, h={self.h!r}")
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")
        if not 0 <= self.h <= self.n:
            raise DomainError(f"h must satisfy 0 <= h <= n={self.n}, got {self.h}")

    @property
    def tails(self):
        return self.n - self.h

    def mirrored(self):
        """The summary with heads and tails swapped."""
        return TossSummary(self.n, self.n - self.h)

    def after(self, outcome):
        """Summary after one more toss with the given outcome."""
        return TossSummary(self.n + 1, self.h + (outcome is Outcome.HEAD))


@dataclass(frozen=True)
class PosteriorBeta:
    a: float
    b: float

    def __post_init__(self):
        for name, v in (("a", self.a), ("b", self.b)):
            if not math.isfinite(v) or v <= 0.0:
                raise DomainError(f"shape {name} must be finite and > 0, got {v!r}")

    @property
    def mean(self):
        return self.a / (self.a + self.b)


def posterior(prior, data):
    """Beta posterior after observing ``data`` under ``prior``."""
    return PosteriorBeta(data.h + prior.alpha + 1.0, data.n - data.h + prior.alpha + 1.0)


def posterior_pdf(post, p):
    """Density of ``post`` at p in [0, 1], evaluated in log space.

    At an endpoint where a shape parameter is below 1 the density is infinite;
    ENDPOINT_SENTINEL is returned instead.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    for edge, shape in ((0.0, post.a), (1.0, post.b)):
        if p == edge:
            if shape < 1.0:
                return ENDPOINT_SENTINEL
            if shape > 1.0:
                return 0.0
    log_norm = log_beta(post.a, post.b)
    log_p = math.log(p) if post.a != 1.0 else 0.0
    log_q = math.log1p(-p) if post.b != 1.0 else 0.0
    return math.exp((post.a - 1.0) * log_p + (post.b - 1.0) * log_q - log_norm)


def expected_p(prior, data):
    """Posterior mean of p: (h + alpha + 1) / (N + 2 alpha + 2)."""
    return (data.h + prior.alpha + 1.0) / (data.n + 2.0 * prior.alpha + 2.0)
