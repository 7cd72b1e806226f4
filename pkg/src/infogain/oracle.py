"""Quadrature oracle for the closed-form gains.

Everything here is computed by direct numerical integration of the defining
KL integrals. Normalising constants are integrated too, so no special
function from this package is involved; the only exception is the right-hand
side of ``digamma_integral_check``, which *is* the closed form under test.

Endpoint singularities of beta-type weights p^(a-1) (1-p)^(b-1) with a < 1 or
b < 1 are removed exactly with the substitution u = p^a (resp.
v = (1-p)^b), which maps p^(a-1) dp to du / a. The transformed integrands only
carry logarithmic endpoint behaviour, which the adaptive Gauss-Kronrod rule of
QUADPACK handles without ever sampling an endpoint.

The oracle is for verification only; nothing in the sweep path calls it.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .model import BetaPrior, Outcome, PosteriorBeta, TossSummary, posterior
from .special_fn import digamma, log_beta

LOG_DENSITY_FLOOR = math.log(1e-300)


@dataclass(frozen=True)
class QuadratureSpec:
    rule: str = "adaptive-interior"
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.rule != "adaptive-interior":
            raise DomainError(f"unknown quadrature rule {self.rule!r}")
        if not self.abs_tol >= 1e-12:
            raise DomainError(f"abs_tol must be >= 1e-12, got {self.abs_tol!r}")
        if not 1 <= self.max_subdivisions <= 2**20:
            raise DomainError("max_subdivisions must lie in [1, 2**20]")


DEFAULT_SPEC = QuadratureSpec()


def _quad(func, lo, hi, spec, points=None):
    if hi <= lo:
        return 0.0, 0.0
    kwargs = {"epsabs": spec.abs_tol, "epsrel": 0.0, "limit": spec.max_subdivisions, "full_output": 1}
    if points is not None:
        inner = [x for x in points if lo < x < hi]
        if inner:
            kwargs["points"] = inner
    value, err, *rest = integrate.quad(func, lo, hi, **kwargs)
    if not (math.isfinite(value) and math.isfinite(err)):
        raise ConvergenceError("quadrature produced a non-finite result", value, err)
    # QUADPACK may flag roundoff (ier=2) after already meeting a tight target;
    # accept whenever the reported bound is within tolerance.
    if err > spec.abs_tol * 10.0 and len(rest) > 1:
        raise ConvergenceError(f"quadrature did not converge: {rest[1]}", value, err)
    return value, err


def integrate_beta_weight(a, b, g, spec=DEFAULT_SPEC, points=None):
    """Integrate p^(a-1) (1-p)^(b-1) g(p, 1-p) over (0, 1).

    Returns (scaled_value, log_scale, error_bound) with the integral equal to
    scaled_value * exp(log_scale). ``g`` receives p and 1-p separately so that
    logs near p = 1 keep full precision.
    """
    if a <= 0.0 or b <= 0.0:
        raise DomainError("beta weight shapes must be > 0")
    c = a / (a + b)
    log_scale = (a - 1.0) * math.log(c) + (b - 1.0) * math.log1p(-c)

    def weight(p, q):
        return math.exp((a - 1.0) * math.log(p) + (b - 1.0) * math.log(q) - log_scale)

    total = 0.0
    err_total = 0.0

    # left piece, (0, c]
    if a < 1.0:
        def left(u):
            p = u ** (1.0 / a)
            q = 1.0 - p
            return math.exp((b - 1.0) * math.log(q) - log_scale) * g(p, q) / a

        u_points = None if points is None else [x**a for x in points if 0.0 < x < c]
        v, e = _quad(left, 0.0, c**a, spec, u_points)
    else:
        def left(p):
            q = 1.0 - p
            return weight(p, q) * g(p, q)

        v, e = _quad(left, 0.0, c, spec, points)
    total += v
    err_total += e

    # right piece, [c, 1)
    if b < 1.0:
        def right(v_):
            q = v_ ** (1.0 / b)
            p = 1.0 - q
            return math.exp((a - 1.0) * math.log(p) - log_scale) * g(p, q) / b

        v_points = None if points is None else [(1.0 - x) ** b for x in points if c < x < 1.0]
        v, e = _quad(right, 0.0, (1.0 - c) ** b, spec, v_points)
    else:
        def right(q):
            p = 1.0 - q
            return weight(p, q) * g(p, q)

        # integrate in q = 1 - p so that ln(1 - p) stays exact near p = 1
        q_points = None if points is None else [1.0 - x for x in points if c < x < 1.0]
        v, e = _quad(right, 0.0, 1.0 - c, spec, q_points)
    total += v
    err_total += e
    return total, log_scale, err_total


def _log_normaliser(a, b, spec):
    z, shift, _ = integrate_beta_weight(a, b, lambda p, q: 1.0, spec)
    return math.log(z) + shift


def kl_beta(post: PosteriorBeta, ref: PosteriorBeta, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """KL(post || ref) for two beta densities, by quadrature."""
    da = post.a - ref.a
    db = post.b - ref.b
    z, shift, _ = integrate_beta_weight(post.a, post.b, lambda p, q: 1.0, spec)
    if da == 0.0 and db == 0.0:
        return 0.0
    cross, _, _ = integrate_beta_weight(
        post.a, post.b, lambda p, q: da * math.log(p) + db * math.log(q), spec
    )
    log_z_post = math.log(z) + shift
    log_z_ref = _log_normaliser(ref.a, ref.b, spec)
    return cross / z - log_z_post + log_z_ref


def diff_gain_by_quadrature(prior: BetaPrior, data: TossSummary, next: Outcome, spec=DEFAULT_SPEC):
    """KL(post_{N+1} || prior) - KL(post_N || prior)."""
    prior_density = PosteriorBeta(prior.alpha + 1.0, prior.alpha + 1.0)
    before = posterior(prior, data)
    after = posterior(prior, data.after(next))
    return kl_beta(after, prior_density, spec) - kl_beta(before, prior_density, spec)


def rel_gain_by_quadrature(prior: BetaPrior, data: TossSummary, next: Outcome, spec=DEFAULT_SPEC):
    """KL(post_{N+1} || post_N)."""
    return kl_beta(posterior(prior, data.after(next)), posterior(prior, data), spec)


def digamma_integral_check(a, b, spec: QuadratureSpec = DEFAULT_SPEC) -> Tuple[float, float]:
    """Both sides of  int_0^1 x^a (1-x)^b ln x dx = B(a+1, b+1) [psi(a+1) - psi(a+b+2)].

    Returns (quadrature, closed_form). Exponents down to -1 (exclusive) are
    accepted since the integral converges there.
    """
    if not (a > -1.0 and b > -1.0):
        raise DomainError("exponents must be > -1")
    scaled, shift, _ = integrate_beta_weight(a + 1.0, b + 1.0, lambda p, q: math.log(p), spec)
    lhs = scaled * math.exp(shift)
    rhs = math.exp(log_beta(a + 1.0, b + 1.0)) * (digamma(a + 1.0) - digamma(a + b + 2.0))
    return lhs, rhs


@dataclass(frozen=True)
class TabulatedPrior:
    """A prior on (0, 1) given by knots, interpolated linearly in log-density.

    Outside the first and last knot the log-density is held constant.
    Densities are normalised at construction so the interpolant integrates
    to one.
    """

    knots: Tuple[Tuple[float, float], ...]
    interpolation: str = "linear-in-log-density"
    _log_norm: float = field(default=0.0, repr=False, compare=False)

    def __post_init__(self):
        if self.interpolation != "linear-in-log-density":
            raise DomainError(f"unknown interpolation {self.interpolation!r}")
        if len(self.knots) < 2:
            raise DomainError("need at least two knots")
        xs = [k[0] for k in self.knots]
        if any(not 0.0 < x < 1.0 for x in xs) or any(x1 >= x2 for x1, x2 in zip(xs, xs[1:])):
            raise DomainError("knot positions must be strictly increasing inside (0, 1)")
        if any(not (d >= 0.0 and math.isfinite(d)) for _, d in self.knots):
            raise DomainError("knot densities must be finite and >= 0")
        raw = tuple((float(x), float(d)) for x, d in self.knots)
        object.__setattr__(self, "knots", raw)
        object.__setattr__(self, "_log_norm", 0.0)
        mass, _, _ = integrate_beta_weight(1.0, 1.0, lambda p, q: self.density(p), DEFAULT_SPEC, self.positions)
        if not mass > 0.0:
            raise DomainError("prior has zero mass")
        object.__setattr__(self, "_log_norm", math.log(mass))

    @classmethod
    def from_function(cls, f, count=81):
        """Tabulate ``f`` on ``count`` evenly spaced interior knots."""
        xs = np.linspace(0.0, 1.0, count + 2)[1:-1]
        return cls(tuple((float(x), float(f(x))) for x in xs))

    @property
    def positions(self):
        return [x for x, _ in self.knots]

    def log_density(self, p):
        xs = self.positions
        logs = [max(math.log(d), LOG_DENSITY_FLOOR) if d > 0.0 else LOG_DENSITY_FLOOR for _, d in self.knots]
        return float(np.interp(p, xs, logs)) - self._log_norm

    def density(self, p):
        return math.exp(self.log_density(p))

    def total_mass(self, spec=DEFAULT_SPEC):
        mass, _, _ = integrate_beta_weight(1.0, 1.0, lambda p, q: self.density(p), spec, self.positions)
        return mass


def expected_equality_check(
    prior: TabulatedPrior, data: TossSummary, spec: QuadratureSpec = DEFAULT_SPEC
) -> Tuple[float, float]:
    """Expected differential and relative gains of the next toss for an arbitrary prior.

    Each is assembled from its definition: the Head and Tail gains are KL
    divergences evaluated by quadrature and then weighted by the posterior
    predictive probabilities. Returns (expected_diff, expected_rel).
    """
    h, t = data.h, data.n - data.h
    knots = prior.positions

    def moment(g):
        # int p^h (1-p)^t prior(p) g(p, q) dp
        val, _, _ = integrate_beta_weight(h + 1.0, t + 1.0, lambda p, q: prior.density(p) * g(p, q), spec, knots)
        return val

    z_n = moment(lambda p, q: 1.0)
    z_h = moment(lambda p, q: p)
    z_t = moment(lambda p, q: q)
    e_ln_p = moment(lambda p, q: math.log(p))
    e_ln_q = moment(lambda p, q: math.log(q))
    e_p_ln_p = moment(lambda p, q: p * math.log(p))
    e_p_ln_q = moment(lambda p, q: p * math.log(q))
    e_q_ln_p = moment(lambda p, q: q * math.log(p))
    e_q_ln_q = moment(lambda p, q: q * math.log(q))

    # every moment carries the same scale factor; it cancels in the ratios
    # and in the differences of log-normalisers below
    mean_p = z_h / z_n
    mean_q = z_t / z_n
    log_z_n = math.log(z_n)
    log_z_h = math.log(z_h)
    log_z_t = math.log(z_t)

    # KL(posterior || prior): the prior cancels inside the log ratio
    kl_n = (h * e_ln_p + t * e_ln_q) / z_n - log_z_n
    kl_head = ((h + 1) * e_p_ln_p + t * e_p_ln_q) / z_h - log_z_h
    kl_tail = (h * e_q_ln_p + (t + 1) * e_q_ln_q) / z_t - log_z_t
    exp_diff = mean_p * (kl_head - kl_n) + mean_q * (kl_tail - kl_n)

    # KL(post_{N+1} || post_N) = E_{N+1}[ln p or ln q] + ln Z_N - ln Z_{N+1}
    rel_head = e_p_ln_p / z_h + log_z_n - log_z_h
    rel_tail = e_q_ln_q / z_t + log_z_n - log_z_t
    exp_rel = mean_p * rel_head + mean_q * rel_tail
    return exp_diff, exp_rel
