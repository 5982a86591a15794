"""Closed-form lower bounds on collective success, and their inversion.

Each per-collective bound is 1 minus two deficit terms:

- a rarity term: signal rarity times flip difficulty times inverse
  effective mass, and
- an overlap term: cross-collective signal overlap times the misaligned
  mass fraction.

Feature-label and feature-only strategies have their own difficulty
factors; the feature-only bound additionally requires a positive minimal
target conditional p_c with p_c <= (1+2*eps)/2.

Global variants: the worst-collective bound is the componentwise minimum;
the weighted bound ships in two readings that are deliberately kept apart.
The "as_printed" reading sums the per-collective deficits divided by the
total mass, keeping each deficit's own 1/alpha_c factor; the "tightened"
reading weights each deficit by its alpha_c first, which cancels that
factor and is never looser. Both are sound.

Bounds are reported raw: a value at or below 0 is vacuous but still valid,
and clamping would hide tightness information.

Inversion: every bound is affine in 1/alpha_c and affine increasing in
beta_c, so critical masses solve in closed form in rational mode (float
mode falls back to bisection for the mass solve) and critical alignments
solve in closed form in both modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .classifier import as_epsilon
from .collectives import Ensemble, Strategy
from .errors import (
    BoundUnavailable,
    EmptyEnsemble,
    InvalidEpsilon,
    PositivityViolated,
    PreconditionUnmet,
    ValidationError,
)
from .metrics import (
    InstanceParams,
    compute_beta,
    compute_delta,
    compute_global_xi,
    compute_p,
    compute_xi_c,
    instance_params,
)
from .numeric import FLOAT, RATIONAL, Num, zero
from .errors import UndefinedGap

AS_PRINTED = "as_printed"
TIGHTENED = "tightened"

MASS_BRACKET_SHRINK = 10**9  # lower solve bracket = cap / this
FLOAT_SOLVE_TOL = 1e-12


def _eps_value(eps) -> Num:
    return as_epsilon(eps).value


def fl_deficit_terms(params: InstanceParams, alphas: Sequence, eps, c_index: int):
    """Rarity and overlap deficits of the feature-label bound for one collective."""
    ev = _eps_value(eps)
    alpha = alphas[c_index]
    if not alpha > 0:
        raise ValidationError("collective mass must be positive")
    abar = params.alpha_bar
    difficulty = (params.delta_c[c_index] + 2 * ev) / (1 - 2 * ev)
    rarity = params.xi_c[c_index] * difficulty * (1 - abar) / alpha
    overlap = params.xi * (1 + 2 * ev) / (1 - 2 * ev) * (abar - alpha - params.beta_c[c_index]) / alpha
    return rarity, overlap


def fo_deficit_terms(params: InstanceParams, alphas: Sequence, eps, c_index: int):
    """Rarity and overlap deficits of the feature-only bound for one collective."""
    ev = _eps_value(eps)
    alpha = alphas[c_index]
    if not alpha > 0:
        raise ValidationError("collective mass must be positive")
    p = params.p_c[c_index]
    if not p > 0:
        raise PositivityViolated("minimal target conditional is zero")
    if p > (1 + 2 * ev) / 2:
        raise PreconditionUnmet(f"p_c = {p} exceeds (1+2*eps)/2 = {(1 + 2 * ev) / 2}")
    abar = params.alpha_bar
    rarity = (
        params.xi_c[c_index]
        * ((1 - abar) * (1 + 2 * ev - 2 * p) + 2 * ev * abar)
        / ((1 - 2 * ev) * p)
        / alpha
    )
    overlap = params.xi * (1 + 2 * ev) / (1 - 2 * ev) * (abar - alpha - params.beta_c[c_index]) / (alpha * p)
    return rarity, overlap


def _deficit_terms(params, alphas, eps, c_index, strategy: Strategy):
    if strategy is Strategy.FEATURE_LABEL:
        return fl_deficit_terms(params, alphas, eps, c_index)
    return fo_deficit_terms(params, alphas, eps, c_index)


def fl_bound(params: InstanceParams, alphas: Sequence, eps, c_index: int) -> Num:
    """Feature-label success lower bound, raw (may be negative, i.e. vacuous)."""
    rarity, overlap = fl_deficit_terms(params, alphas, eps, c_index)
    return 1 - rarity - overlap


def fo_bound(params: InstanceParams, alphas: Sequence, eps, c_index: int) -> Num:
    """Feature-only success lower bound, raw; requires the positivity precondition."""
    rarity, overlap = fo_deficit_terms(params, alphas, eps, c_index)
    return 1 - rarity - overlap


def per_collective_bound(params, alphas, eps, c_index, strategy: Strategy) -> Num:
    rarity, overlap = _deficit_terms(params, alphas, eps, c_index, strategy)
    return 1 - rarity - overlap


def global_min_bound(per_bounds: Sequence) -> Num:
    """Worst-collective bound: the componentwise minimum of per-collective bounds."""
    if not per_bounds:
        raise EmptyEnsemble("no per-collective bounds")
    if any(b is None for b in per_bounds):
        raise BoundUnavailable("some per-collective bound is inapplicable")
    return min(per_bounds)


def global_weighted_bound(
    params: InstanceParams,
    alphas: Sequence,
    eps,
    strategies: Sequence,
    variant: str,
) -> Num:
    """Mass-weighted success bound in the requested reading (see module docstring)."""
    if variant not in (AS_PRINTED, TIGHTENED):
        raise ValidationError(f"unknown weighted-bound variant {variant!r}")
    if not alphas:
        raise EmptyEnsemble("no collectives")
    total = zero(params.mode)
    for c_index, strategy in enumerate(strategies):
        rarity, overlap = _deficit_terms(params, alphas, eps, c_index, strategy)
        deficit = rarity + overlap
        if variant == TIGHTENED:
            deficit = alphas[c_index] * deficit
        total += deficit
    return 1 - total / params.alpha_bar


@dataclass(frozen=True)
class PerCollectiveBound:
    strategy: Strategy
    bound: Optional[Num]
    applicable: bool
    reason: str
    rarity_term: Optional[Num]
    overlap_term: Optional[Num]
    vacuous: bool


@dataclass(frozen=True)
class BoundReport:
    """All bound values for one scenario, with applicability and vacuity flags."""

    per_collective: tuple
    s_min_bound: Optional[Num]
    s_w_bound_printed: Optional[Num]
    s_w_bound_tightened: Optional[Num]
    params: InstanceParams
    epsilon: Num


def bound_report(e: Ensemble, eps, params: Optional[InstanceParams] = None) -> BoundReport:
    """Evaluate every applicable bound for an ensemble at one budget."""
    ev = _eps_value(eps)
    if params is None:
        params = instance_params(e)
    alphas = [c.mass for c in e.collectives]
    per = []
    for i, c in enumerate(e.collectives):
        try:
            rarity, overlap = _deficit_terms(params, alphas, ev, i, c.strategy)
        except (PositivityViolated, PreconditionUnmet) as exc:
            per.append(
                PerCollectiveBound(c.strategy, None, False, str(exc), None, None, False)
            )
            continue
        value = 1 - rarity - overlap
        per.append(
            PerCollectiveBound(c.strategy, value, True, "", rarity, overlap, value <= 0)
        )
    all_applicable = all(b.applicable for b in per) and per
    s_min = None
    printed = None
    tight = None
    if all_applicable:
        s_min = global_min_bound([b.bound for b in per])
        strategies = [c.strategy for c in e.collectives]
        printed = global_weighted_bound(params, alphas, ev, strategies, AS_PRINTED)
        tight = global_weighted_bound(params, alphas, ev, strategies, TIGHTENED)
    return BoundReport(tuple(per), s_min, printed, tight, params, ev)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a bound inversion; value is None when infeasible."""

    value: Optional[Num]
    achieved_bound: Num
    feasible: bool


def _solve_constants(e: Ensemble, c_index: int, eps, strategy: Strategy):
    """The bound as K1 - K2/alpha for the mass solve: alpha-free constants.

    Only alpha_bar depends on the solved mass; every other instance
    constant is mass-free, so the bound is affine in 1/alpha.
    """
    ev = _eps_value(eps)
    c = e.collectives[c_index]
    xi_c = compute_xi_c(e.base, c)
    xi = compute_global_xi(e)
    try:
        delta = compute_delta(e.base, c)
    except UndefinedGap:
        delta = zero(e.base.mode)
    beta = compute_beta(e, c_index)
    rest = sum(
        (cc.mass for j, cc in enumerate(e.collectives) if j != c_index), zero(e.base.mode)
    )
    if strategy is Strategy.FEATURE_LABEL:
        difficulty = (delta + 2 * ev) / (1 - 2 * ev)
        k1 = 1 + xi_c * difficulty
        k2 = xi_c * difficulty * (1 - rest) + xi * (1 + 2 * ev) / (1 - 2 * ev) * (rest - beta)
        return k1, k2, rest
    p = compute_p(e.base, c)
    if not p > 0:
        raise PositivityViolated("minimal target conditional is zero")
    if p > (1 + 2 * ev) / 2:
        raise PreconditionUnmet(f"p_c = {p} exceeds (1+2*eps)/2")
    base_difficulty = (1 - rest) * (1 + 2 * ev - 2 * p) + 2 * ev * rest
    k1 = 1 - xi_c * (2 * p - 1) / ((1 - 2 * ev) * p)
    k2 = xi_c * base_difficulty / ((1 - 2 * ev) * p) + xi * (1 + 2 * ev) / (1 - 2 * ev) * (rest - beta) / p
    return k1, k2, rest


def critical_mass(
    e: Ensemble, c_index: int, s_star, eps, strategy: Optional[Strategy] = None
) -> SolveResult:
    """Smallest mass of collective c whose bound reaches s_star, other masses fixed.

    The total mass tracks the solved value, so the admissible interval is
    (0, 1 - sum of other masses]; infeasible only when even the supremum
    fails. Rational mode solves the affine-in-1/alpha equation exactly;
    float mode bisects to within 1e-12.
    """
    if not (0 < s_star < 1):
        raise ValidationError(f"target success level must lie in (0, 1), got {s_star}")
    if strategy is None:
        strategy = e.collectives[c_index].strategy
    k1, k2, rest = _solve_constants(e, c_index, eps, strategy)
    return _finish_mass_solve(e, k1, k2, rest, s_star)


def _finish_mass_solve(e: Ensemble, k1, k2, rest, s_star) -> SolveResult:
    mode = e.base.mode
    cap = 1 - rest
    if not cap > 0:
        raise ValidationError("other collectives already exhaust the population")

    def bound_at(alpha):
        return k1 - k2 / alpha

    at_cap = bound_at(cap)
    if at_cap < s_star:
        return SolveResult(None, at_cap, False)
    low = cap / MASS_BRACKET_SHRINK
    if k2 == 0 or bound_at(low) >= s_star:
        return SolveResult(low, bound_at(low), True)
    if mode == RATIONAL:
        alpha = k2 / (k1 - s_star)
        if alpha > cap:
            # at_cap >= s_star guarantees this cannot happen for k2 > 0
            return SolveResult(None, at_cap, False)
        return SolveResult(alpha, bound_at(alpha), True)
    lo, hi = low, cap
    while hi - lo > FLOAT_SOLVE_TOL:
        mid = (lo + hi) / 2
        if bound_at(mid) >= s_star:
            hi = mid
        else:
            lo = mid
    return SolveResult(hi, bound_at(hi), True)


def critical_alignment(
    e: Ensemble, c_index: int, s_star, eps, strategy: Optional[Strategy] = None
) -> SolveResult:
    """Smallest alignment beta for collective c whose bound reaches s_star,
    with all masses fixed and beta treated as a free parameter in
    [0, alpha_bar - alpha_c]. Affine and increasing in beta, so closed form."""
    if not (0 <= s_star <= 1):
        raise ValidationError(f"target success level must lie in [0, 1], got {s_star}")
    if strategy is None:
        strategy = e.collectives[c_index].strategy
    ev = _eps_value(eps)
    params = instance_params(e)
    alphas = [c.mass for c in e.collectives]
    alpha = alphas[c_index]
    beta_max = params.alpha_bar - alpha

    def bound_with_beta(beta):
        adjusted = InstanceParams(
            xi_c=params.xi_c,
            delta_c=params.delta_c,
            delta_defined=params.delta_defined,
            p_c=params.p_c,
            beta_c=tuple(
                beta if j == c_index else b for j, b in enumerate(params.beta_c)
            ),
            xi=params.xi,
            alpha_bar=params.alpha_bar,
            mode=params.mode,
        )
        return per_collective_bound(adjusted, alphas, ev, c_index, strategy)

    at_zero = bound_with_beta(zero(e.base.mode))
    if at_zero >= s_star:
        return SolveResult(zero(e.base.mode), at_zero, True)
    at_max = bound_with_beta(beta_max)
    if at_max < s_star:
        return SolveResult(None, at_max, False)
    slope = params.xi * (1 + 2 * ev) / (1 - 2 * ev) / alpha
    if strategy is Strategy.FEATURE_ONLY:
        slope = slope / params.p_c[c_index]
    # slope > 0 here: at_zero < s_star <= at_max rules out a flat bound
    beta = (s_star - at_zero) / slope
    return SolveResult(beta, bound_with_beta(beta), True)
