"""Exact and estimated cheating probabilities, bound formulas, sweeps.

Exact probabilities are uniform averages over the committed bit and all
challenge vectors, computed as rationals.  Monte Carlo estimates come with
exact binomial (Clopper-Pearson) confidence intervals.  The bound formulas
are the tower lower bound 1 - (1/2)*((1-1/Q)(1-w))^floor((m-k0-1)/(rho+1))
and the heuristic upper comparison 1/2 + c*m/sqrt(Q).
"""

from __future__ import annotations

import csv
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from scipy.stats import beta as _beta

from .adversary import CausalModel, CheatStrategy, build_attack, tower_gamma
from .errors import CapabilityError
from .field import FieldSpec
from .games import DetStrategy, GameDist, win_probability
from .protocol import ProtocolParams, Variant, verify_values

EXACT_ENUM_CAP = 10 ** 8
MC_TABLE_CAP = 4096


def _resolve_params(strategy: CheatStrategy,
                    params: Optional[ProtocolParams]) -> ProtocolParams:
    if params is None:
        return strategy.params
    if params != strategy.params:
        raise ValueError("strategy targets different protocol parameters")
    return params


def exact_cheat_probability(strategy: CheatStrategy,
                            params: Optional[ProtocolParams] = None,
                            cap: int = EXACT_ENUM_CAP) -> Fraction:
    """Exact acceptance probability by full enumeration of (d, challenges)."""
    params = _resolve_params(strategy, params)
    q = params.field.q
    n_ch = params.n_challenges
    total = 2 * q ** n_ch
    if total > cap:
        raise CapabilityError(
            f"exact enumeration needs {total} transcripts (cap {cap});"
            " use mc_cheat_probability")
    wins = 0
    for d in (0, 1):
        for xs in itertools.product(range(q), repeat=n_ch):
            ys = strategy.responses(d, xs)
            if verify_values(params, d, xs, ys):
                wins += 1
    return Fraction(wins, total)


def clopper_pearson(wins: int, samples: int, confidence: float = 0.99
                    ) -> tuple[float, float]:
    """Exact binomial two-sided confidence interval."""
    alpha = 1.0 - confidence
    lo = 0.0 if wins == 0 else float(_beta.ppf(alpha / 2, wins, samples - wins + 1))
    hi = 1.0 if wins == samples else float(
        _beta.ppf(1 - alpha / 2, wins + 1, samples - wins))
    return lo, hi


@dataclass(frozen=True)
class McEstimate:
    mean: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int
    wins: int
    confidence: float = 0.99

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2

    def covers(self, value) -> bool:
        return self.ci_low <= float(value) <= self.ci_high

    def to_dict(self) -> dict:
        return {"mean": self.mean, "ci_low": self.ci_low, "ci_high": self.ci_high,
                "samples": self.samples, "seed": self.seed, "wins": self.wins,
                "confidence": self.confidence}


def mc_cheat_probability(strategy: CheatStrategy,
                         params: Optional[ProtocolParams] = None,
                         samples: int = 10000, seed: int = 0) -> McEstimate:
    """Monte Carlo acceptance estimate over i.i.d. uniform (d, challenges).

    For small input spaces the verdict table is precomputed once and the
    trials reduce to index draws; the sampling distribution is identical.
    """
    params = _resolve_params(strategy, params)
    if samples < 100:
        raise ValueError("samples must be >= 100")
    q = params.field.q
    n_ch = params.n_challenges
    rng = random.Random(f"{seed}:mc")
    space = 2 * q ** n_ch
    wins = 0
    if space <= MC_TABLE_CAP:
        verdicts = []
        for d in (0, 1):
            for xs in itertools.product(range(q), repeat=n_ch):
                verdicts.append(
                    verify_values(params, d, xs, strategy.responses(d, xs)))
        for _ in range(samples):
            if verdicts[rng.randrange(space)]:
                wins += 1
    else:
        for _ in range(samples):
            d = rng.randrange(2)
            xs = tuple(rng.randrange(q) for _ in range(n_ch))
            if verify_values(params, d, xs, strategy.responses(d, xs)):
                wins += 1
    lo, hi = clopper_pearson(wins, samples)
    return McEstimate(wins / samples, lo, hi, samples, seed, wins)


def theory_lower_bound(m: int, q: int, w, rho: int = 2, k0: int = 0) -> Fraction:
    """Tower lower bound on the cheating probability.

    Valid for any feasible game-strategy value w substituted for the game
    optimum; (rho=2, k0=0) gives the base three-round form with exponent
    floor((m-1)/3).
    """
    w = Fraction(w)
    if not 0 <= w <= 1:
        raise ValueError(f"w must lie in [0, 1], got {w}")
    if rho == 2 and k0 == 0:
        if m < 3:
            raise ValueError(f"the base bound needs m >= 3, got {m}")
    elif m < k0 + 2:
        raise ValueError(f"the general bound needs m >= k0 + 2, got m={m}, k0={k0}")
    exponent = (m - k0 - 1) // (rho + 1)
    factor = (1 - Fraction(1, q)) * (1 - w)
    return 1 - Fraction(1, 2) * factor ** exponent


def theory_upper_bound(m: int, q: int, c: float = 1.0) -> float:
    """Heuristic binding comparison 1/2 + c*m/sqrt(Q), clamped to 1.

    The constant is not pinned by theory; c is caller-supplied.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    return min(1.0, 0.5 + c * m / math.sqrt(q))


def predicted_attack_probability(spec: FieldSpec, variant: Variant, m: int,
                                 model: CausalModel,
                                 game_strategy: Optional[DetStrategy]
                                 ) -> Fraction:
    """Closed-form exact acceptance probability of build_attack's strategy.

    The acceptance deficit starts at (1/2)(1-1/Q)^k0 after the silent
    prefix, shrinks by (1-1/Q)(1-w_gamma) per tower step (w_gamma the
    plugged strategy's exact value on the windowed input distribution), and
    by (1-1/Q) per padding round.  Matches enumeration wherever the latter
    is feasible.
    """
    variant = Variant(variant)
    q = spec.q
    half = Fraction(1, 2)
    miss = 1 - Fraction(1, q)
    if variant is Variant.STANDARD:
        if m - 1 < 2:
            return 1 - half * miss ** (max(m, 2) - 1)
        return predicted_attack_probability(
            spec, Variant.SYMMETRIZED, m - 1, model, game_strategy)
    steps = (m - model.k0) // (model.rho + 1)
    if steps < 1 or game_strategy is None:
        return 1 - half * miss ** m
    tower_m = model.k0 + steps * (model.rho + 1)
    w_gamma = win_probability(game_strategy, GameDist(spec, tower_gamma(spec, model)))
    step_factor = miss * (1 - w_gamma)
    deficit = half * miss ** model.k0 * step_factor ** steps * miss ** (m - tower_m)
    return 1 - deficit


@dataclass
class CheatReport:
    """Measured cheating probability next to the matching bound values."""

    q: int
    m: int
    variant: Variant
    rho: int
    k0: int
    w: Fraction
    exact: Optional[Fraction]
    estimate: Optional[McEstimate]
    theory_lower: Fraction
    theory_upper: float
    upper_c: float

    @property
    def value(self) -> float:
        return float(self.exact) if self.exact is not None else self.estimate.mean

    @property
    def epsilon(self) -> float:
        """Binding gap: measured probability minus one half."""
        return self.value - 0.5

    def to_dict(self) -> dict:
        return {
            "q": self.q, "m": self.m, "variant": self.variant.value,
            "rho": self.rho, "k0": self.k0,
            "w": f"{self.w.numerator}/{self.w.denominator}",
            "exact": (None if self.exact is None
                      else f"{self.exact.numerator}/{self.exact.denominator}"),
            "exact_float": None if self.exact is None else float(self.exact),
            "estimate": None if self.estimate is None else self.estimate.to_dict(),
            "theory_lower": f"{self.theory_lower.numerator}/{self.theory_lower.denominator}",
            "theory_lower_float": float(self.theory_lower),
            "theory_upper": self.theory_upper,
            "upper_c": self.upper_c,
            "epsilon": self.epsilon,
        }


def make_report(strategy: CheatStrategy, method: str = "exact",
                samples: int = 10000, seed: int = 0,
                upper_c: float = 1.0) -> CheatReport:
    params = strategy.params
    q = params.field.q
    model = strategy.model
    w = (win_probability(strategy.game_strategy, GameDist.uniform(params.field))
         if strategy.game_strategy is not None else Fraction(0))
    exact = estimate = None
    if method == "exact":
        exact = exact_cheat_probability(strategy)
    elif method == "mc":
        estimate = mc_cheat_probability(strategy, samples=samples, seed=seed)
    else:
        raise ValueError(f"unknown method {method!r}")
    lower = theory_lower_bound(params.m, q, w, model.rho, model.k0)
    upper = theory_upper_bound(params.m, q, upper_c)
    return CheatReport(q, params.m, params.variant, model.rho, model.k0, w,
                       exact, estimate, lower, upper, upper_c)


@dataclass
class SweepRow:
    q: int
    m: int
    rho: int
    k0: int
    w: Fraction
    exact: Optional[Fraction]
    mc: Optional[McEstimate]
    closed_form: Fraction
    lower_bound: Fraction
    upper_bound: float
    t: float

    @property
    def value(self) -> float:
        return float(self.exact) if self.exact is not None else self.mc.mean

    def to_dict(self) -> dict:
        return {
            "q": self.q, "m": self.m, "rho": self.rho, "k0": self.k0,
            "w": f"{self.w.numerator}/{self.w.denominator}",
            "exact": (None if self.exact is None
                      else f"{self.exact.numerator}/{self.exact.denominator}"),
            "mc": None if self.mc is None else self.mc.to_dict(),
            "closed_form": f"{self.closed_form.numerator}/{self.closed_form.denominator}",
            "closed_form_float": float(self.closed_form),
            "lower_bound": f"{self.lower_bound.numerator}/{self.lower_bound.denominator}",
            "lower_bound_float": float(self.lower_bound),
            "upper_bound": self.upper_bound,
            "t": self.t,
        }


def trend_sweep(spec: FieldSpec, m_values: Sequence[int],
                    game_strategy: DetStrategy,
                    model: Optional[CausalModel] = None,
                    variant: Variant = Variant.STANDARD,
                    exact_cap: int = 2 * 10 ** 5,
                    samples: int = 20000, seed: int = 0,
                    upper_c: float = 1.0) -> list[SweepRow]:
    """One attack evaluation per protocol length, with bound columns.

    Rows small enough to enumerate are exact; the rest are Monte Carlo
    estimates, each alongside the construction's closed-form value.
    """
    model = model or CausalModel()
    w = win_probability(game_strategy, GameDist.uniform(spec))
    q = spec.q
    rows = []
    for m in m_values:
        strategy = build_attack(spec, variant, m, model, game_strategy)
        params = strategy.params
        closed = predicted_attack_probability(spec, variant, m, model,
                                              strategy.game_strategy)
        exact = mc = None
        if 2 * q ** params.n_challenges <= exact_cap:
            exact = exact_cheat_probability(strategy)
        else:
            mc = mc_cheat_probability(strategy, samples=samples,
                                      seed=seed + m)
        lower = theory_lower_bound(m, q, w, model.rho, model.k0)
        rows.append(SweepRow(q, m, model.rho, model.k0, w, exact, mc, closed,
                             lower, theory_upper_bound(m, q, upper_c),
                             m / math.sqrt(q)))
    return rows


def empirical_upper_constant(rows: Sequence[SweepRow]) -> float:
    """Smallest c for which every measured row satisfies the upper formula."""
    return max((row.value - 0.5) * math.sqrt(row.q) / row.m for row in rows)


SWEEP_COLUMNS = ["q", "m", "rho", "k0", "w_num", "w_den", "g_num", "g_den",
                 "mc_mean", "mc_ci", "lower_bound", "upper_bound_c"]


def write_sweep_csv(rows: Sequence[SweepRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([
                row.q, row.m, row.rho, row.k0,
                row.w.numerator, row.w.denominator,
                "" if row.exact is None else row.exact.numerator,
                "" if row.exact is None else row.exact.denominator,
                "" if row.mc is None else row.mc.mean,
                "" if row.mc is None else row.mc.half_width,
                float(row.lower_bound), row.upper_bound,
            ])
