"""Checks of the analytic hypotheses behind the honeycomb bounds.

* ``curve_check``: a power of ``F(P_t)`` sampled on a grid has the sign
  pattern of a monotone convex (or concave) function.
* ``digamma_g`` / ``digamma_sandwich_scan``: partial sums of the series for
  the derivatives of the log-capacity curve, with certified tails.
* ``induction_bruteforce`` / ``chain_check``: the averaging inequality for the
  square roots of eigenvalue lower bounds, by enumeration and by replaying
  every numeric step of the case analysis.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidArgument, Unsupported
from .functionals import (
    LAMBDA1_HEPTAGON_BOUND,
    LAMBDA1_HEXAGON_BOUND,
    LAMBDA1_PENTAGON_BOUND,
    FunctionalKind,
    bessel_j01,
    lambda1_disk,
    regular_formula,
)

SECOND_DIFF_MARGIN = -1e-9
VIOLATION_TOL = 1e-9


def _finite_or_none(x):
    return x if math.isfinite(x) else None


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class CurveReport:
    kind: FunctionalKind
    beta: float
    t_grid: tuple
    monotone_margin: float
    convexity_margin: float
    verdict: Verdict
    fail_t: float | None = None
    shape: str = ""
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict:
        return {
            "kind": self.kind.tag, "beta": self.beta, "t_grid": list(self.t_grid),
            "expected": self.shape, "monotone_margin": _finite_or_none(self.monotone_margin),
            "convexity_margin": _finite_or_none(self.convexity_margin), "verdict": self.verdict.value,
            "fail_t": self.fail_t, "detail": self.detail,
        }


def curve_check(kind: FunctionalKind, beta: float, t_max: float = 60.0, step: float = 0.01) -> CurveReport:
    """Sample ``psi(t) = F(P_t)**beta`` on ``[3, t_max]``.

    A positive ``beta`` must give a decreasing convex curve, a negative one an
    increasing concave curve. First differences must have the strict sign;
    second differences may dip to ``-1e-9``.
    """
    kind = FunctionalKind.parse(kind)
    if beta == 0 or not math.isfinite(beta):
        raise InvalidArgument("beta must be a nonzero real")
    if not step > 0:
        raise InvalidArgument("step must be positive")
    if t_max < 6 + 2 * step:
        raise InvalidArgument("t_max must be at least 6 + 2*step")
    grid = (3.0, float(t_max), float(step))
    shape = "decreasing-convex" if beta > 0 else "increasing-concave"
    try:
        regular_formula(kind, 3.0)
    except Unsupported as exc:
        return CurveReport(kind, beta, grid, math.nan, math.nan, Verdict.UNSUPPORTED, shape=shape, detail=str(exc))

    n = int(round((t_max - 3.0) / step))
    t = 3.0 + step * np.arange(n + 1)
    psi = np.array([regular_formula(kind, x) for x in t]) ** beta
    d1 = np.diff(psi)
    d2 = np.diff(psi, 2)
    sign = -1.0 if beta > 0 else 1.0
    mono = sign * d1
    conv = -sign * d2
    monotone_margin = float(mono.min())
    convexity_margin = float(conv.min())
    bad1 = np.nonzero(mono <= 0)[0]
    bad2 = np.nonzero(conv < SECOND_DIFF_MARGIN)[0]
    fails = []
    if len(bad1):
        fails.append(t[bad1[0]])
    if len(bad2):
        fails.append(t[bad2[0] + 1])
    verdict = Verdict.FAIL if fails else Verdict.PASS
    return CurveReport(kind, beta, grid, monotone_margin, convexity_margin, verdict,
                       float(min(fails)) if fails else None, shape)


def h3prime_jensen_check(kind: FunctionalKind, beta: float, samples: int, rng_seed: int = 0,
                         k_max: int = 20, n_max: int = 40) -> bool:
    """Jensen step: for random multisets with mean at most 6,
    ``mean(psi(n_i)) >= psi(6)`` (decreasing case) or ``<=`` (increasing)."""
    kind = FunctionalKind.parse(kind)
    rng = np.random.default_rng(rng_seed)
    psi6 = regular_formula(kind, 6) ** beta
    for _ in range(samples):
        k = int(rng.integers(1, k_max + 1))
        ns = rng.integers(3, n_max + 1, size=k)
        while ns.mean() > 6:
            ns[int(np.argmax(ns))] = max(3, int(ns.max()) - int(rng.integers(1, 4)))
        mean_psi = float(np.mean([regular_formula(kind, int(x)) ** beta for x in ns]))
        gap = mean_psi - psi6 if beta > 0 else psi6 - mean_psi
        if gap < -1e-12 * max(1.0, abs(psi6)):
            return False
    return True


# --------------------------------------------------------------------------
# digamma series

@dataclass(frozen=True)
class DigammaEval:
    """Partial sums after ``terms`` terms: ``g1`` approximates ``g'(alpha)`` and
    ``g2`` approximates ``g''(alpha)``. All series terms are positive, so
    ``-g1`` and ``-g2`` are lower bounds with gaps at most ``tail_bound`` and
    ``g2_tail_bound``."""

    alpha: float
    g1: float
    g2: float
    terms: int
    tail_bound: float
    g2_tail_bound: float

    @property
    def neg_g1_interval(self) -> tuple:
        return (-self.g1, -self.g1 + self.tail_bound)


_CHUNK = 1 << 20


def digamma_g(alpha: float, terms: int = 10 ** 5) -> DigammaEval:
    if not 0 < alpha <= 1 / 3:
        raise InvalidArgument("alpha must lie in (0, 1/3]")
    if int(terms) != terms or terms < 10:
        raise InvalidArgument("terms must be an integer >= 10")
    terms = int(terms)
    a2 = alpha * alpha
    s1 = s2 = 0.0
    # largest n first so that small terms are accumulated before large ones
    for hi in range(terms, 0, -_CHUNK):
        n = np.arange(max(1, hi - _CHUNK + 1), hi + 1, dtype=float)[::-1]
        n2 = n * n
        p, q = n2 - a2, n2 - 4 * a2
        s1 += float(np.sum(12 * a2 * n / (p * q)))
        s2 += float(np.sum(4 * n * alpha * (8 / (q * q) - 2 / (p * p))))
    N2 = float(terms) ** 2
    tail1 = 2 * math.log1p(3 * a2 / (N2 - 4 * a2))
    tail2 = 16 * alpha / (N2 - 4 * a2) - 4 * alpha / (N2 - a2)
    return DigammaEval(alpha, -s1, -s2, terms, tail1, tail2)


@dataclass(frozen=True)
class SandwichReport:
    passed: bool
    worst_alpha: float
    worst_check: str
    worst_margin: float
    n_alpha: int
    coefficients: tuple

    def to_json(self) -> dict:
        return {"pass": self.passed, "worst_alpha": self.worst_alpha, "worst_check": self.worst_check,
                "worst_margin": self.worst_margin, "n_alpha": self.n_alpha,
                "coefficients": dict(zip(("lower", "upper", "second"), self.coefficients))}


def digamma_sandwich_scan(grid_step: float = 1e-3, *, terms: int = 10 ** 5, lower: float = 13.0,
                          upper: float = 36.0, second: float = 22.0, alphas=None) -> SandwichReport:
    """Check ``lower a^2 < -g'(a) < upper a^2`` and ``-g''(a) > second a`` on a grid of ``(0, 1/3]``.

    Each margin is relative to the bound, and uses the one-sided side of the
    partial sum (plus its tail for the upper check).
    """
    if alphas is None:
        if not 0 < grid_step <= 1e-3:
            raise InvalidArgument("grid_step must lie in (0, 1e-3]")
        m = int(math.floor((1 / 3) / grid_step + 1e-9))
        alphas = [grid_step * i for i in range(1, m + 1)]
        if abs(alphas[-1] - 1 / 3) > 1e-15:
            alphas.append(1 / 3)
    worst = (math.inf, None, "")
    for a in alphas:
        ev = digamma_g(a, terms)
        lo1, hi1 = ev.neg_g1_interval
        for name, margin in (("lower", lo1 / (lower * a * a) - 1),
                             ("upper", 1 - hi1 / (upper * a * a)),
                             ("second", -ev.g2 / (second * a) - 1)):
            if margin < worst[0]:
                worst = (margin, a, name)
    return SandwichReport(worst[0] > 0, float(worst[1]), worst[2], float(worst[0]), len(alphas),
                          (lower, upper, second))


# --------------------------------------------------------------------------
# averaging induction

class Exponent(Enum):
    HALF = 0.5
    ONE = 1.0

    @classmethod
    def parse(cls, value) -> "Exponent":
        if isinstance(value, cls):
            return value
        if str(value).lower() in ("half", "0.5", "1/2"):
            return cls.HALF
        if str(value).lower() in ("one", "1", "1.0"):
            return cls.ONE
        raise InvalidArgument(f"exponent must be 'half' or 'one', got {value!r}")


@dataclass(frozen=True)
class InductionConfig:
    a: float = LAMBDA1_PENTAGON_BOUND
    b: float = LAMBDA1_HEPTAGON_BOUND
    k_max: int = 8
    n_max: int = 12
    exponent: Exponent = Exponent.HALF
    gamma6: float = LAMBDA1_HEXAGON_BOUND

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.gamma6 > 0):
            raise InvalidArgument("a, b and gamma6 must be positive")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise InvalidArgument("k_max must be an integer >= 1")
        if int(self.n_max) != self.n_max or self.n_max < 7:
            raise InvalidArgument("n_max must be an integer >= 7")
        object.__setattr__(self, "exponent", Exponent.parse(self.exponent))

    def gamma_hat(self, n: int) -> float:
        """Value used for ``gamma(n)`` in the enumeration."""
        if n == 3:
            return 4 * math.pi ** 2 / math.sqrt(3)
        if n == 4:
            return 2 * math.pi ** 2
        if n == 5:
            return self.a
        if n == 6:
            return self.gamma6
        if n == 7:
            return self.b
        return lambda1_disk()


@dataclass(frozen=True)
class InductionReport:
    passed: bool
    counterexample: tuple | None
    violation: float
    checked: int
    worst_slack: float
    worst_multiset: tuple
    seconds: float
    config: InductionConfig

    def to_json(self) -> dict:
        c = self.config
        return {"pass": self.passed, "counterexample": list(self.counterexample) if self.counterexample else None,
                "violation": self.violation, "checked": self.checked, "worst_slack": self.worst_slack,
                "worst_multiset": list(self.worst_multiset), "seconds": self.seconds,
                "config": {"a": c.a, "b": c.b, "k_max": c.k_max, "n_max": c.n_max,
                           "exponent": c.exponent.name.lower(), "gamma6": c.gamma6}}


def induction_bruteforce(cfg: InductionConfig) -> InductionReport:
    """Enumerate multisets ``3 <= n_i <= n_max``, ``k <= k_max``, mean at most 6,
    and test ``sum gamma(n_i)**e >= k gamma(6)**e``."""
    start = time.perf_counter()
    e = cfg.exponent.value
    values = {n: cfg.gamma_hat(n) ** e for n in range(3, cfg.n_max + 1)}
    g6 = values[6]
    worst_slack, worst_ms = math.inf, ()
    counter, violation, checked = None, 0.0, 0
    for k in range(1, cfg.k_max + 1):
        for ms in itertools.combinations_with_replacement(range(3, cfg.n_max + 1), k):
            if sum(ms) > 6 * k:
                continue
            checked += 1
            slack = math.fsum(values[n] for n in ms) - k * g6
            if slack < worst_slack:
                worst_slack, worst_ms = slack, ms
            if -slack > VIOLATION_TOL and counter is None:
                counter, violation = ms, -slack
    return InductionReport(counter is None, counter, violation, checked, worst_slack, worst_ms,
                           time.perf_counter() - start, cfg)


@dataclass(frozen=True)
class ChainItem:
    """One displayed inequality ``lhs >= rhs`` in units of ``sqrt(pi)``.

    ``slack`` uses the displayed decimals; ``true_slack`` replaces every
    displayed lower estimate by the exact quantity it bounds.
    """

    label: str
    lhs: float
    rhs: float
    true_lhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def true_slack(self) -> float:
        return self.true_lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack > 0 and self.true_slack > 0


@dataclass(frozen=True)
class ChainReport:
    items: tuple
    gamma3_exceeds_gamma4: bool

    @property
    def passed(self) -> bool:
        return self.gamma3_exceeds_gamma4 and all(i.holds for i in self.items)

    def item(self, label: str) -> ChainItem:
        for it in self.items:
            if it.label == label:
                return it
        raise KeyError(label)

    def to_json(self) -> dict:
        return {"pass": self.passed, "gamma3_exceeds_gamma4": self.gamma3_exceeds_gamma4,
                "items": [{"label": i.label, "lhs": i.lhs, "rhs": i.rhs, "slack": i.slack,
                           "true_slack": i.true_slack, "holds": i.holds} for i in self.items]}


def chain_check(a: float = LAMBDA1_PENTAGON_BOUND, b: float = LAMBDA1_HEPTAGON_BOUND,
                lambda1_hexagon: float | None = None) -> ChainReport:
    """Replay each numeric inequality of the induction step.

    When an estimate of the hexagon eigenvalue is supplied, the upper estimate
    ``sqrt(gamma(6)/pi) <= 2.433`` is checked as well.
    """
    rp = math.sqrt(math.pi)
    g3 = math.sqrt(4 * math.pi ** 2 / math.sqrt(3)) / rp
    g4 = math.sqrt(2 * math.pi ** 2) / rp
    g5 = math.sqrt(a) / rp
    g7 = math.sqrt(b) / rp
    gb = bessel_j01()  # sqrt(pi j^2) / sqrt(pi)
    d3, d4, d5, d6, d7, db = 2.693, 2.506, 2.4539, 2.433, 2.4124, 2.404
    items = [
        ChainItem("gamma(3)", g3, d3, g3),
        ChainItem("gamma(4)", g4, d4, g4),
        ChainItem("a", g5, d5, g5),
        ChainItem("b", g7, d7, g7),
        ChainItem("ball", gb, db, gb),
        ChainItem("ball>5.783pi", gb * gb, 5.783, gb * gb),
        ChainItem("ball+3", db + d3, 2 * d6, gb + g3),
        ChainItem("ball+4", db + d4, 2 * d6, gb + g4),
        ChainItem("ball+5+5", db + 2 * d5, 3 * d6, gb + 2 * g5),
        ChainItem("ball+ball+3", 2 * db + d3, 3 * d6, 2 * gb + g3),
        ChainItem("ball+3#2", db + d3, 2 * d6, gb + g3),
        ChainItem("5+7", d5 + d7, 2 * d6, g5 + g7),
        ChainItem("7+7+4", 2 * d7 + d4, 3 * d6, 2 * g7 + g4),
        ChainItem("7+4", d7 + d4, 2 * d6, g7 + g4),
        ChainItem("7+7+7+3", 3 * d7 + d3, 4 * d6, 3 * g7 + g3),
        ChainItem("7+7+3", 2 * d7 + d3, 3 * d6, 2 * g7 + g3),
        ChainItem("7+3", d7 + d3, 2 * d6, g7 + g3),
    ]
    if lambda1_hexagon is not None:
        g6 = math.sqrt(lambda1_hexagon) / rp
        # upper estimate: holds when 2.433 - g6 > 0
        items.append(ChainItem("gamma(6)", d6, g6, d6))
    return ChainReport(tuple(items), 4 * math.pi ** 2 / math.sqrt(3) > 2 * math.pi ** 2)
