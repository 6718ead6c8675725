"""Descriptive and inferential statistics over traces and count data.

The p-value machinery is self-contained: the chi-square(1) and normal
survival functions are both evaluated through a regularized incomplete gamma
function computed with the standard series / continued-fraction pair
(relative error comfortably below 1e-10, documented to 6 significant
digits). No lookup tables, no external stats dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .engine import SessionTrace


# --------------------------------------------------------------------------
# Special functions
# --------------------------------------------------------------------------

_FPMIN = 1e-300
_EPS = 1e-15
_MAX_ITER = 500


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) by power series (x < a + 1)."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) by modified Lentz continued
    fraction (x >= a + 1)."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))

def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)

def chi2_sf(x: float, df: int = 1) -> float:
    """Survival function of the chi-square distribution with ``df`` degrees."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if x <= 0:
        return 1.0
    return gamma_q(df / 2.0, x / 2.0)

def normal_sf(z: float) -> float:
    """Survival function of the standard normal, P(Z > z)."""
    if z < 0:
        return 1.0 - normal_sf(-z)
    if z == 0:
        return 0.5
    return 0.5 * gamma_q(0.5, 0.5 * z * z)


# --------------------------------------------------------------------------
# Contingency tables
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ContingencyTable2x2:
    """Counts laid out as rows = groups, columns = outcome yes/no:

        group 1:  a  b
        group 2:  c  d
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) < 0:
                raise ValueError(f"count {name} must be nonnegative")
        if self.n == 0:
            raise ValueError("table is empty")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d

    def marginals(self) -> tuple[int, int, int, int]:
        return (self.a + self.b, self.c + self.d, self.a + self.c, self.b + self.d)


@dataclass(frozen=True)
class Chi2Result:
    statistic: float
    df: int
    p_value: float


def chi_square_2x2(t: ContingencyTable2x2, yates: bool = False) -> Chi2Result:
    """Pearson chi-square test of independence on a 2x2 table.

    Uncorrected statistic n(ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)); with
    ``yates`` the absolute cross-product difference is reduced by n/2 before
    squaring. Uncorrected is the default. The p-value comes from the
    chi-square(1) survival function.
    """
    r1, r2, c1, c2 = t.marginals()
    if min(r1, r2, c1, c2) == 0:
        raise ValueError("chi-square requires all marginals > 0")
    diff = abs(t.a * t.d - t.b * t.c)
    if yates:
        diff = max(0.0, diff - t.n / 2.0)
    statistic = t.n * diff * diff / (r1 * r2 * c1 * c2)
    return Chi2Result(statistic=statistic, df=1, p_value=chi2_sf(statistic, df=1))


# --------------------------------------------------------------------------
# Rank and correlation tests
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float
    p_value: float
    method: str  # "exact" or "normal"


@lru_cache(maxsize=None)
def _u_count(n1: int, n2: int, u: int) -> int:
    """Number of arrangements of n1 + n2 distinct values with U-statistic u."""
    if u < 0 or u > n1 * n2:
        return 0
    if n1 == 0 or n2 == 0:
        return 1 if u == 0 else 0
    return _u_count(n1 - 1, n2, u - n2) + _u_count(n1, n2 - 1, u)


def _exact_min_u_pvalue(u: float, n1: int, n2: int) -> float:
    """P(min(Ux, Uy) <= u) under the exact null (no ties)."""
    total = math.comb(n1 + n2, n1)
    u_floor = int(math.floor(u))
    upper_start = max(u_floor + 1, n1 * n2 - u_floor)
    count = sum(_u_count(n1, n2, v) for v in range(0, u_floor + 1))
    count += sum(_u_count(n1, n2, v) for v in range(upper_start, n1 * n2 + 1))
    return count / total


def mann_whitney_u(
    x: Sequence[float], y: Sequence[float]
) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    U is the smaller of the two pair-counting statistics (a pair counts 1
    when the x value is larger, 1/2 on a tie). For n1 + n2 <= 12 with no
    tied values the p-value is exact, from the permutation distribution of
    min(Ux, Uy). Otherwise it uses the normal approximation with tie
    correction and a 0.5 continuity correction:

        z = (|U - n1*n2/2| - 0.5) / sigma,  p = 2 * P(Z > z)

    with sigma^2 = n1*n2/12 * ((n+1) - sum(t^3 - t) / (n*(n-1))) over tie
    group sizes t in the pooled sample.
    """
    if not x or not y:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(x), len(y)
    u_x = 0.0
    for xi in x:
        for yj in y:
            if xi > yj:
                u_x += 1.0
            elif xi == yj:
                u_x += 0.5
    u_y = n1 * n2 - u_x
    assert u_x + u_y == n1 * n2
    u = min(u_x, u_y)

    pooled = sorted(list(x) + list(y))
    tie_groups = []
    i = 0
    while i < len(pooled):
        j = i
        while j < len(pooled) and pooled[j] == pooled[i]:
            j += 1
        tie_groups.append(j - i)
        i = j
    has_ties = any(t > 1 for t in tie_groups)

    if n1 + n2 <= 12 and not has_ties:
        return MannWhitneyResult(u=u, p_value=_exact_min_u_pvalue(u, n1, n2), method="exact")

    n = n1 + n2
    tie_term = sum(t**3 - t for t in tie_groups) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return MannWhitneyResult(u=u, p_value=1.0, method="normal")
    z = (abs(u - n1 * n2 / 2.0) - 0.5) / math.sqrt(var)
    p = 2.0 * normal_sf(max(z, 0.0))
    return MannWhitneyResult(u=u, p_value=min(1.0, p), method="normal")


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient, in [-1, 1]."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 observations")
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((xi - mx) ** 2 for xi in x)
    syy = sum((yi - my) ** 2 for yi in y)
    if sxx == 0 or syy == 0:
        raise ValueError("zero variance in a sample")
    sxy = sum((xi - mx) * (yi - my) for xi, yi in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


# --------------------------------------------------------------------------
# Trace reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceReport:
    steps: int
    mean_autonomy: float
    min_autonomy: float
    occupancy: dict[str, float]
    tasks: list[dict]

    def as_dict(self) -> dict:
        return {
            "steps": self.steps,
            "mean_autonomy": self.mean_autonomy,
            "min_autonomy": self.min_autonomy,
            "occupancy": dict(self.occupancy),
            "tasks": [dict(t) for t in self.tasks],
        }


def trace_report(trace: "SessionTrace") -> TraceReport:
    """Aggregate a finalized session trace into a report record."""
    if trace.summary is None:
        raise ValueError("trace is not finalized; run the session to completion")
    autonomies = [s.autonomy for s in trace.steps]
    return TraceReport(
        steps=len(trace.steps),
        mean_autonomy=sum(autonomies) / len(autonomies) if autonomies else 0.0,
        min_autonomy=min(autonomies) if autonomies else 0.0,
        occupancy=trace.occupancy.fractions(),
        tasks=[dict(t) for t in trace.summary["tasks"]],
    )


def report_from_lines(records: Sequence[dict]) -> TraceReport:
    """Build a report from parsed trace-file lines (JSON objects).

    Expects the config/step/summary line structure written by the engine;
    a missing summary line means the trace was never finalized.
    """
    steps = [r for r in records if r.get("type") == "step"]
    summaries = [r for r in records if r.get("type") == "summary"]
    if not summaries:
        raise ValueError("trace is not finalized; no summary line found")
    summary = summaries[-1]
    autonomies = [s["autonomy"] for s in steps]
    return TraceReport(
        steps=len(steps),
        mean_autonomy=sum(autonomies) / len(autonomies) if autonomies else 0.0,
        min_autonomy=min(autonomies) if autonomies else 0.0,
        occupancy=dict(summary["occupancy"]["fractions"]),
        tasks=[dict(t) for t in summary["tasks"]],
    )


def format_report(report: TraceReport) -> str:
    """Fixed-format text table (stable across releases, used as a golden)."""
    lines = [
        "session report",
        "--------------",
        f"steps          {report.steps:>8d}",
        f"mean autonomy  {report.mean_autonomy:>8.4f}",
        f"min autonomy   {report.min_autonomy:>8.4f}",
    ]
    for name in ("DEMONSTRATE", "OBSERVE", "HELP"):
        lines.append(f"{name.lower():<14s} {report.occupancy.get(name, 0.0):>8.4f}")
    for task in report.tasks:
        status = "halted" if task["halted"] else "completed"
        lines.append(
            f"task {task['index']:<2d} {task['activity']:<24s} {task['steps']:>4d} steps  {status}"
        )
    return "\n".join(lines)
