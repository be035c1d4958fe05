"""One-dimensional power-allocation search.

Scans a grid of strong-user power fractions and keeps the point that
maximizes the sum objective (sum EC, or sum ergodic rate for the
delay-unconstrained comparison).  Ties break toward the larger a_s: the
strong user carries most of the sum EC, so the boundary of the feasible
range is the expected optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import capacity, montecarlo
from .capacity import EcReport, PowerSplit, QosProfile, SnrPoint
from .distributions import UserPairSpec


@dataclass(frozen=True)
class SearchSpec:
    a_min: float = 0.01
    a_max: float = 0.24
    step: float = 0.01
    objective: str = "sum_ec"

    def __post_init__(self):
        if not 0 < self.a_min < self.a_max < 0.5:
            raise ValueError(
                f"need 0 < a_min < a_max < 0.5, got [{self.a_min}, {self.a_max}]"
            )
        if not self.step > 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        if self.objective not in ("sum_ec", "sum_rate"):
            raise ValueError(f"unknown objective {self.objective!r}")

    def grid(self) -> list[float]:
        values = []
        k = 0
        while True:
            a = self.a_min + k * self.step
            if a > self.a_max + 1e-12:
                break
            values.append(min(a, self.a_max))
            k += 1
        return values


@dataclass(frozen=True)
class OptimizeResult:
    a_star: float
    report: EcReport
    grid: list[tuple[float, float]] = field(default_factory=list)  # (a_s, objective)


def optimize_power(
    pair: UserPairSpec,
    qos: QosProfile,
    snr: SnrPoint,
    search: SearchSpec = SearchSpec(),
    use_montecarlo: bool = False,
    plan: montecarlo.SimPlan | None = None,
) -> OptimizeResult:
    """Grid search over a_s maximizing the requested sum objective."""
    if use_montecarlo and plan is None:
        plan = montecarlo.SimPlan()
    best = None
    grid_values: list[tuple[float, float]] = []
    for a in search.grid():
        split = PowerSplit(a)
        try:
            report = _evaluate(pair, split, qos, snr, search.objective, use_montecarlo, plan)
        except Exception as exc:
            raise RuntimeError(f"objective evaluation failed at a_s={a}") from exc
        objective = report.e_sum
        grid_values.append((a, objective))
        if best is None or objective >= best[1]:
            best = (a, objective, report)
    return OptimizeResult(best[0], best[2], grid_values)


def _evaluate(pair, split, qos, snr, objective, use_montecarlo, plan) -> EcReport:
    if objective == "sum_rate":
        if use_montecarlo:
            es, ew = montecarlo.estimate_ergodic(pair, split, snr, plan)
            return EcReport(es.value, ew.value, method="ergodic_bound")
        return capacity.ergodic_rate(pair, split, snr)
    if use_montecarlo:
        es = montecarlo.estimate_ec_strong(pair, split, qos, snr, plan)
        ew = montecarlo.estimate_ec_weak(pair, split, qos, snr, plan)
        return EcReport(es.value, ew.value, method="montecarlo")
    return capacity.evaluate_noma(pair, split, qos, snr)
