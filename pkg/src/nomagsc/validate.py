"""Analytic-vs-Monte-Carlo oracle grid.

Runs every analytic evaluator against its simulation estimate over a
reference grid and checks agreement within three standard errors.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from . import capacity, montecarlo
from .capacity import PowerSplit, QosProfile, SnrPoint
from .distributions import GscSpec, UserPairSpec
from .montecarlo import SimPlan

DEFAULT_GRID = {
    "snr_db": (0.0, 10.0, 20.0, 30.0, 40.0),
    "theta": (0.5, 1.0),
    "n": (1, 2, 3, 4),
    "a_s": (0.1, 0.24),
}

CSV_COLUMNS = (
    "rho_db",
    "theta",
    "n",
    "a_s",
    "quantity",
    "analytic",
    "estimate",
    "std_error",
    "z",
    "status",
)


@dataclass(frozen=True)
class ValidationRow:
    rho_db: float
    theta: float
    n: int
    a_s: float
    quantity: str
    analytic: float
    estimate: float
    std_error: float

    @property
    def z(self) -> float:
        return abs(self.analytic - self.estimate) / self.std_error

    @property
    def passed(self) -> bool:
        return self.z <= 3.0


def _pair(n: int) -> UserPairSpec:
    return UserPairSpec(GscSpec(4, n, 1.0), GscSpec(4, n, 0.1))


def run_validation(plan: SimPlan, grid: dict | None = None) -> list[ValidationRow]:
    if grid is None:
        grid = DEFAULT_GRID
    rows = []
    for rho_db in grid["snr_db"]:
        snr = SnrPoint.from_db(rho_db)
        for theta in grid["theta"]:
            qos = QosProfile(theta)
            for n in grid["n"]:
                pair = _pair(n)
                for a_s in grid["a_s"]:
                    split = PowerSplit(a_s)
                    rep = capacity.evaluate_noma(pair, split, qos, snr)
                    oma = capacity.evaluate_oma(pair, qos, snr)
                    erg = capacity.ergodic_rate(pair, split, snr)
                    mc_s = montecarlo.estimate_ec_strong(pair, split, qos, snr, plan)
                    mc_w = montecarlo.estimate_ec_weak(pair, split, qos, snr, plan)
                    mc_os = montecarlo.estimate_ec_oma(pair.strong, qos, snr, plan)
                    mc_ow = montecarlo.estimate_ec_oma(pair.weak, qos, snr, plan)
                    mc_es, mc_ew = montecarlo.estimate_ergodic(pair, split, snr, plan)
                    checks = [
                        ("ec_strong", rep.e_strong, mc_s),
                        ("ec_weak", rep.e_weak, mc_w),
                        ("ec_oma_strong", oma.e_strong, mc_os),
                        ("ec_oma_weak", oma.e_weak, mc_ow),
                        ("ergodic_strong", erg.e_strong, mc_es),
                        ("ergodic_weak", erg.e_weak, mc_ew),
                    ]
                    for quantity, analytic, est in checks:
                        rows.append(
                            ValidationRow(
                                rho_db, theta, n, a_s, quantity,
                                analytic, est.value, est.std_error,
                            )
                        )
    return rows


def write_csv(rows: list[ValidationRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    f"{r.rho_db:.12g}",
                    f"{r.theta:.12g}",
                    r.n,
                    f"{r.a_s:.12g}",
                    r.quantity,
                    f"{r.analytic:.12g}",
                    f"{r.estimate:.12g}",
                    f"{r.std_error:.12g}",
                    f"{r.z:.12g}",
                    "pass" if r.passed else "FAIL",
                ]
            )
