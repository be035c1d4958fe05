"""Effective-capacity toolkit for two-user downlink NOMA with GSC receivers."""

from .capacity import (
    EcReport,
    PowerSplit,
    QosProfile,
    SnrPoint,
    ValidityError,
    ec_high_snr,
    ec_low_snr,
    ec_oma,
    ec_strong,
    ec_strong_series,
    ec_weak_general,
    ec_weak_mrc,
    ec_weak_sc,
    ergodic_rate,
    ergodic_rate_oma,
    evaluate_noma,
    evaluate_oma,
)
from .distributions import GscSpec, UserPairSpec
from .montecarlo import Estimate, SimPlan
from .numerics import (
    DomainError,
    IntegrationError,
    QuadratureResult,
    QuadratureSettings,
    alternating_sum,
    integrate_semi_infinite,
    upper_incomplete_gamma,
)
from .optimizer import OptimizeResult, SearchSpec, optimize_power

__version__ = "0.1.0"
