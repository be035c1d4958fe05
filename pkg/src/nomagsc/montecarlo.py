"""Monte Carlo oracle for the analytic effective-capacity evaluators.

Samples Rayleigh branch powers, applies GSC selection/combining and the
NOMA power-domain SINR model, and turns per-sample functionals into
estimates with standard errors.  Batches draw from counter-based Philox
streams keyed by (seed, batch index), so results are reproducible no
matter how batches are scheduled; accumulators are merged in fixed batch
order for bit-identical repeats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .capacity import PowerSplit, QosProfile, SnrPoint
from .distributions import GscSpec, UserPairSpec


@dataclass(frozen=True)
class SimPlan:
    samples: int = 10**6
    seed: int = 0
    batch: int = 1 << 18

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.batch < 1:
            raise ValueError(f"batch must be >= 1, got {self.batch}")


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    samples_used: int


def _batch_sizes(plan: SimPlan) -> Iterator[tuple[int, int]]:
    done = 0
    index = 0
    while done < plan.samples:
        size = min(plan.batch, plan.samples - done)
        yield index, size
        done += size
        index += 1


def _batch_rng(plan: SimPlan, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[plan.seed, index]))


def _draw_gsc(rng: np.random.Generator, spec: GscSpec, size: int) -> np.ndarray:
    """Combined powers: sum of the n largest of N exponential branch powers."""
    N, n = spec.antennas, spec.combined
    branches = rng.exponential(spec.omega, size=(size, N))
    if n == N:
        return branches.sum(axis=1)
    if n == 1:
        return branches.max(axis=1)
    # partial selection of the n largest per row; no full sort needed
    return np.partition(branches, N - n, axis=1)[:, N - n :].sum(axis=1)


def sample_gsc_power(spec: GscSpec, plan: SimPlan) -> Iterator[np.ndarray]:
    """Stream of combined-power sample batches (deterministic given seed)."""
    for index, size in _batch_sizes(plan):
        yield _draw_gsc(_batch_rng(plan, index), spec, size)


class _MeanAccumulator:
    """Streaming sum / sum-of-squares, merged in fixed order."""

    def __init__(self):
        self.s1 = 0.0
        self.s2 = 0.0
        self.count = 0

    def add(self, values: np.ndarray):
        self.s1 += float(values.sum())
        self.s2 += float(np.square(values).sum())
        self.count += values.size

    @property
    def mean(self) -> float:
        return self.s1 / self.count

    @property
    def se_mean(self) -> float:
        if self.count < 2:
            return math.inf
        var = max(self.s2 - self.s1 * self.s1 / self.count, 0.0) / (self.count - 1)
        return math.sqrt(var / self.count)


def _accumulate(plan: SimPlan, per_batch) -> _MeanAccumulator:
    acc = _MeanAccumulator()
    for index, size in _batch_sizes(plan):
        acc.add(per_batch(_batch_rng(plan, index), size))
    return acc


def _ec_estimate(acc: _MeanAccumulator, nu: float) -> Estimate:
    """-(1/nu)log2(mean), with the delta-method standard error."""
    value = -math.log2(acc.mean) / nu
    std_error = acc.se_mean / (nu * math.log(2) * acc.mean)
    return Estimate(value, std_error, acc.count)


def estimate_ec_strong(
    pair: UserPairSpec,
    split: PowerSplit,
    qos: QosProfile,
    snr: SnrPoint,
    plan: SimPlan,
) -> Estimate:
    """Monte Carlo EC of the strong user's symbol."""
    nu = qos.nu
    a = split.a_s * snr.rho

    def per_batch(rng, size):
        g = _draw_gsc(rng, pair.strong, size)
        return (1.0 + a * g) ** -nu

    return _ec_estimate(_accumulate(plan, per_batch), nu)


def _draw_g_min(rng, pair: UserPairSpec, size: int) -> np.ndarray:
    # strong then weak from the same stream; channels are independent
    gs = _draw_gsc(rng, pair.strong, size)
    gw = _draw_gsc(rng, pair.weak, size)
    return np.minimum(gs, gw)


def estimate_ec_weak(
    pair: UserPairSpec,
    split: PowerSplit,
    qos: QosProfile,
    snr: SnrPoint,
    plan: SimPlan,
) -> Estimate:
    """Monte Carlo EC of the weak user's symbol (SINR through g_min)."""
    nu, rho = qos.nu, snr.rho
    a_s, a_w = split.a_s, split.a_w

    def per_batch(rng, size):
        g = _draw_g_min(rng, pair, size)
        sinr = a_w * rho * g / (a_s * rho * g + 1.0)
        return (1.0 + sinr) ** -nu

    return _ec_estimate(_accumulate(plan, per_batch), nu)


def estimate_ergodic(
    pair: UserPairSpec, split: PowerSplit, snr: SnrPoint, plan: SimPlan
) -> tuple[Estimate, Estimate]:
    """Monte Carlo average achievable rates (strong, weak)."""
    rho = snr.rho
    a_s, a_w = split.a_s, split.a_w
    acc_s = _MeanAccumulator()
    acc_w = _MeanAccumulator()
    for index, size in _batch_sizes(plan):
        rng = _batch_rng(plan, index)
        gs = _draw_gsc(rng, pair.strong, size)
        gw = _draw_gsc(rng, pair.weak, size)
        gmin = np.minimum(gs, gw)
        acc_s.add(np.log2(1.0 + a_s * rho * gs))
        acc_w.add(np.log2(1.0 + a_w * rho * gmin / (a_s * rho * gmin + 1.0)))
    return (
        Estimate(acc_s.mean, acc_s.se_mean, acc_s.count),
        Estimate(acc_w.mean, acc_w.se_mean, acc_w.count),
    )


def estimate_ec_oma(
    spec: GscSpec, qos: QosProfile, snr: SnrPoint, plan: SimPlan
) -> Estimate:
    """Monte Carlo EC of one OMA user (full power, half rate)."""
    nu, rho = qos.nu, snr.rho

    def per_batch(rng, size):
        g = _draw_gsc(rng, spec, size)
        return (1.0 + rho * g) ** (-nu / 2.0)

    return _ec_estimate(_accumulate(plan, per_batch), nu)
