"""Floating-point spot checks of chart atlases and lifted maps.

All structural identities are established exactly elsewhere; this module
samples random interior points and evaluates the monomial maps in log
space to confirm the emitted matrices behave numerically, which guards
the serialization path and catches transposition-style mistakes.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactla as la
from .manifolds import ChartAtlas


@dataclass(frozen=True)
class SamplePlan:
    count: int = 100
    low: float = 0.1
    high: float = 10.0
    seed: int = 0
    tolerance: float = 1e-9

    def __post_init__(self):
        assert 0 < self.low < self.high
        assert self.tolerance > 0
        assert self.count > 0


@dataclass
class CheckReport:
    passed: bool
    max_rel_error: float
    samples: int
    failures: List[str] = field(default_factory=list)


def _to_float(m) -> np.ndarray:
    return np.array([[float(Fraction(x)) for x in row] for row in m],
                    dtype=float)


def _log_samples(rng, count: int, dim: int, plan: SamplePlan) -> np.ndarray:
    return rng.uniform(np.log(plan.low), np.log(plan.high), (count, dim))


def _rel_err(a: np.ndarray, b: np.ndarray) -> float:
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / scale))


def verify_transitions(atlas: ChartAtlas,
                       plan: SamplePlan = SamplePlan()) -> CheckReport:
    """Sample each chart overlap: transition round trips must return the
    sampled point and the two blow-down maps must agree across the
    transition."""
    rng = np.random.default_rng(plan.seed)
    worst = 0.0
    failures = []
    total = 0
    nus = {e: _to_float(c.nu) for e, c in atlas.charts.items()}
    for (e1, e2), t12 in atlas.transitions.items():
        m12 = _to_float(t12)
        m21 = _to_float(atlas.transitions[(e2, e1)])
        logt = _log_samples(rng, plan.count, atlas.n, plan)
        total += plan.count
        # Round trip in chart coordinates.
        rt = logt @ m12 @ m21
        err = _rel_err(np.exp(rt), np.exp(logt))
        worst = max(worst, err)
        if err > plan.tolerance:
            failures.append(f"round trip {e1}->{e2}: error {err:.3e}")
        # The two monomial blow-downs agree on the overlap.
        b1 = np.exp(logt @ nus[e1])
        b2 = np.exp(logt @ m12 @ nus[e2])
        err = _rel_err(b1, b2)
        worst = max(worst, err)
        if err > plan.tolerance:
            failures.append(f"blow-down mismatch {e1}->{e2}: "
                            f"error {err:.3e}")
    return CheckReport(not failures, worst, total, failures)


def verify_lift(delta: Sequence[Sequence[int]],
                nu: Sequence[Sequence],
                mu: Sequence[Sequence[int]],
                plan: SamplePlan = SamplePlan(),
                coefficients: Optional[Sequence[float]] = None
                ) -> CheckReport:
    """Check numerically that the lift x -> a^(nu^-1) x^mu followed by the
    chart map t -> t^nu reproduces x -> a x^delta."""
    assert la.mat_mul(la.mat(mu), la.mat(
        tuple(tuple(Fraction(x) for x in row) for row in nu))) == \
        la.mat(tuple(tuple(Fraction(x) for x in row) for row in delta)), \
        "delta = mu @ nu must hold exactly"
    d = _to_float(delta)
    nv = _to_float(nu)
    m = _to_float(mu)
    k, n = d.shape
    a = np.ones(n) if coefficients is None else np.asarray(
        [float(c) for c in coefficients])
    assert np.all(a > 0)
    rng = np.random.default_rng(plan.seed)
    logx = _log_samples(rng, plan.count, k, plan)
    loga = np.log(a)
    log_lift = loga @ np.linalg.inv(nv) + logx @ m
    via_chart = np.exp(log_lift @ nv)
    direct = np.exp(loga + logx @ d)
    err = _rel_err(via_chart, direct)
    failures = [] if err <= plan.tolerance else \
        [f"lift mismatch: error {err:.3e}"]
    return CheckReport(not failures, err, plan.count, failures)
