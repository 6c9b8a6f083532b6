"""Monte-Carlo ratio experiments and the quantified property suite.

Per-trial randomness comes from numpy SeedSequence streams keyed by
(master seed, suite tag, trial index), so any single trial reproduces in
isolation and parallel or serial execution order cannot change results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .analysis import AnalysisError, ThreeIntervalError, compute_thresholds
from .core import Instance, check_dual_shares, sample_ranks
from .gains import GainSpec, half_exp, simple_exp
from .generators import random_instance
from .offline import solve_opt
from .ranking import assign_duals, run_ranking


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class DegenerateInstanceError(ValueError):
    """The offline optimum is zero, so the ratio is undefined."""


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class ExperimentConfig:
    """One ratio experiment: instance, gain spec, trial count, master seed."""

    instance: Instance
    spec: GainSpec
    trials: int
    seed: int
    label: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class RatioReport:
    """Per-trial values and the measured mean ratio of one experiment."""

    alg_values: tuple[float, ...]
    opt_value: float
    mean_ratio: float
    std_error: float
    config_echo: dict
    timestamp: str

    def ratios(self) -> tuple[float, ...]:
        return tuple(a / self.opt_value for a in self.alg_values)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config_echo,
            "opt_value": self.opt_value,
            "mean_ratio": self.mean_ratio,
            "std_error": self.std_error,
            "trials": len(self.alg_values),
            "mean_alg": math.fsum(self.alg_values) / len(self.alg_values),
            "timestamp": self.timestamp,
        }

    def to_text(self) -> str:
        d = self.to_json_dict()
        lines = [
            f"trials       {d['trials']}",
            f"opt value    {d['opt_value']:.6f}",
            f"mean alg     {d['mean_alg']:.6f}",
            f"mean ratio   {d['mean_ratio']:.6f}",
            f"std error    {d['std_error']:.6f}",
            f"timestamp    {d['timestamp']}",
        ]
        return "\n".join(lines) + "\n"


def run_ratio_experiment(config: ExperimentConfig) -> RatioReport:
    """Mean ALG/OPT over sampled rank assignments; OPT computed once."""
    opt = solve_opt(config.instance)
    if opt.value == 0.0:
        raise DegenerateInstanceError("optimal value is zero; ratio undefined")
    alg = []
    for t in range(config.trials):
        ranks = sample_ranks(config.instance, (config.seed, t))
        result, _ = run_ranking(config.instance, config.spec, ranks,
                                collect_offers=False)
        alg.append(result.total_weight)
    ratios = [a / opt.value for a in alg]
    mean_ratio = math.fsum(ratios) / len(ratios)
    if len(ratios) > 1:
        var = math.fsum((r - mean_ratio) ** 2 for r in ratios) / (len(ratios) - 1)
        std_error = math.sqrt(var / len(ratios))
    else:
        std_error = 0.0
    echo = {"label": config.label, "trials": config.trials, "seed": config.seed,
            "spec": config.spec.to_json_dict()}
    return RatioReport(alg_values=tuple(alg), opt_value=opt.value,
                       mean_ratio=mean_ratio, std_error=std_error,
                       config_echo=echo, timestamp=_timestamp())


# -- property suite --------------------------------------------------------


@dataclass(frozen=True)
class PropertySuiteConfig:
    """Trial counts for the quantified engine/analysis property checks."""

    seed: int = 0
    spec: GainSpec = field(default_factory=half_exp)
    monotonicity_trials: int = 10_000
    arrival_trials: int = 10_000
    accounting_trials: int = 100_000
    structure_probes: int = 1_000

    def __post_init__(self):
        for name in ("monotonicity_trials", "arrival_trials",
                     "accounting_trials", "structure_probes"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")

    def scaled(self, scale: float) -> "PropertySuiteConfig":
        if scale <= 0:
            raise ConfigError("scale must be positive")
        return PropertySuiteConfig(
            seed=self.seed, spec=self.spec,
            monotonicity_trials=max(1, int(self.monotonicity_trials * scale)),
            arrival_trials=max(1, int(self.arrival_trials * scale)),
            accounting_trials=max(1, int(self.accounting_trials * scale)),
            structure_probes=max(1, int(self.structure_probes * scale)))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    violations: int
    first_violation: str | None

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class PropertyReport:
    suites: tuple[SuiteResult, ...]
    seed: int
    timestamp: str

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "suites": [{"name": s.name, "trials": s.trials,
                        "violations": s.violations,
                        "first_violation": s.first_violation}
                       for s in self.suites],
            "timestamp": self.timestamp,
        }

    def to_text(self) -> str:
        lines = []
        for s in self.suites:
            status = "pass" if s.passed else "FAIL"
            lines.append(f"{s.name:<22} {s.trials:>7} trials  {status}")
            if s.first_violation:
                lines.append(f"    first violation: {s.first_violation}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        lines.append(f"timestamp: {self.timestamp}")
        return "\n".join(lines) + "\n"


def _trial_rng(seed: int, tag: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((seed, tag, trial))


def _uniform_ranks(instance: Instance, rng: np.random.Generator):
    from .core import RankAssignment

    ids = instance.all_ids()
    return RankAssignment({vid: float(r) for vid, r in zip(ids, rng.random(len(ids)))})


def check_monotonicity_trial(seed: int, trial: int, spec: GainSpec,
                             engine=run_ranking) -> str | None:
    """One raise-the-offline-rank probe of the stays-unmatched property.

    Odd trials switch to unit weights with the saturating simple-exp curve,
    the regime where exact offer ties occur, so tie-break regressions are
    caught as well. Returns a reproduction hint on violation, else None.
    """
    rng = _trial_rng(seed, 101, trial)
    if trial % 2 == 0:
        trial_spec, weighted = spec, True
    else:
        trial_spec, weighted = simple_exp(), False
    instance = random_instance(rng, weighted=weighted)
    ranks = _uniform_ranks(instance, rng)
    _, trace = engine(instance, trial_spec, ranks, collect_offers=False)
    u = instance.online_ids[int(rng.integers(len(instance.online_ids)))]
    y_u = ranks.ranks[u]
    free = [v for v in instance.offline_ids if trace.match_time[v] >= y_u]
    if not free:
        return None
    v = free[int(rng.integers(len(free)))]
    y_v = ranks.ranks[v]
    raised = y_v + (1.0 - y_v) * float(rng.random())
    _, trace2 = engine(instance, trial_spec, ranks.override({v: raised}),
                       collect_offers=False)
    if trace2.match_time[v] < y_u:
        return (f"trial={trial}: raising rank of {v} from {y_v:.6f} to "
                f"{raised:.6f} matched it before {u} arrives (seed={seed})")
    return None


def check_arrival_trial(seed: int, trial: int, spec: GainSpec,
                        engine=run_ranking) -> str | None:
    """One lower-the-arrival-time probe of the no-delay property.

    Moving one online vertex u earlier never delays the match of an offline
    vertex that was originally matched strictly before u's original arrival
    time. Vertices matched at or after that moment carry no such guarantee:
    u's own late match is withdrawn (u may now prefer a neighbor that used
    to be gone by the time it arrived), and that substitution can cascade
    through later arrivals. Random cascades delaying a protected vertex
    would be caught here.
    """
    rng = _trial_rng(seed, 202, trial)
    instance = random_instance(rng, weighted=True)
    ranks = _uniform_ranks(instance, rng)
    _, trace = engine(instance, spec, ranks, collect_offers=False)
    u = instance.online_ids[int(rng.integers(len(instance.online_ids)))]
    original = ranks.ranks[u]
    lowered = original * float(rng.random())
    _, trace2 = engine(instance, spec, ranks.override({u: lowered}),
                       collect_offers=False)
    for v in instance.offline_ids:
        if trace.match_time[v] < original and \
                trace2.match_time[v] > trace.match_time[v]:
            return (f"trial={trial}: lowering arrival of {u} from "
                    f"{original:.6f} to {lowered:.6f} delayed {v}'s match "
                    f"(seed={seed})")
    return None


def check_accounting_trial(seed: int, trial: int, spec: GainSpec,
                           engine=run_ranking) -> str | None:
    """One exact-accounting probe: the dual shares must recompose ALG."""
    rng = _trial_rng(seed, 303, trial)
    instance = random_instance(rng, weighted=True)
    ranks = _uniform_ranks(instance, rng)
    result, _ = engine(instance, spec, ranks, collect_offers=False)
    shares = assign_duals(instance, result, spec, ranks)
    try:
        check_dual_shares(instance, result, shares, tol=1e-12)
    except AssertionError as exc:
        return f"trial={trial}: {exc} (seed={seed})"
    return None


def check_structure_probe(seed: int, trial: int, spec: GainSpec) -> str | None:
    """One threshold-structure probe of a random edge.

    compute_thresholds itself enforces the three-interval sweep pattern,
    the beta <= theta ordering, beta's monotonicity and theta's absorbing
    saturation, so any structural break surfaces as an exception here.
    """
    rng = _trial_rng(seed, 404, trial)
    instance = random_instance(rng, weighted=True)
    ranks = _uniform_ranks(instance, rng)
    edges = [(u, v) for u in instance.online_ids
             for v in instance.neighbors[u]]
    u, v = edges[int(rng.integers(len(edges)))]
    grid = [(i + 0.5) / 12 for i in range(12)]
    try:
        compute_thresholds(instance, spec, ranks, u, v, grid,
                           refine_tol=1e-7, sweep_points=256)
    except (ThreeIntervalError, AnalysisError) as exc:
        return f"trial={trial}: {exc} (seed={seed})"
    return None


def _run_suite(name: str, trials: int, check) -> SuiteResult:
    violations = 0
    first = None
    for t in range(trials):
        hint = check(t)
        if hint is not None:
            violations += 1
            if first is None:
                first = hint
    return SuiteResult(name=name, trials=trials, violations=violations,
                       first_violation=first)


def run_property_suite(config: PropertySuiteConfig,
                       engine=run_ranking) -> PropertyReport:
    """Run all quantified property suites; engine is injectable for
    mutation tests (a deliberately broken engine must be caught)."""
    seed, spec = config.seed, config.spec
    suites = (
        _run_suite("monotonicity", config.monotonicity_trials,
                   lambda t: check_monotonicity_trial(seed, t, spec, engine)),
        _run_suite("arrival-benignity", config.arrival_trials,
                   lambda t: check_arrival_trial(seed, t, spec, engine)),
        _run_suite("dual-accounting", config.accounting_trials,
                   lambda t: check_accounting_trial(seed, t, spec, engine)),
        _run_suite("threshold-structure", config.structure_probes,
                   lambda t: check_structure_probe(seed, t, spec)),
    )
    return PropertyReport(suites=suites, seed=seed, timestamp=_timestamp())
