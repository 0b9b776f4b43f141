"""End-to-end comparison harness: data generation, training, expressibility.

A single synthetic regression dataset is produced by a randomly drawn
teacher circuit; every selection method is then trained against that shared
dataset over many seeded trials.  Expressibility of a circuit is the
Hellinger distance between its sampled output-state fidelity distribution
and the fidelity law of Haar-random states, P(F) = (d-1)(1-F)^(d-2).

All per-trial randomness is derived from a master seed as
sha256("{master_seed}:{method}:{trial_index}"), so a comparison run is
bit-reproducible end to end.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import betainc

from .optimizer import SpsaConfig, TrialRecord, train
from .pauli import PauliString, pauli_strings
from .selection import (
    BASELINE_METHODS,
    SelectionProblem,
    SelectionResult,
    build_pool,
    evaluate_selection,
    select_baseline,
    solve_exact,
    solve_genetic,
    solve_greedy,
)
from .simulator import CircuitModel, run_model_batch
from .simulator import _apply_rotation_amps  # shared low-level kernel

__all__ = [
    "DatasetSpec",
    "ExpressibilityConfig",
    "GeneticConfig",
    "Teacher",
    "MethodSummary",
    "ExperimentReport",
    "TTestResult",
    "derive_seed",
    "generate_dataset",
    "haar_bin_probs",
    "hellinger_distance",
    "expressibility_hellinger",
    "select_for_method",
    "run_trial",
    "run_comparison",
    "two_sample_t_test",
    "student_t_pvalue",
    "SELECTION_METHODS",
]

SELECTION_METHODS = ("exact", "greedy", "genetic") + BASELINE_METHODS


@dataclass(frozen=True)
class DatasetSpec:
    """Teacher-circuit and sampling parameters for the synthetic dataset."""

    n: int = 5
    depth: int = 5
    theta_range: tuple[float, float] = (-math.pi, math.pi)
    input_range: tuple[float, float] = (0.0, 2.0 * math.pi)
    samples: int = 100
    teacher_seed: int = 0

    def __post_init__(self):
        if self.theta_range[0] >= self.theta_range[1]:
            raise ValueError(f"theta_range {self.theta_range} is not well-ordered")
        if self.input_range[0] >= self.input_range[1]:
            raise ValueError(f"input_range {self.input_range} is not well-ordered")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.n < 1 or self.depth < 1:
            raise ValueError("n and depth must be positive")

    @property
    def observable(self) -> PauliString:
        return PauliString.from_label("Z" + "I" * (self.n - 1))


@dataclass(frozen=True)
class ExpressibilityConfig:
    """Sampling parameters for the fidelity-histogram expressibility estimate."""

    fidelity_samples: int = 500
    bins: int = 50
    param_range: tuple[float, float] = (-math.pi, math.pi)
    seed: int = 0

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.fidelity_samples < self.bins:
            raise ValueError(
                f"fidelity_samples ({self.fidelity_samples}) must be >= bins "
                f"({self.bins})"
            )


@dataclass(frozen=True)
class GeneticConfig:
    population: int = 64
    generations: int = 120
    mutation_rate: float = 0.3


class Teacher(NamedTuple):
    model: CircuitModel
    theta: np.ndarray


def generate_dataset(spec: DatasetSpec) -> tuple[list[tuple[float, float]], Teacher]:
    """Draw a random teacher circuit and its regression dataset.

    The teacher uses ``spec.depth`` distinct non-identity strings as
    generators, parameters uniform over theta_range and inputs uniform over
    input_range; labels are the teacher's observable expectations, hence
    always in [-1, 1].  Deterministic per teacher_seed.
    """
    rng = np.random.default_rng(spec.teacher_seed)
    everyone = list(pauli_strings(spec.n))
    idx = rng.choice(len(everyone), size=spec.depth, replace=False)
    generators = tuple(everyone[i] for i in idx)
    model = CircuitModel(spec.n, generators, spec.observable)
    theta = rng.uniform(*spec.theta_range, size=spec.depth)
    xs = rng.uniform(*spec.input_range, size=spec.samples)
    ys = run_model_batch(model, theta, xs)
    dataset = list(zip(xs.tolist(), ys.tolist()))
    return dataset, Teacher(model, theta)


def haar_bin_probs(d: int, bins: int) -> np.ndarray:
    """Exact masses of the Haar fidelity law over equal-width bins on [0, 1].

    P(F) = (d-1)(1-F)^(d-2) integrates to (1-lo)^(d-1) - (1-hi)^(d-1) on a
    bin [lo, hi]; the masses sum to 1 exactly.
    """
    if d < 2:
        raise ValueError(f"Hilbert dimension must be >= 2, got {d}")
    edges = np.linspace(0.0, 1.0, bins + 1)
    upper = (1.0 - edges) ** (d - 1)
    return upper[:-1] - upper[1:]


def hellinger_distance(p: np.ndarray, q: np.ndarray) -> float:
    """H(p, q) = sqrt(1 - sum_i sqrt(p_i q_i)), bounded in [0, 1]."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions must have the same shape")
    bc = float(np.sum(np.sqrt(p * q)))
    return math.sqrt(max(0.0, 1.0 - bc))


def expressibility_hellinger(
    model: CircuitModel, config: ExpressibilityConfig
) -> float:
    """Hellinger distance of sampled state fidelities to the Haar law.

    Draws ``fidelity_samples`` independent parameter pairs uniform over
    param_range per coordinate, with the input-encoding angle fixed at 0,
    and histograms F = |<psi(theta)|psi(phi)>|^2 into equal bins on [0, 1].
    """
    rng = np.random.default_rng(config.seed)
    s = config.fidelity_samples
    thetas = rng.uniform(*config.param_range, size=(2 * s, model.depth))
    size = 1 << model.n
    amps = np.zeros((2 * s, size), dtype=complex)
    amps[:, 0] = 1.0  # encoding angle 0 leaves |0..0> unchanged
    for l, g in enumerate(model.generators):
        amps = _apply_rotation_amps(amps, model.n, g, thetas[:, l])
    overlaps = np.sum(np.conj(amps[:s]) * amps[s:], axis=1)
    fidelities = np.abs(overlaps) ** 2
    counts, _ = np.histogram(fidelities, bins=config.bins, range=(0.0, 1.0))
    p = counts / float(s)
    q = haar_bin_probs(size, config.bins)
    return hellinger_distance(p, q)


def derive_seed(master_seed: int, method: str, trial_index: int) -> int:
    """Stable per-trial seed: sha256 of 'master:method:trial', first 8 bytes."""
    digest = hashlib.sha256(
        f"{master_seed}:{method}:{trial_index}".encode()
    ).digest()
    return int.from_bytes(digest[:8], "big")


def select_for_method(
    method: str,
    observable: PauliString,
    budget: int,
    seed: int,
    genetic: GeneticConfig = GeneticConfig(),
    pool_subsample: int | None = None,
) -> SelectionResult:
    """Run the named selection method and return its chosen generators.

    Pool-based methods see the candidate pool in a seed-derived random order.
    The solvers are deterministic given candidate order, so each trial is
    reproducible, while different seeds pick different (equally optimal)
    generator sets; selecting with several seeds therefore varies the chosen
    circuits the way repeated seeded selection runs do.
    """
    if method in BASELINE_METHODS:
        return select_baseline(method, observable.n, observable, budget, seed)
    if method not in ("exact", "greedy", "genetic"):
        raise ValueError(f"unknown selection method {method!r}")
    pool = build_pool(observable, subsample_size=pool_subsample, seed=seed)
    order = np.random.default_rng(seed).permutation(len(pool))
    pool = [pool[i] for i in order]
    problem = SelectionProblem.build(observable, pool, budget)
    if method == "exact":
        return solve_exact(problem)
    if method == "greedy":
        return solve_greedy(problem)
    return solve_genetic(
        problem,
        population=genetic.population,
        generations=genetic.generations,
        mutation_rate=genetic.mutation_rate,
        seed=seed,
    )


def run_trial(
    method: str,
    trial_index: int,
    master_seed: int,
    dataset: Sequence[tuple[float, float]],
    spec: DatasetSpec,
    spsa_config: SpsaConfig,
    genetic: GeneticConfig = GeneticConfig(),
) -> TrialRecord:
    """Select generators and train one circuit for one (method, trial) cell."""
    seed = derive_seed(master_seed, method, trial_index)
    selection = select_for_method(
        method, spec.observable, spec.depth, seed, genetic=genetic
    )
    model = CircuitModel(spec.n, selection.chosen, spec.observable)
    config = replace(spsa_config, seed=seed)
    return train(model, dataset, config, method=method)


@dataclass
class MethodSummary:
    """Aggregated statistics for one selection method across trials."""

    method: str
    records: list[TrialRecord]
    observable: PauliString
    commute_obs_mean: float = field(init=False)
    commute_obs_std: float = field(init=False)
    commute_pairs_mean: float = field(init=False)
    commute_pairs_std: float = field(init=False)
    trace_mean: np.ndarray = field(init=False)
    trace_std: np.ndarray = field(init=False)

    def __post_init__(self):
        if not self.records:
            raise ValueError("method summary needs at least one trial record")
        metrics = [
            evaluate_selection(rec.chosen, self.observable) for rec in self.records
        ]
        obs_counts = np.array([m.n_commute_obs for m in metrics], dtype=float)
        pair_counts = np.array([m.n_commute_pairs for m in metrics], dtype=float)
        self.commute_obs_mean = float(obs_counts.mean())
        self.commute_obs_std = _sample_std(obs_counts)
        self.commute_pairs_mean = float(pair_counts.mean())
        self.commute_pairs_std = _sample_std(pair_counts)
        traces = np.stack([rec.normalized_trace for rec in self.records])
        self.trace_mean = traces.mean(axis=0)
        self.trace_std = (
            traces.std(axis=0, ddof=1)
            if len(self.records) > 1
            else np.zeros(traces.shape[1])
        )


def _sample_std(values: np.ndarray) -> float:
    return float(values.std(ddof=1)) if values.size > 1 else 0.0


class TTestResult(NamedTuple):
    statistic: float
    pvalue: float


def two_sample_t_test(sample_a, sample_b) -> TTestResult:
    """Two-sided pooled-variance Student t-test.

    With zero pooled variance the p-value degenerates to 1 for equal means
    and 0 otherwise.  The p-value is computed through the regularized
    incomplete beta function I_{nu/(nu+t^2)}(nu/2, 1/2).
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("both samples need at least 2 elements")
    nu = a.size + b.size - 2
    pooled = (
        np.sum((a - a.mean()) ** 2) + np.sum((b - b.mean()) ** 2)
    ) / nu
    diff = float(a.mean() - b.mean())
    if pooled == 0.0:
        if diff == 0.0:
            return TTestResult(0.0, 1.0)
        return TTestResult(math.copysign(math.inf, diff), 0.0)
    t = diff / math.sqrt(pooled * (1.0 / a.size + 1.0 / b.size))
    p = float(betainc(nu / 2.0, 0.5, nu / (nu + t * t)))
    return TTestResult(t, p)


def student_t_pvalue(sample_a, sample_b) -> float:
    """Two-sided p-value of the pooled-variance Student t-test."""
    return two_sample_t_test(sample_a, sample_b).pvalue


@dataclass
class ExperimentReport:
    """Per-method summaries plus the final-epoch t-test, when computable."""

    summaries: dict[str, MethodSummary]
    t_statistic: float | None
    p_value: float | None


def run_comparison(
    methods: Sequence[str],
    trials: int,
    spec: DatasetSpec,
    spsa_config: SpsaConfig,
    master_seed: int = 0,
    genetic: GeneticConfig = GeneticConfig(),
) -> ExperimentReport:
    """Train every method on one shared dataset across seeded trials.

    The t-test compares final-epoch raw RMSEs of 'exact' versus 'random'
    (two-sided, pooled variance); it is reported as None whenever either
    method is absent or fewer than two trials ran.
    """
    dataset, _ = generate_dataset(spec)
    summaries: dict[str, MethodSummary] = {}
    for method in methods:
        records = [
            run_trial(method, t, master_seed, dataset, spec, spsa_config, genetic)
            for t in range(trials)
        ]
        summaries[method] = MethodSummary(method, records, spec.observable)

    t_stat = p_value = None
    if "exact" in summaries and "random" in summaries and trials >= 2:
        final_exact = [rec.rmse_trace[-1] for rec in summaries["exact"].records]
        final_random = [rec.rmse_trace[-1] for rec in summaries["random"].records]
        t_stat, p_value = two_sample_t_test(final_exact, final_random)
    return ExperimentReport(summaries, t_stat, p_value)
