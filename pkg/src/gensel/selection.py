"""Generator selection from Pauli-string candidate pools.

The pool for an observable O is S = {G non-identity : {G, O} = 0}.  Over a
candidate list drawn from S we maximize the number of mutually anticommuting
pairs among L chosen generators:

    max sum_{j<k} c_jk x_j x_k   s.t.  sum_j x_j = L,  x_j in {0, 1}

with c_jk = 1 iff candidates j and k anticommute.  The exact solver searches
for an L-clique in the anticommutation graph first (score L(L-1)/2 is then
provably optimal) and falls back to branch-and-bound over subsets, which is
still exact.  Heuristic solvers (greedy, genetic) and the baseline selection
methods used for comparison experiments live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .pauli import PauliString, commutes, pauli_strings

__all__ = [
    "SelectionProblem",
    "SelectionResult",
    "SelectionMetrics",
    "build_pool",
    "score_matrix",
    "solve_exact",
    "solve_greedy",
    "solve_genetic",
    "select_baseline",
    "evaluate_selection",
]

BASELINE_METHODS = ("random", "grad_only", "pair_only")


@dataclass(frozen=True)
class SelectionResult:
    """Chosen generators plus the achieved pair score.

    ``score`` counts anticommuting unordered pairs among ``chosen``;
    ``optimal_flag`` is True only when that score is provably maximal
    (either proven by exact search or equal to the trivial bound L(L-1)/2).
    """

    chosen: tuple[PauliString, ...]
    score: int
    method: str
    optimal_flag: bool

    def __post_init__(self):
        budget = len(self.chosen)
        if len(set(self.chosen)) != budget:
            raise ValueError("chosen generators must be distinct")
        if not 0 <= self.score <= budget * (budget - 1) // 2:
            raise ValueError(f"score {self.score} out of range for L={budget}")


@dataclass
class SelectionProblem:
    """Candidate pool, pairwise anticommutation matrix and budget."""

    observable: PauliString
    candidates: tuple[PauliString, ...]
    budget: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.candidates = tuple(self.candidates)
        m = len(self.candidates)
        if not 1 <= self.budget <= m:
            raise ValueError(f"budget {self.budget} infeasible for pool of {m}")
        c = np.asarray(self.coefficients)
        if c.shape != (m, m):
            raise ValueError(f"coefficient matrix shape {c.shape} != ({m}, {m})")
        if np.any(c != c.T) or np.any(np.diag(c) != 0):
            raise ValueError("coefficient matrix must be symmetric with zero diagonal")
        self.coefficients = c.astype(np.uint8)

    @classmethod
    def build(
        cls,
        observable: PauliString,
        candidates: Sequence[PauliString],
        budget: int,
    ) -> "SelectionProblem":
        return cls(observable, tuple(candidates), budget, score_matrix(candidates))

    def subset_score(self, indices: Iterable[int]) -> int:
        idx = list(indices)
        return int(self.coefficients[np.ix_(idx, idx)].sum()) // 2


class SelectionMetrics(NamedTuple):
    """Counts of 'bad' commutations for a chosen generator set."""

    n_commute_obs: int
    n_commute_pairs: int


def build_pool(
    observable: PauliString,
    n: int | None = None,
    subsample_size: int | None = None,
    seed: int | None = None,
) -> list[PauliString]:
    """All non-identity n-qubit strings anticommuting with the observable.

    Returned in canonical enumeration order.  If ``subsample_size`` is given,
    a uniformly random subset of that size is drawn with ``seed`` and returned
    in the same canonical order.
    """
    if observable.is_identity:
        raise ValueError("observable must be non-identity")
    if n is not None and n != observable.n:
        raise ValueError(f"qubit-count mismatch: {n} vs observable.n={observable.n}")
    pool = [p for p in pauli_strings(observable.n) if not commutes(p, observable)]
    if subsample_size is None:
        return pool
    if subsample_size > len(pool):
        raise ValueError(
            f"subsample size {subsample_size} exceeds pool size {len(pool)}"
        )
    rng = np.random.default_rng(seed)
    keep = rng.choice(len(pool), size=subsample_size, replace=False)
    return [pool[i] for i in sorted(keep)]


def score_matrix(candidates: Sequence[PauliString]) -> np.ndarray:
    """Symmetric 0/1 matrix with entry 1 iff the candidate pair anticommutes."""
    candidates = list(candidates)
    m = len(candidates)
    if m == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    n = candidates[0].n
    if any(p.n != n for p in candidates):
        raise ValueError("candidates must act on the same number of qubits")
    if len(set(candidates)) != m:
        raise ValueError("candidates must be pairwise distinct")
    if n <= 63:
        x = np.array([p.x for p in candidates], dtype=np.uint64)
        z = np.array([p.z for p in candidates], dtype=np.uint64)
        sym = np.bitwise_count(x[:, None] & z[None, :]) + np.bitwise_count(
            z[:, None] & x[None, :]
        )
        return (sym & 1).astype(np.uint8)
    c = np.zeros((m, m), dtype=np.uint8)
    for j in range(m):
        for k in range(j + 1, m):
            if not commutes(candidates[j], candidates[k]):
                c[j, k] = c[k, j] = 1
    return c


def _adjacency_masks(coefficients: np.ndarray) -> list[int]:
    masks = []
    for row in coefficients:
        mask = 0
        for k in np.flatnonzero(row):
            mask |= 1 << int(k)
        masks.append(mask)
    return masks


def _iter_bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _find_clique(adj: list[int], m: int, size: int) -> list[int] | None:
    """Lexicographically smallest clique of the given size, or None.

    Depth-first search extending the partial clique with the smallest
    admissible vertex; because branches are explored in index order, the
    first complete clique found is the lexicographically smallest one.
    """
    full = (1 << m) - 1

    def extend(current: list[int], allowed: int) -> list[int] | None:
        if len(current) == size:
            return current
        need = size - len(current)
        if allowed.bit_count() < need:
            return None
        for v in _iter_bits(allowed):
            # Only vertices above v remain admissible after choosing v.
            above = ~((1 << (v + 1)) - 1)
            found = extend(current + [v], allowed & adj[v] & above)
            if found is not None:
                return found
            allowed &= ~(1 << v)
            if allowed.bit_count() < need:
                return None
        return None

    return extend([], full)


def solve_exact(problem: SelectionProblem) -> SelectionResult:
    """Provably optimal subset of size L maximizing anticommuting pairs.

    Clique-first: if an L-clique exists in the anticommutation graph its
    score L(L-1)/2 meets the trivial upper bound, so the search stops there.
    Otherwise an exact branch-and-bound over subsets runs with a
    remaining-degree upper bound.  Ties break to the lexicographically
    smallest subset in candidate order; the result is deterministic.
    """
    L = problem.budget
    if L < 2:
        raise ValueError(f"budget must be at least 2, got {L}")
    m = len(problem.candidates)
    adj = _adjacency_masks(problem.coefficients)

    clique = _find_clique(adj, m, L)
    if clique is not None:
        chosen = tuple(problem.candidates[i] for i in clique)
        return SelectionResult(chosen, L * (L - 1) // 2, "exact", True)

    coeff = problem.coefficients.astype(np.int64)
    best_score = -1
    best_subset: list[int] = []

    def bound(score: int, picks_left: int, start: int, deg_into: np.ndarray) -> int:
        remaining = deg_into[start:m]
        if picks_left > remaining.size:
            return -1
        top = np.sort(remaining)[::-1][:picks_left]
        return score + picks_left * (picks_left - 1) // 2 + int(top.sum())

    def recurse(start: int, chosen: list[int], score: int, deg_into: np.ndarray):
        nonlocal best_score, best_subset
        if len(chosen) == L:
            if score > best_score:
                best_score = score
                best_subset = chosen.copy()
            return
        picks_left = L - len(chosen)
        if m - start < picks_left:
            return
        if bound(score, picks_left, start, deg_into) <= best_score:
            return
        v = start
        # Include v, then exclude it; this visits subsets in lexicographic
        # order, so the first subset attaining the final best score is the
        # lexicographically smallest optimum.
        recurse(v + 1, chosen + [v], score + int(deg_into[v]), deg_into + coeff[v])
        recurse(v + 1, chosen, score, deg_into)

    recurse(0, [], 0, np.zeros(m, dtype=np.int64))
    chosen = tuple(problem.candidates[i] for i in best_subset)
    return SelectionResult(chosen, best_score, "exact", True)


def solve_greedy(problem: SelectionProblem) -> SelectionResult:
    """Deterministic greedy heuristic: best marginal-gain growth from every start.

    For each possible seed vertex, grow a subset by repeatedly adding the
    candidate with the largest number of anticommutation edges into the
    current subset (lowest index on ties); keep the best subset found.
    """
    L = problem.budget
    m = len(problem.candidates)
    coeff = problem.coefficients.astype(np.int64)
    best_score = -1
    best_subset: list[int] = []
    for start in range(m):
        chosen = [start]
        deg_into = coeff[start].copy()
        score = 0
        taken = np.zeros(m, dtype=bool)
        taken[start] = True
        while len(chosen) < L:
            gains = np.where(taken, -1, deg_into)
            v = int(np.argmax(gains))
            score += int(deg_into[v])
            chosen.append(v)
            taken[v] = True
            deg_into += coeff[v]
        if score > best_score or (score == best_score and sorted(chosen) < best_subset):
            best_score = score
            best_subset = sorted(chosen)
    chosen = tuple(problem.candidates[i] for i in best_subset)
    return SelectionResult(chosen, best_score, "greedy", best_score == L * (L - 1) // 2)


def solve_genetic(
    problem: SelectionProblem,
    population: int = 64,
    generations: int = 120,
    mutation_rate: float = 0.3,
    seed: int | None = None,
) -> SelectionResult:
    """Genetic-algorithm heuristic for the subset selection problem.

    Chromosomes are index subsets of size L.  Crossover takes the union of
    two parents and randomly trims it back to L; mutation swaps one chosen
    index for an unchosen one.  The best individual ever seen is kept
    (elitism).  Deterministic given the seed.
    """
    if population < 2:
        raise ValueError(f"population size must be at least 2, got {population}")
    L = problem.budget
    m = len(problem.candidates)
    max_score = L * (L - 1) // 2
    coeff = problem.coefficients.astype(np.int64)
    rng = np.random.default_rng(seed)

    def fitness(subset: tuple[int, ...]) -> int:
        idx = list(subset)
        return int(coeff[np.ix_(idx, idx)].sum()) // 2

    def random_subset() -> tuple[int, ...]:
        return tuple(sorted(rng.choice(m, size=L, replace=False).tolist()))

    pop = [random_subset() for _ in range(population)]
    fits = [fitness(s) for s in pop]
    best_i = int(np.argmax(fits))
    best, best_fit = pop[best_i], fits[best_i]

    for _ in range(generations):
        if best_fit == max_score:
            break
        new_pop = [best]
        while len(new_pop) < population:
            i, j = rng.integers(0, population, size=2)
            p1 = pop[i] if fits[i] >= fits[j] else pop[j]
            i, j = rng.integers(0, population, size=2)
            p2 = pop[i] if fits[i] >= fits[j] else pop[j]
            child = sorted(set(p1) | set(p2))
            while len(child) > L:
                child.pop(int(rng.integers(0, len(child))))
            if m > L and rng.random() < mutation_rate:
                out = int(rng.integers(0, L))
                pool = [v for v in range(m) if v not in child]
                child[out] = pool[int(rng.integers(0, len(pool)))]
                child.sort()
            new_pop.append(tuple(child))
        pop = new_pop
        fits = [fitness(s) for s in pop]
        gen_best = int(np.argmax(fits))
        if fits[gen_best] > best_fit:
            best, best_fit = pop[gen_best], fits[gen_best]

    chosen = tuple(problem.candidates[i] for i in best)
    return SelectionResult(chosen, best_fit, "genetic", best_fit == max_score)


def select_baseline(
    method: str,
    n: int,
    observable: PauliString,
    budget: int,
    seed: int | None = None,
) -> SelectionResult:
    """Baseline selection methods used for comparison.

    random:    L distinct strings uniform over all non-identity strings
               (no anticommutation constraint at all).
    grad_only: L distinct strings uniform over the pool anticommuting with
               the observable; mutual relations unconstrained.
    pair_only: an L-clique of mutually anticommuting strings over all
               non-identity strings, by seeded randomized greedy search;
               no constraint versus the observable.
    """
    if method not in BASELINE_METHODS:
        raise ValueError(f"unknown baseline method {method!r}")
    if observable.n != n:
        raise ValueError(f"qubit-count mismatch: {n} vs observable.n={observable.n}")
    rng = np.random.default_rng(seed)
    everyone = list(pauli_strings(n))

    if method == "random":
        if budget > len(everyone):
            raise ValueError(f"budget {budget} exceeds {len(everyone)} strings")
        idx = rng.choice(len(everyone), size=budget, replace=False)
        chosen = tuple(everyone[i] for i in sorted(idx))
    elif method == "grad_only":
        pool = build_pool(observable)
        if budget > len(pool):
            raise ValueError(f"budget {budget} exceeds pool size {len(pool)}")
        idx = rng.choice(len(pool), size=budget, replace=False)
        chosen = tuple(pool[i] for i in sorted(idx))
    else:  # pair_only
        chosen = _random_clique(everyone, budget, rng)

    score = sum(
        0 if commutes(a, b) else 1
        for i, a in enumerate(chosen)
        for b in chosen[i + 1 :]
    )
    return SelectionResult(chosen, score, method, score == budget * (budget - 1) // 2)


def _random_clique(
    candidates: list[PauliString],
    size: int,
    rng: np.random.Generator,
    attempts: int = 200,
) -> tuple[PauliString, ...]:
    for _ in range(attempts):
        order = rng.permutation(len(candidates))
        clique: list[PauliString] = []
        for i in order:
            p = candidates[i]
            if all(not commutes(p, q) for q in clique):
                clique.append(p)
                if len(clique) == size:
                    return tuple(clique)
    raise RuntimeError(
        f"no mutually anticommuting set of size {size} found in "
        f"{attempts} randomized attempts"
    )


def evaluate_selection(
    chosen: Sequence[PauliString], observable: PauliString
) -> SelectionMetrics:
    """Count chosen generators commuting with the observable and commuting pairs."""
    chosen = list(chosen)
    if len(set(chosen)) != len(chosen):
        raise ValueError("chosen generators must be distinct")
    n_obs = sum(1 for g in chosen if commutes(g, observable))
    n_pairs = sum(
        1
        for i, a in enumerate(chosen)
        for b in chosen[i + 1 :]
        if commutes(a, b)
    )
    return SelectionMetrics(n_obs, n_pairs)
