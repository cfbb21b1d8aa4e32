"""Finite weighted graphs: densities, prior sampling, Metropolis dynamics.

A weighted graph on ``n`` vertices is a symmetric ``n x n`` matrix of edge
weights, diagonal included — the step-function kernel it induces takes the
value ``w[i, i]`` on diagonal blocks, so the diagonal participates in every
density below (its contribution is O(1/n) and vanishes in the limit).

``hom_density`` evaluates the kernel form of a subgraph density: the
normalized sum over *all* vertex maps, injective or not, of the product of
edge weights.  ``MetropolisChain`` and ``run_sampler`` simulate the Gibbs
measure that reweights the iid prior by ``exp(n**2 * (beta1 * t_edge +
beta2 * t_sub))``; proposals redraw one entry from the prior, so the
acceptance ratio is exactly that exponential factor with no correction
term.  ``enumerate_gibbs`` computes the same measure exactly for small
graphs over finite-support laws, as an oracle for the chain.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import cramer
from .errors import InputValidationError
from .variational import ModelParams, PhaseClass, solve_psi

_MODULE = "graphs"

#: Sufficient statistics are recomputed from scratch every this many
#: sweeps, bounding incremental float drift.
RESYNC_INTERVAL = 100


@dataclass(frozen=True)
class SubgraphSpec:
    """A finite simple graph on vertices 1..k, given by its edge list."""

    k: int
    edges: tuple[tuple[int, int], ...]
    name: str

    def __post_init__(self):
        if self.k < 1:
            raise InputValidationError(
                f"vertex count must be >= 1, got {self.k}",
                module=_MODULE,
                operation="SubgraphSpec",
                offending_parameter="k",
            )
        seen = set()
        normalized = []
        for pair in self.edges:
            i, j = pair
            if i == j:
                raise InputValidationError(
                    f"self-loop {pair} is not allowed",
                    module=_MODULE,
                    operation="SubgraphSpec",
                    offending_parameter="edges",
                )
            if not (1 <= i <= self.k and 1 <= j <= self.k):
                raise InputValidationError(
                    f"edge {pair} uses vertices outside 1..{self.k}",
                    module=_MODULE,
                    operation="SubgraphSpec",
                    offending_parameter="edges",
                )
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InputValidationError(
                    f"duplicate edge {pair}",
                    module=_MODULE,
                    operation="SubgraphSpec",
                    offending_parameter="edges",
                )
            seen.add(key)
            normalized.append(key)
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.edges)


EDGE = SubgraphSpec(2, ((1, 2),), "edge")
TWO_STAR = SubgraphSpec(3, ((1, 2), (1, 3)), "two-star")
TRIANGLE = SubgraphSpec(3, ((1, 2), (1, 3), (2, 3)), "triangle")


@dataclass
class WeightedGraph:
    """Symmetric weight matrix on ``n`` vertices, diagonal included."""

    n: int
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.n < 2:
            raise InputValidationError(
                f"need at least 2 vertices, got n = {self.n}",
                module=_MODULE,
                operation="WeightedGraph",
                offending_parameter="n",
            )
        if self.weights.shape != (self.n, self.n):
            raise InputValidationError(
                f"weights must be {self.n}x{self.n}, got {self.weights.shape}",
                module=_MODULE,
                operation="WeightedGraph",
                offending_parameter="weights",
            )
        if not np.array_equal(self.weights, self.weights.T):
            raise InputValidationError(
                "weights matrix must be symmetric",
                module=_MODULE,
                operation="WeightedGraph",
                offending_parameter="weights",
            )


def hom_density(subgraph: SubgraphSpec, graph: WeightedGraph) -> float:
    """Kernel-form subgraph density of ``graph``.

    Equals ``n**(-k)`` times the sum over all vertex maps [k] -> [n] of the
    product of mapped edge weights.  Vertices of the subgraph that touch no
    edge integrate out exactly, so only the edge-touching vertices are
    contracted; the contraction is delegated to einsum, which may do much
    better than the n**k map enumeration but is not guaranteed to.
    """
    if subgraph.k > 4:
        warnings.warn(
            f"density of a {subgraph.k}-vertex subgraph may cost up to "
            f"O(n**{subgraph.k})",
            RuntimeWarning,
            stacklevel=2,
        )
    if not subgraph.edges:
        return 1.0
    if len(subgraph.edges) == 1:
        # Plain sum keeps this bit-identical to the matrix mean.
        return float(graph.weights.sum()) / float(graph.n) ** 2
    used = sorted({v for edge in subgraph.edges for v in edge})
    letter = {v: chr(ord("a") + i) for i, v in enumerate(used)}
    script = ",".join(letter[i] + letter[j] for i, j in subgraph.edges) + "->"
    total = float(np.einsum(script, *([graph.weights] * len(subgraph.edges))))
    return total / float(graph.n) ** len(used)


def _draw_weights(dist: cramer.EdgeDistribution, rng: np.random.Generator, size: int):
    if dist.kind is cramer.Kind.UNIFORM01:
        return rng.random(size)
    if dist.kind is cramer.Kind.BERNOULLI_HALF:
        return rng.integers(0, 2, size).astype(float)
    values = np.array([v for v, _ in dist.atoms])
    probs = np.array([q for _, q in dist.atoms])
    return rng.choice(values, size=size, p=probs)


def sample_prior(dist: cramer.EdgeDistribution, n: int, seed) -> WeightedGraph:
    """Graph with iid entries from ``dist`` on the upper triangle + diagonal."""
    if not float(n).is_integer() or int(n) < 2:
        raise InputValidationError(
            f"n must be an integer >= 2, got {n!r}",
            module=_MODULE,
            operation="sample_prior",
            offending_parameter="n",
        )
    n = int(n)
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n)
    weights = np.zeros((n, n))
    weights[iu] = _draw_weights(dist, rng, len(iu[0]))
    weights = weights + np.triu(weights, 1).T
    return WeightedGraph(n, weights)


@dataclass(frozen=True)
class TrajectoryStats:
    """Recorded density trajectories of one chain run."""

    sweeps: int
    t_edge_series: np.ndarray
    t_sub_series: np.ndarray
    mean_t_edge: float
    mean_t_sub: float
    se_t_edge: float
    se_t_sub: float
    acceptance_rate: float
    seed: int
    max_resync_drift: float


class MetropolisChain:
    """Single-entry Metropolis dynamics targeting the Gibbs measure.

    One step redraws one distinct matrix entry (i <= j, mirrored) from the
    prior and accepts with probability ``min(1, exp(n**2 * delta))`` where
    ``delta`` is the change in ``beta1 * t_edge + beta2 * t_sub``.  One
    sweep visits all ``n*(n+1)/2`` entries in fresh random order.  The
    change in the subgraph density is computed in closed form for the
    built-in two-star and triangle (making sweeps O(n**2) and O(n**3)
    respectively); any other subgraph falls back to recomputing the
    density, which is far slower but exact.
    """

    def __init__(
        self,
        params: ModelParams,
        n: int,
        seed,
        subgraph: SubgraphSpec | None = None,
    ):
        if not float(n).is_integer() or int(n) < 2:
            raise InputValidationError(
                f"n must be an integer >= 2, got {n!r}",
                module=_MODULE,
                operation="MetropolisChain",
                offending_parameter="n",
            )
        n = int(n)
        if subgraph is None:
            defaults = {2: TWO_STAR, 3: TRIANGLE}
            if params.p not in defaults:
                raise InputValidationError(
                    f"no built-in {params.p}-edge subgraph; pass one explicitly",
                    module=_MODULE,
                    operation="MetropolisChain",
                    offending_parameter="subgraph",
                )
            subgraph = defaults[params.p]
        if subgraph.edge_count != params.p:
            raise InputValidationError(
                f"subgraph {subgraph.name!r} has {subgraph.edge_count} edges, "
                f"but the model has p = {params.p}",
                module=_MODULE,
                operation="MetropolisChain",
                offending_parameter="subgraph",
            )

        self.params = params
        self.n = n
        self.subgraph = subgraph
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._entries = [(i, j) for i in range(n) for j in range(i, n)]

        iu = np.triu_indices(n)
        weights = np.zeros((n, n))
        weights[iu] = _draw_weights(params.dist, self._rng, len(iu[0]))
        self._w = weights + np.triu(weights, 1).T

        self._mode = {TWO_STAR: "two-star", TRIANGLE: "triangle"}.get(
            subgraph, "generic"
        )
        self._graph = WeightedGraph(n, self._w)  # shares the matrix
        self._rows = self._w.sum(axis=1)
        self._t_edge = float(self._w.sum()) / n**2
        self._t_sub = self._t_sub_scratch()

        self.accepted = 0
        self.proposed = 0
        self.sweeps_done = 0
        self.max_resync_drift = 0.0

    # -- densities ---------------------------------------------------------

    @property
    def weights(self) -> np.ndarray:
        """Current weight matrix (live view; do not mutate)."""
        return self._w

    @property
    def t_edge(self) -> float:
        """Current edge density: mean of all n**2 entries."""
        return self._t_edge

    @property
    def t_sub(self) -> float:
        """Current density of the model's p-edge subgraph."""
        return self._t_sub

    def _t_sub_scratch(self) -> float:
        n = self.n
        if self._mode == "two-star":
            return float(np.dot(self._rows, self._rows)) / n**3
        if self._mode == "triangle":
            return float(np.einsum("ij,jk,ki->", self._w, self._w, self._w)) / n**3
        return hom_density(self.subgraph, self._graph)

    def state_key(self) -> tuple[float, ...]:
        """Current state as the upper-triangle entries in row-major order."""
        return tuple(
            float(self._w[i, j]) for i, j in self._entries
        )

    # -- dynamics ----------------------------------------------------------

    def _sub_change(self, i: int, j: int, delta: float) -> float:
        """Change in t_sub when entry (i, j) (mirrored) moves by delta."""
        n = self.n
        if self._mode == "two-star":
            if i == j:
                return delta * (2.0 * self._rows[i] + delta) / n**3
            return 2.0 * delta * (self._rows[i] + self._rows[j] + delta) / n**3
        if self._mode == "triangle":
            w = self._w
            if i == j:
                sq = float(w[i] @ w[:, i])
                return (3.0 * delta * sq + 3.0 * delta**2 * w[i, i] + delta**3) / n**3
            sq = float(w[i] @ w[:, j])
            return (
                6.0 * delta * sq + 3.0 * delta**2 * (w[i, i] + w[j, j])
            ) / n**3
        old = self._w[i, j]
        self._w[i, j] = self._w[j, i] = old + delta
        t_new = hom_density(self.subgraph, self._graph)
        self._w[i, j] = self._w[j, i] = old
        return t_new - self._t_sub

    def _apply(
        self, i: int, j: int, value: float, delta: float, d_edge: float, d_sub: float
    ):
        # Assign the proposal itself: value + delta arithmetic would land
        # one ulp off the proposal and (for discrete priors) off the atom
        # grid.  Row sums and densities still move by delta, resynced
        # periodically.
        self._w[i, j] = value
        if i != j:
            self._w[j, i] = value
            self._rows[j] += delta
        self._rows[i] += delta
        self._t_edge += d_edge
        self._t_sub += d_sub

    def step(self, i: int, j: int, proposal: float | None = None) -> bool:
        """One Metropolis update of entry (i, j); returns acceptance."""
        if proposal is None:
            proposal = float(_draw_weights(self.params.dist, self._rng, 1)[0])
        delta = proposal - float(self._w[i, j])
        self.proposed += 1
        d_edge = (delta if i == j else 2.0 * delta) / self.n**2
        d_sub = self._sub_change(i, j, delta)
        log_acc = self.n**2 * (
            self.params.beta1 * d_edge + self.params.beta2 * d_sub
        )
        if log_acc >= 0.0 or math.log(self._rng.random()) < log_acc:
            self._apply(i, j, proposal, delta, d_edge, d_sub)
            self.accepted += 1
            return True
        return False

    def sweep(self) -> int:
        """One full sweep over all distinct entries in random order."""
        m = len(self._entries)
        proposals = _draw_weights(self.params.dist, self._rng, m)
        accepted_before = self.accepted
        for idx, k in enumerate(self._rng.permutation(m)):
            i, j = self._entries[k]
            self.step(i, j, float(proposals[idx]))
        self.sweeps_done += 1
        if self.sweeps_done % RESYNC_INTERVAL == 0:
            self._resync()
        return self.accepted - accepted_before

    def _resync(self):
        self._rows = self._w.sum(axis=1)
        t_edge = float(self._w.sum()) / self.n**2
        t_sub = self._t_sub_scratch()
        drift = max(abs(t_edge - self._t_edge), abs(t_sub - self._t_sub))
        self.max_resync_drift = max(self.max_resync_drift, drift)
        self._t_edge = t_edge
        self._t_sub = t_sub


def run_sampler(
    params: ModelParams,
    n: int,
    sweeps: int,
    burn_in: int,
    seed,
    subgraph: SubgraphSpec | None = None,
) -> TrajectoryStats:
    """Run a chain and record per-sweep densities after burn-in.

    Acceptance is counted over the recorded portion only.  Identical
    arguments (seed included) reproduce the identical trajectory.
    """
    if not float(sweeps).is_integer() or int(sweeps) < 1:
        raise InputValidationError(
            f"sweeps must be a positive integer, got {sweeps!r}",
            module=_MODULE,
            operation="run_sampler",
            offending_parameter="sweeps",
        )
    if not float(burn_in).is_integer() or int(burn_in) < 0:
        raise InputValidationError(
            f"burn_in must be a nonnegative integer, got {burn_in!r}",
            module=_MODULE,
            operation="run_sampler",
            offending_parameter="burn_in",
        )
    sweeps, burn_in = int(sweeps), int(burn_in)

    chain = MetropolisChain(params, n, seed, subgraph)
    for _ in range(burn_in):
        chain.sweep()
    chain.accepted = 0
    chain.proposed = 0

    t_edge = np.empty(sweeps)
    t_sub = np.empty(sweeps)
    for s in range(sweeps):
        chain.sweep()
        t_edge[s] = chain.t_edge
        t_sub[s] = chain.t_sub

    def se(series: np.ndarray) -> float:
        if len(series) < 2:
            return math.nan
        return float(np.std(series, ddof=1) / math.sqrt(len(series)))

    return TrajectoryStats(
        sweeps=sweeps,
        t_edge_series=t_edge,
        t_sub_series=t_sub,
        mean_t_edge=float(t_edge.mean()),
        mean_t_sub=float(t_sub.mean()),
        se_t_edge=se(t_edge),
        se_t_sub=se(t_sub),
        acceptance_rate=chain.accepted / max(chain.proposed, 1),
        seed=seed,
        max_resync_drift=chain.max_resync_drift,
    )


@dataclass(frozen=True)
class ConcentrationReport:
    """Deviation of trajectory means from the predicted concentration targets.

    One target pair ``(u*, u***p)`` per global maximizer; with two global
    maximizers both are listed without adjudicating which basin a finite
    chain occupies.  ``deviations[k]`` holds the absolute deviations of
    ``(mean_t_edge, mean_t_sub)`` from ``targets[k]``.
    """

    classification: PhaseClass
    targets: tuple[tuple[float, float], ...]
    deviations: tuple[tuple[float, float], ...]
    mean_t_edge: float
    mean_t_sub: float
    se_t_edge: float
    se_t_sub: float


def concentration_report(
    stats: TrajectoryStats, params: ModelParams
) -> ConcentrationReport:
    """Compare a trajectory against the variational concentration targets."""
    solution = solve_psi(params)
    targets = tuple((u, u**params.p) for u in solution.maximizers)
    deviations = tuple(
        (abs(stats.mean_t_edge - t0), abs(stats.mean_t_sub - t1))
        for t0, t1 in targets
    )
    return ConcentrationReport(
        classification=solution.classification,
        targets=targets,
        deviations=deviations,
        mean_t_edge=stats.mean_t_edge,
        mean_t_sub=stats.mean_t_sub,
        se_t_edge=stats.se_t_edge,
        se_t_sub=stats.se_t_sub,
    )


def enumerate_gibbs(
    params: ModelParams, n: int, subgraph: SubgraphSpec | None = None
) -> dict[tuple[float, ...], float]:
    """Exact Gibbs law over all weight assignments of a finite-support prior.

    Keys are upper-triangle states in the order of
    ``MetropolisChain.state_key``; values are probabilities.  Cost is
    ``len(atoms) ** (n*(n+1)/2)`` states — meant for tiny ``n`` as a
    ground-truth oracle for the chain.
    """
    if params.dist.kind is not cramer.Kind.FINITE_SUPPORT:
        raise InputValidationError(
            "exact enumeration needs a finite-support edge law",
            module=_MODULE,
            operation="enumerate_gibbs",
            offending_parameter="params",
        )
    if not float(n).is_integer() or int(n) < 2:
        raise InputValidationError(
            f"n must be an integer >= 2, got {n!r}",
            module=_MODULE,
            operation="enumerate_gibbs",
            offending_parameter="n",
        )
    n = int(n)
    entries = [(i, j) for i in range(n) for j in range(i, n)]
    values = [v for v, _ in params.dist.atoms]
    log_q = {v: math.log(q) for v, q in params.dist.atoms}
    if subgraph is None:
        subgraph = {2: TWO_STAR, 3: TRIANGLE}.get(params.p)
        if subgraph is None:
            raise InputValidationError(
                f"no built-in {params.p}-edge subgraph; pass one explicitly",
                module=_MODULE,
                operation="enumerate_gibbs",
                offending_parameter="subgraph",
            )

    states = []
    log_weights = []
    w = np.zeros((n, n))
    for assignment in itertools.product(values, repeat=len(entries)):
        for (i, j), v in zip(entries, assignment):
            w[i, j] = w[j, i] = v
        graph = WeightedGraph(n, w)
        t_edge = float(w.sum()) / n**2
        t_sub = hom_density(subgraph, graph)
        log_prior = sum(log_q[v] for v in assignment)
        states.append(assignment)
        log_weights.append(
            n**2 * (params.beta1 * t_edge + params.beta2 * t_sub) + log_prior
        )
    log_weights = np.array(log_weights)
    log_weights -= log_weights.max()
    probs = np.exp(log_weights)
    probs /= probs.sum()
    return {state: float(p) for state, p in zip(states, probs)}
