"""Weighted-sum solver backends and the call-counting solver handle.

Four backends realize the sigma-approximate weighted-sum contract: exact and
adversarial argmin over an explicit list of solutions, Dijkstra over the
scalarized arc costs of a digraph, and Kruskal over the scalarized edge
costs of an undirected graph.  The adversarial backend returns the worst
solution still admissible under the sigma contract, which makes guarantee
tests maximally stressing.

Tie-breaking is deterministic everywhere: explicit backends prefer the
lexicographically smallest objective vector and then the smallest id, graph
backends follow input arc order.  Runs are therefore reproducible and the
exact backends always return solutions with nondominated images.
"""

from __future__ import annotations

import heapq
import itertools
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .core import (
    Bounds,
    ContractViolation,
    Direction,
    ObjectiveVector,
    RationalLike,
    WeightVector,
    as_rational,
)


class UnreachableTarget(ContractViolation):
    """Shortest-path instance whose target cannot be reached from the source."""


class DisconnectedGraph(ContractViolation):
    """Spanning-tree instance whose underlying graph is not connected."""


class EnumerationLimit(RuntimeError):
    """Exhaustive enumeration of a graph instance exceeded the guard."""


@dataclass(frozen=True)
class Solution:
    id: str
    image: ObjectiveVector


@dataclass(frozen=True)
class ExplicitInstance:
    """Feasible set given by an explicit list of (id, image) pairs."""

    direction: Direction
    p: int
    solutions: tuple[Solution, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "solutions", tuple(self.solutions))
        if not self.solutions:
            raise ContractViolation("explicit instances must be nonempty")
        if any(len(s.image) != self.p for s in self.solutions):
            raise ContractViolation("solution image dimension differs from p")
        ids = [s.id for s in self.solutions]
        if len(set(ids)) != len(ids):
            raise ContractViolation("solution ids must be unique")

    def image_of(self, solution_id: str) -> ObjectiveVector:
        for s in self.solutions:
            if s.id == solution_id:
                return s.image
        raise ContractViolation(f"unknown solution id {solution_id!r}")

    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.solutions)


class GraphKind(Enum):
    SHORTEST_PATH = "shortest-path"
    SPANNING_TREE = "spanning-tree"


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    cost: ObjectiveVector


@dataclass(frozen=True)
class GraphInstance:
    """Digraph (shortest path) or undirected graph (spanning tree) instance.

    For SPANNING_TREE the arcs are read as undirected edges and source and
    target are ignored.
    """

    direction: Direction
    p: int
    node_count: int
    arcs: tuple[Arc, ...]
    kind: GraphKind
    source: int = 0
    target: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if self.node_count < 2:
            raise ContractViolation("graph instances need at least two nodes")
        if not self.arcs:
            raise ContractViolation("graph instances need at least one arc")
        for arc in self.arcs:
            if len(arc.cost) != self.p:
                raise ContractViolation("arc cost dimension differs from p")
            if not (0 <= arc.tail < self.node_count and 0 <= arc.head < self.node_count):
                raise ContractViolation("arc endpoint out of range")
        if self.kind is GraphKind.SHORTEST_PATH:
            if not 0 <= self.source < self.node_count or not 0 <= self.target < self.node_count:
                raise ContractViolation("source/target out of range")
            if self.source == self.target:
                raise ContractViolation("source and target must differ")
            if not self._target_reachable():
                raise UnreachableTarget("target not reachable from source")
        else:
            if not self._connected():
                raise DisconnectedGraph("spanning-tree instance is not connected")

    def _target_reachable(self) -> bool:
        seen = {self.source}
        frontier = [self.source]
        while frontier:
            node = frontier.pop()
            for arc in self.arcs:
                if arc.tail == node and arc.head not in seen:
                    seen.add(arc.head)
                    frontier.append(arc.head)
        return self.target in seen

    def _connected(self) -> bool:
        uf = _UnionFind(self.node_count)
        for arc in self.arcs:
            uf.union(arc.tail, arc.head)
        root = uf.find(0)
        return all(uf.find(v) == root for v in range(self.node_count))


Instance = Union[ExplicitInstance, GraphInstance]


@dataclass(frozen=True)
class SolveAnswer:
    """One weighted-sum answer: canonical id, image, exact scalar value."""

    solution_id: str
    image: ObjectiveVector
    scalar: Fraction
    arcs: Optional[tuple[int, ...]] = None

    def as_solution(self) -> Solution:
        return Solution(self.solution_id, self.image)


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _check_weights(p: int, weights: WeightVector) -> None:
    if len(weights) != p:
        raise ContractViolation("weight vector dimension differs from p")


def solve_explicit_exact(inst: ExplicitInstance, weights: WeightVector) -> SolveAnswer:
    """Optimal weighted-sum solution; ties go to the lexicographically
    smallest objective vector, then the smallest id."""
    _check_weights(inst.p, weights)
    sign = 1 if inst.direction is Direction.MIN else -1

    def key(s: Solution):
        return (sign * weights.scalarize(s.image), s.image.values, s.id)

    best = min(inst.solutions, key=key)
    return SolveAnswer(best.id, best.image, weights.scalarize(best.image))


def solve_explicit_adversarial(
    inst: ExplicitInstance, weights: WeightVector, sigma: RationalLike
) -> SolveAnswer:
    """Worst solution whose weighted value still satisfies the sigma contract.

    Among all x with value <= sigma * opt the one with the largest value is
    returned (ties as in the exact backend), so a downstream guarantee that
    survives this backend survives any admissible sigma-approximation.
    """
    sigma = as_rational(sigma)
    if sigma < 1:
        raise ContractViolation("sigma must be >= 1")
    if inst.direction is not Direction.MIN:
        raise ContractViolation("adversarial backend is minimization-only")
    _check_weights(inst.p, weights)
    values = [(weights.scalarize(s.image), s) for s in inst.solutions]
    opt = min(v for v, _ in values)
    admissible = [(v, s) for v, s in values if v <= sigma * opt]
    worst, best_sol = min(admissible, key=lambda vs: (-vs[0], vs[1].image.values, vs[1].id))
    return SolveAnswer(best_sol.id, best_sol.image, worst)


def _vector_sum(p: int, vectors: list[ObjectiveVector]) -> ObjectiveVector:
    total = [Fraction(0)] * p
    for vec in vectors:
        for j, v in enumerate(vec):
            total[j] += v
    return ObjectiveVector(tuple(total))


def path_id(arc_indices: tuple[int, ...]) -> str:
    return "path:" + ",".join(str(i) for i in arc_indices)


def tree_id(arc_indices: tuple[int, ...]) -> str:
    return "tree:" + ",".join(str(i) for i in sorted(arc_indices))


def solve_shortest_path(inst: GraphInstance, weights: WeightVector) -> SolveAnswer:
    """Dijkstra on the scalarized arc costs (all strictly positive).

    Predecessors are updated only on strictly smaller scalar values, with
    arcs relaxed in input order, so the returned path is deterministic.
    """
    if inst.kind is not GraphKind.SHORTEST_PATH:
        raise ContractViolation("instance is not a shortest-path instance")
    if inst.direction is not Direction.MIN:
        raise ContractViolation("shortest-path backend is minimization-only")
    _check_weights(inst.p, weights)
    out: list[list[tuple[int, Arc]]] = [[] for _ in range(inst.node_count)]
    for idx, arc in enumerate(inst.arcs):
        out[arc.tail].append((idx, arc))

    dist: dict[int, Fraction] = {inst.source: Fraction(0)}
    pred: dict[int, int] = {}
    done: set[int] = set()
    counter = itertools.count()
    heap: list[tuple[Fraction, int, int]] = [(Fraction(0), next(counter), inst.source)]
    while heap:
        d, _, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == inst.target:
            break
        for idx, arc in out[node]:
            nd = d + weights.scalarize(arc.cost)
            if arc.head not in dist or nd < dist[arc.head]:
                dist[arc.head] = nd
                pred[arc.head] = idx
                heapq.heappush(heap, (nd, next(counter), arc.head))
    if inst.target not in done:
        raise UnreachableTarget("target not reachable from source")
    indices: list[int] = []
    node = inst.target
    while node != inst.source:
        idx = pred[node]
        indices.append(idx)
        node = inst.arcs[idx].tail
    indices.reverse()
    arc_tuple = tuple(indices)
    image = _vector_sum(inst.p, [inst.arcs[i].cost for i in arc_tuple])
    return SolveAnswer(path_id(arc_tuple), image, dist[inst.target], arc_tuple)


def solve_spanning_tree(inst: GraphInstance, weights: WeightVector) -> SolveAnswer:
    """Kruskal on the scalarized edge costs; ties keep input edge order."""
    if inst.kind is not GraphKind.SPANNING_TREE:
        raise ContractViolation("instance is not a spanning-tree instance")
    if inst.direction is not Direction.MIN:
        raise ContractViolation("spanning-tree backend is minimization-only")
    _check_weights(inst.p, weights)
    order = sorted(range(len(inst.arcs)), key=lambda i: weights.scalarize(inst.arcs[i].cost))
    uf = _UnionFind(inst.node_count)
    chosen: list[int] = []
    for idx in order:
        arc = inst.arcs[idx]
        if uf.union(arc.tail, arc.head):
            chosen.append(idx)
            if len(chosen) == inst.node_count - 1:
                break
    if len(chosen) != inst.node_count - 1:
        raise DisconnectedGraph("spanning-tree instance is not connected")
    arc_tuple = tuple(sorted(chosen))
    image = _vector_sum(inst.p, [inst.arcs[i].cost for i in arc_tuple])
    return SolveAnswer(tree_id(arc_tuple), image, weights.scalarize(image), arc_tuple)


def compute_bounds(inst: Instance) -> Bounds:
    """Strictly positive bounds sandwiching every feasible image.

    Explicit instances get the exact componentwise min and max.  Graph
    instances use the cheapest arc as the lower bound and the sum of all
    arcs as the upper bound; looser bounds only enlarge the weight grid.
    """
    if isinstance(inst, ExplicitInstance):
        lower = tuple(
            min(s.image[j] for s in inst.solutions) for j in range(inst.p)
        )
        upper = tuple(
            max(s.image[j] for s in inst.solutions) for j in range(inst.p)
        )
        return Bounds(lower, upper)
    lower = tuple(min(a.cost[j] for a in inst.arcs) for j in range(inst.p))
    upper = tuple(
        sum((a.cost[j] for a in inst.arcs), Fraction(0)) for j in range(inst.p)
    )
    return Bounds(lower, upper)


def enumerate_graph_solutions(
    inst: GraphInstance, limit: int = 10000, work_limit: int = 2_000_000
) -> ExplicitInstance:
    """Materialize all simple paths or spanning trees as an explicit instance.

    Guarded: raises EnumerationLimit once more than ``limit`` solutions are
    found or the combinational work exceeds ``work_limit``.  Intended only
    for desk-scale oracle verification.
    """
    solutions: list[Solution] = []
    if inst.kind is GraphKind.SHORTEST_PATH:
        out: list[list[tuple[int, Arc]]] = [[] for _ in range(inst.node_count)]
        for idx, arc in enumerate(inst.arcs):
            out[arc.tail].append((idx, arc))

        steps = 0

        def walk(node: int, on_path: set[int], taken: list[int]) -> None:
            nonlocal steps
            steps += 1
            if steps > work_limit:
                raise EnumerationLimit("path enumeration work limit exceeded")
            if node == inst.target:
                arc_tuple = tuple(taken)
                image = _vector_sum(inst.p, [inst.arcs[i].cost for i in arc_tuple])
                solutions.append(Solution(path_id(arc_tuple), image))
                if len(solutions) > limit:
                    raise EnumerationLimit("more paths than the enumeration limit")
                return
            for idx, arc in out[node]:
                if arc.head in on_path:
                    continue
                on_path.add(arc.head)
                taken.append(idx)
                walk(arc.head, on_path, taken)
                taken.pop()
                on_path.remove(arc.head)

        walk(inst.source, {inst.source}, [])
    else:
        m = inst.node_count - 1
        combos = itertools.combinations(range(len(inst.arcs)), m)
        for steps, combo in enumerate(combos):
            if steps > work_limit:
                raise EnumerationLimit("tree enumeration work limit exceeded")
            uf = _UnionFind(inst.node_count)
            if all(uf.union(inst.arcs[i].tail, inst.arcs[i].head) for i in combo):
                image = _vector_sum(inst.p, [inst.arcs[i].cost for i in combo])
                solutions.append(Solution(tree_id(tuple(combo)), image))
                if len(solutions) > limit:
                    raise EnumerationLimit("more trees than the enumeration limit")
    if not solutions:  # pragma: no cover - construction validated reachability
        raise ContractViolation("graph instance has no feasible solutions")
    return ExplicitInstance(inst.direction, inst.p, tuple(solutions))


@dataclass
class SolverHandle:
    """One weighted-sum backend bound to an instance, with a call counter.

    ``sigma`` is the contract bound the backend promises, not a measured
    quality.  Every ``solve`` increments the counter by exactly one; the
    counter is lock-protected so concurrent grid evaluation stays exact.
    """

    instance: Instance
    sigma: Fraction
    backend: str
    _calls: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def calls(self) -> int:
        return self._calls

    @property
    def p(self) -> int:
        return self.instance.p

    @property
    def direction(self) -> Direction:
        return self.instance.direction

    def solve(self, weights: WeightVector) -> SolveAnswer:
        with self._lock:
            self._calls += 1
        if self.backend == "explicit-exact":
            return solve_explicit_exact(self.instance, weights)
        if self.backend == "explicit-adversarial":
            return solve_explicit_adversarial(self.instance, weights, self.sigma)
        if self.backend == "shortest-path":
            return solve_shortest_path(self.instance, weights)
        if self.backend == "spanning-tree":
            return solve_spanning_tree(self.instance, weights)
        raise ContractViolation(f"unknown backend {self.backend!r}")


def exact_solver(inst: Instance) -> SolverHandle:
    """Exact (sigma = 1) solver handle with the backend picked per instance."""
    if isinstance(inst, ExplicitInstance):
        return SolverHandle(inst, Fraction(1), "explicit-exact")
    backend = "shortest-path" if inst.kind is GraphKind.SHORTEST_PATH else "spanning-tree"
    return SolverHandle(inst, Fraction(1), backend)


def adversarial_solver(inst: ExplicitInstance, sigma: RationalLike) -> SolverHandle:
    """Adversarial sigma-approximate handle (explicit instances only)."""
    if not isinstance(inst, ExplicitInstance):
        raise ContractViolation("adversarial backend requires an explicit instance")
    sigma = as_rational(sigma)
    if sigma < 1:
        raise ContractViolation("sigma must be >= 1")
    return SolverHandle(inst, sigma, "explicit-adversarial")
