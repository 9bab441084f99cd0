"""Instance generators and the strict JSON instance schema.

The two hand constructions (one minimization, one maximization) pit the
supported solutions against a single unsupported point and are the standard
stress inputs for the tightness and impossibility checks.  Random generators
draw values on a fixed-denominator lattice so downstream exact arithmetic
stays small, and are fully determined by their seed.
"""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction
from typing import Any

from .core import (
    ContractViolation,
    Direction,
    ObjectiveVector,
    RationalLike,
    as_rational,
    format_rational,
    parse_rational,
)
from .solvers import (
    Arc,
    ExplicitInstance,
    GraphInstance,
    GraphKind,
    Instance,
    Solution,
)

SCHEMA_VERSION = 1

DEFAULT_LATTICE_DENOMINATOR = 1000


class InstanceFormatError(ValueError):
    """Instance JSON that does not match the schema."""


def gen_tightness_min(p: int, big_m: RationalLike) -> ExplicitInstance:
    """Minimization instance whose unsupported point defeats any deficit bound.

    p axis points carry value M in their own coordinate and 1/p elsewhere;
    the extra point sits at (M+1)/p in every coordinate.  The axis points
    are supported, the extra point is nondominated but unsupported, and the
    ratio between them in the peak coordinate is p*M/(M+1).
    """
    big_m = as_rational(big_m)
    if p < 2 or big_m <= 1:
        raise ContractViolation("need p >= 2 and M > 1")
    off = Fraction(1, p)
    solutions = [
        Solution(f"y{j + 1}", ObjectiveVector(tuple(big_m if i == j else off for i in range(p))))
        for j in range(p)
    ]
    center = (big_m + 1) / p
    solutions.append(Solution("ytilde", ObjectiveVector(tuple(center for _ in range(p)))))
    return ExplicitInstance(Direction.MIN, p, tuple(solutions))


def gen_max_counterexample(p: int, big_m: RationalLike) -> ExplicitInstance:
    """Maximization instance where supported points fail the center by factor M.

    Same axis layout as the minimization construction but the extra point is
    at M/p per coordinate, so each supported point misses it by a ratio of
    exactly M in every coordinate other than its own peak.
    """
    big_m = as_rational(big_m)
    if p < 2 or big_m <= 1:
        raise ContractViolation("need p >= 2 and M > 1")
    off = Fraction(1, p)
    solutions = [
        Solution(f"x{j + 1}", ObjectiveVector(tuple(big_m if i == j else off for i in range(p))))
        for j in range(p)
    ]
    center = big_m / p
    solutions.append(Solution("xtilde", ObjectiveVector(tuple(center for _ in range(p)))))
    return ExplicitInstance(Direction.MAX, p, tuple(solutions))


def _lattice_value(
    rng: random.Random, low: Fraction, high: Fraction, denominator: int
) -> Fraction:
    lo = math.ceil(low * denominator)
    hi = math.floor(high * denominator)
    if lo > hi:
        raise ContractViolation("value range contains no lattice point")
    return Fraction(rng.randint(lo, hi), denominator)


def gen_random_explicit(
    p: int,
    n: int,
    value_low: RationalLike,
    value_high: RationalLike,
    seed: int,
    denominator: int = DEFAULT_LATTICE_DENOMINATOR,
    direction: Direction = Direction.MIN,
) -> ExplicitInstance:
    """Seeded explicit instance with uniform lattice rationals as images."""
    low = as_rational(value_low)
    high = as_rational(value_high)
    if n < 1 or not 0 < low <= high:
        raise ContractViolation("need n >= 1 and 0 < value_low <= value_high")
    rng = random.Random(seed)
    solutions = tuple(
        Solution(
            f"s{i + 1}",
            ObjectiveVector(tuple(_lattice_value(rng, low, high, denominator) for _ in range(p))),
        )
        for i in range(n)
    )
    return ExplicitInstance(direction, p, solutions)


def gen_random_graph(
    node_count: int,
    arc_count: int,
    p: int,
    cost_low: RationalLike,
    cost_high: RationalLike,
    seed: int,
    kind: GraphKind,
    denominator: int = DEFAULT_LATTICE_DENOMINATOR,
) -> GraphInstance:
    """Seeded graph instance built from a random skeleton plus extra arcs.

    Shortest-path instances chain the source to the target through a random
    permutation of the interior nodes, so the target is always reachable;
    spanning-tree instances start from a random tree, so the graph is always
    connected.
    """
    low = as_rational(cost_low)
    high = as_rational(cost_high)
    if node_count < 2 or arc_count < node_count - 1:
        raise ContractViolation("need node_count >= 2 and arc_count >= node_count - 1")
    if not 0 < low <= high:
        raise ContractViolation("need 0 < cost_low <= cost_high")
    rng = random.Random(seed)
    pairs: list[tuple[int, int]] = []
    if kind is GraphKind.SHORTEST_PATH:
        interior = list(range(1, node_count - 1))
        rng.shuffle(interior)
        chain = [0] + interior + [node_count - 1]
        pairs.extend((chain[i], chain[i + 1]) for i in range(node_count - 1))
    else:
        for i in range(1, node_count):
            pairs.append((rng.randrange(i), i))
    while len(pairs) < arc_count:
        tail = rng.randrange(node_count)
        head = rng.randrange(node_count)
        if tail != head:
            pairs.append((tail, head))
    arcs = tuple(
        Arc(
            tail,
            head,
            ObjectiveVector(tuple(_lattice_value(rng, low, high, denominator) for _ in range(p))),
        )
        for tail, head in pairs
    )
    return GraphInstance(
        Direction.MIN, p, node_count, arcs, kind, source=0, target=node_count - 1
    )


def canonical_dumps(payload: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _rational_list(values) -> list[str]:
    return [format_rational(v) for v in values]


def instance_to_json(inst: Instance) -> dict[str, Any]:
    if isinstance(inst, ExplicitInstance):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "explicit",
            "direction": inst.direction.value,
            "p": inst.p,
            "solutions": [
                {"id": s.id, "f": _rational_list(s.image)} for s in inst.solutions
            ],
        }
    payload: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": inst.kind.value,
        "direction": inst.direction.value,
        "p": inst.p,
        "nodes": inst.node_count,
        "arcs": [
            {"from": a.tail, "to": a.head, "cost": _rational_list(a.cost)}
            for a in inst.arcs
        ],
    }
    if inst.kind is GraphKind.SHORTEST_PATH:
        payload["source"] = inst.source
        payload["target"] = inst.target
    return payload


def _require_keys(data: dict, required: set[str], optional: set[str], what: str) -> None:
    keys = set(data)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise InstanceFormatError(f"{what}: missing fields {sorted(missing)}")
    if unknown:
        raise InstanceFormatError(f"{what}: unknown fields {sorted(unknown)}")


def _parse_positive_vector(values: Any, p: int, what: str) -> ObjectiveVector:
    if not isinstance(values, list) or len(values) != p:
        raise InstanceFormatError(f"{what}: expected a list of {p} rationals")
    try:
        return ObjectiveVector(tuple(parse_rational(v) for v in values))
    except ContractViolation as exc:
        raise InstanceFormatError(f"{what}: {exc}") from exc


def _parse_index(value: Any, node_count: int, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < node_count:
        raise InstanceFormatError(f"{what}: expected a node index below {node_count}")
    return value


def instance_from_json(data: Any) -> Instance:
    """Parse an instance dict; unknown fields are rejected."""
    if not isinstance(data, dict):
        raise InstanceFormatError("instance JSON must be an object")
    kind = data.get("kind")
    if kind == "explicit":
        _require_keys(
            data,
            {"kind", "direction", "p", "solutions"},
            {"schema_version"},
            "explicit instance",
        )
    elif kind in (GraphKind.SHORTEST_PATH.value, GraphKind.SPANNING_TREE.value):
        required = {"kind", "direction", "p", "nodes", "arcs"}
        optional = {"schema_version", "source", "target"}
        if kind == GraphKind.SHORTEST_PATH.value:
            required |= {"source", "target"}
            optional -= {"source", "target"}
        _require_keys(data, required, optional, f"{kind} instance")
    else:
        raise InstanceFormatError(f"unknown instance kind {kind!r}")
    if data.get("direction") not in ("min", "max"):
        raise InstanceFormatError("direction must be 'min' or 'max'")
    direction = Direction(data["direction"])
    p = data.get("p")
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        raise InstanceFormatError("p must be an integer >= 2")

    try:
        if kind == "explicit":
            raw = data["solutions"]
            if not isinstance(raw, list) or not raw:
                raise InstanceFormatError("solutions must be a nonempty list")
            solutions = []
            for entry in raw:
                if not isinstance(entry, dict):
                    raise InstanceFormatError("each solution must be an object")
                _require_keys(entry, {"id", "f"}, set(), "solution")
                if not isinstance(entry["id"], str) or not entry["id"]:
                    raise InstanceFormatError("solution id must be a nonempty string")
                solutions.append(
                    Solution(entry["id"], _parse_positive_vector(entry["f"], p, "solution image"))
                )
            return ExplicitInstance(direction, p, tuple(solutions))

        nodes = data["nodes"]
        if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 2:
            raise InstanceFormatError("nodes must be an integer >= 2")
        raw = data["arcs"]
        if not isinstance(raw, list) or not raw:
            raise InstanceFormatError("arcs must be a nonempty list")
        arcs = []
        for entry in raw:
            if not isinstance(entry, dict):
                raise InstanceFormatError("each arc must be an object")
            _require_keys(entry, {"from", "to", "cost"}, set(), "arc")
            arcs.append(
                Arc(
                    _parse_index(entry["from"], nodes, "arc tail"),
                    _parse_index(entry["to"], nodes, "arc head"),
                    _parse_positive_vector(entry["cost"], p, "arc cost"),
                )
            )
        graph_kind = GraphKind(kind)
        source = target = 0
        if graph_kind is GraphKind.SHORTEST_PATH:
            source = _parse_index(data["source"], nodes, "source")
            target = _parse_index(data["target"], nodes, "target")
        return GraphInstance(direction, p, nodes, tuple(arcs), graph_kind, source, target)
    except ContractViolation as exc:
        raise InstanceFormatError(str(exc)) from exc


def load_instance(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"cannot read instance {path}: {exc}") from exc
    return instance_from_json(data)


def dump_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(canonical_dumps(instance_to_json(inst)))
