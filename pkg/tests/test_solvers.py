from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from wsapprox import (
    Arc,
    ContractViolation,
    Direction,
    DisconnectedGraph,
    EnumerationLimit,
    ExplicitInstance,
    GraphInstance,
    GraphKind,
    ObjectiveVector,
    Solution,
    UnreachableTarget,
    WeightVector,
    adversarial_solver,
    compute_bounds,
    dominates,
    enumerate_graph_solutions,
    exact_solver,
    solve_explicit_adversarial,
    solve_explicit_exact,
    solve_shortest_path,
    solve_spanning_tree,
)

from conftest import explicit_instances, rationals, weight_vectors

MIN, MAX = Direction.MIN, Direction.MAX
ov = ObjectiveVector.of
wv = WeightVector.of


def explicit(direction, *pairs):
    p = len(pairs[0][1])
    return ExplicitInstance(
        direction, p, tuple(Solution(sid, ObjectiveVector(tuple(img))) for sid, img in pairs)
    )


@pytest.fixture
def three_points():
    return explicit(MIN, ("a", (1, 8)), ("b", (2, 2)), ("c", (8, 1)))


@pytest.fixture
def diamond_graph():
    return GraphInstance(
        MIN,
        2,
        3,
        (
            Arc(0, 2, ov(1, 8)),
            Arc(0, 2, ov(8, 1)),
            Arc(0, 1, ov(1, 1)),
            Arc(1, 2, ov(1, 1)),
        ),
        GraphKind.SHORTEST_PATH,
        source=0,
        target=2,
    )


class TestExplicitExact:
    def test_unit_weights(self, three_points):
        answer = solve_explicit_exact(three_points, wv(1, 1))
        assert answer.solution_id == "b"
        assert answer.scalar == 4

    def test_skewed_weights(self, three_points):
        answer = solve_explicit_exact(three_points, wv(1, "1/8"))
        assert answer.solution_id == "a"
        assert answer.scalar == 2

    def test_singleton(self):
        inst = explicit(MIN, ("only", (3, 4)))
        assert solve_explicit_exact(inst, wv(5, 7)).solution_id == "only"

    def test_max_direction(self, three_points):
        flipped = ExplicitInstance(MAX, 2, three_points.solutions)
        answer = solve_explicit_exact(flipped, wv(1, 1))
        # values 9, 4, 9: tie broken by lexicographically smallest image
        assert answer.solution_id == "a"

    def test_tie_break_by_id(self):
        inst = explicit(MIN, ("z", (1, 1)), ("a", (1, 1)))
        assert solve_explicit_exact(inst, wv(1, 1)).solution_id == "a"

    def test_dimension_mismatch(self, three_points):
        with pytest.raises(ContractViolation):
            solve_explicit_exact(three_points, wv(1, 1, 1))


class TestExplicitAdversarial:
    def test_sigma_one_reduces_to_exact(self, three_points):
        assert solve_explicit_adversarial(three_points, wv(1, 1), 1).solution_id == "b"

    def test_worst_admissible_with_tie(self, three_points):
        answer = solve_explicit_adversarial(three_points, wv(1, 1), "9/4")
        assert answer.solution_id == "a"
        assert answer.scalar == 9

    def test_tight_sigma_keeps_optimum(self, three_points):
        assert solve_explicit_adversarial(three_points, wv(1, 1), 2).solution_id == "b"

    def test_rejects_max_and_small_sigma(self, three_points):
        with pytest.raises(ContractViolation):
            solve_explicit_adversarial(
                ExplicitInstance(MAX, 2, three_points.solutions), wv(1, 1), 2
            )
        with pytest.raises(ContractViolation):
            solve_explicit_adversarial(three_points, wv(1, 1), "1/2")

    @given(explicit_instances(p=2, max_n=8), weight_vectors(), rationals(1, 3))
    @settings(max_examples=150)
    def test_sigma_contract_by_enumeration(self, inst, weights, sigma):
        answer = solve_explicit_adversarial(inst, weights, sigma)
        opt = min(weights.scalarize(s.image) for s in inst.solutions)
        assert answer.scalar <= sigma * opt

    @given(explicit_instances(p=3, max_n=8), weight_vectors(p=3), rationals(1, 3))
    @settings(max_examples=100)
    def test_sigma_efficiency_by_enumeration(self, inst, weights, sigma):
        # The answer sigma-approximates every solution in some objective.
        answer = solve_explicit_adversarial(inst, weights, sigma)
        for s in inst.solutions:
            assert any(answer.image[i] <= sigma * s.image[i] for i in range(3))

    @given(explicit_instances(p=2, max_n=8), weight_vectors())
    @settings(max_examples=150)
    def test_exact_answers_are_nondominated(self, inst, weights):
        answer = solve_explicit_exact(inst, weights)
        assert not any(
            dominates(s.image, answer.image, MIN) for s in inst.solutions
        )


class TestShortestPath:
    def test_balanced_weights_take_detour(self, diamond_graph):
        answer = solve_shortest_path(diamond_graph, wv(1, 1))
        assert answer.arcs == (2, 3)
        assert answer.image.values == (Fraction(2), Fraction(2))
        assert answer.scalar == 4

    def test_skewed_weights_take_direct_arc(self, diamond_graph):
        answer = solve_shortest_path(diamond_graph, wv(1, "1/8"))
        assert answer.arcs == (0,)
        assert answer.scalar == 2

    def test_single_arc(self):
        inst = GraphInstance(
            MIN, 2, 2, (Arc(0, 1, ov(3, 4)),), GraphKind.SHORTEST_PATH, 0, 1
        )
        assert solve_shortest_path(inst, wv(1, 1)).arcs == (0,)

    def test_unreachable_rejected_at_construction(self):
        with pytest.raises(UnreachableTarget):
            GraphInstance(
                MIN, 2, 3, (Arc(0, 1, ov(1, 1)),), GraphKind.SHORTEST_PATH, 0, 2
            )

    def test_source_equals_target_rejected(self):
        with pytest.raises(ContractViolation):
            GraphInstance(
                MIN, 2, 2, (Arc(0, 1, ov(1, 1)),), GraphKind.SHORTEST_PATH, 0, 0
            )


class TestSpanningTree:
    def test_tie_break_keeps_input_order(self):
        inst = GraphInstance(
            MIN,
            2,
            3,
            (Arc(0, 1, ov(1, 3)), Arc(1, 2, ov(3, 1)), Arc(0, 2, ov(2, 2))),
            GraphKind.SPANNING_TREE,
        )
        answer = solve_spanning_tree(inst, wv(1, 1))
        assert answer.arcs == (0, 1)
        assert answer.image.values == (Fraction(4), Fraction(4))

    def test_path_graph_takes_all_edges(self):
        inst = GraphInstance(
            MIN,
            2,
            4,
            (Arc(0, 1, ov(1, 2)), Arc(1, 2, ov(2, 1)), Arc(2, 3, ov(1, 1))),
            GraphKind.SPANNING_TREE,
        )
        assert solve_spanning_tree(inst, wv(3, 5)).arcs == (0, 1, 2)

    def test_forced_cheap_edge(self):
        inst = GraphInstance(
            MIN,
            2,
            3,
            (Arc(0, 1, ov(1, 1)), Arc(1, 2, ov(5, 5)), Arc(0, 2, ov(5, 5))),
            GraphKind.SPANNING_TREE,
        )
        answer = solve_spanning_tree(inst, wv(1, 2))
        assert 0 in answer.arcs and len(answer.arcs) == 2

    def test_disconnected_rejected_at_construction(self):
        with pytest.raises(DisconnectedGraph):
            GraphInstance(
                MIN, 2, 4, (Arc(0, 1, ov(1, 1)), Arc(2, 3, ov(1, 1)), Arc(3, 2, ov(1, 1))),
                GraphKind.SPANNING_TREE,
            )


class TestComputeBounds:
    def test_explicit(self, three_points):
        bounds = compute_bounds(three_points)
        assert bounds.lower == (Fraction(1), Fraction(1))
        assert bounds.upper == (Fraction(8), Fraction(8))

    def test_graph_arc_sums(self, diamond_graph):
        bounds = compute_bounds(diamond_graph)
        assert bounds.lower == (Fraction(1), Fraction(1))
        assert bounds.upper == (Fraction(11), Fraction(11))

    def test_singleton(self):
        inst = explicit(MIN, ("only", ("5/2", 7)))
        bounds = compute_bounds(inst)
        assert bounds.lower == bounds.upper == (Fraction(5, 2), Fraction(7))

    @given(explicit_instances(p=3, max_n=10))
    def test_sandwiches_every_image(self, inst):
        bounds = compute_bounds(inst)
        for s in inst.solutions:
            assert bounds.contains(s.image)


def random_graph_cases():
    from wsapprox import gen_random_graph

    cases = []
    for seed in range(6):
        cases.append(gen_random_graph(5, 8, 2, 1, 5, seed, GraphKind.SHORTEST_PATH))
        cases.append(gen_random_graph(5, 7, 2, 1, 5, seed, GraphKind.SPANNING_TREE))
    return cases


class TestGraphAgainstEnumeration:
    @pytest.mark.parametrize("inst", random_graph_cases())
    def test_solver_matches_enumerated_optimum(self, inst):
        explicit_form = enumerate_graph_solutions(inst)
        solver = exact_solver(inst)
        for weights in (wv(1, 1), wv(1, 5), wv("1/3", 2)):
            answer = solver.solve(weights)
            best = min(weights.scalarize(s.image) for s in explicit_form.solutions)
            assert answer.scalar == best
            # bounds sandwich every enumerated image
            bounds = compute_bounds(inst)
            for s in explicit_form.solutions:
                assert bounds.contains(s.image)

    @pytest.mark.parametrize("inst", random_graph_cases())
    def test_exact_graph_answers_are_nondominated(self, inst):
        from wsapprox import pareto_front

        explicit_form = enumerate_graph_solutions(inst)
        front = pareto_front(explicit_form)
        solver = exact_solver(inst)
        for weights in (wv(1, 1), wv(4, 1), wv(1, "7/2")):
            answer = solver.solve(weights)
            assert answer.solution_id in front

    def test_enumeration_limit(self, diamond_graph):
        with pytest.raises(EnumerationLimit):
            enumerate_graph_solutions(diamond_graph, limit=1)


class TestSolverHandle:
    def test_counts_every_call(self, three_points):
        handle = exact_solver(three_points)
        assert handle.calls == 0
        handle.solve(wv(1, 1))
        handle.solve(wv(1, 2))
        assert handle.calls == 2

    def test_adversarial_requires_explicit(self, diamond_graph):
        with pytest.raises(ContractViolation):
            adversarial_solver(diamond_graph, 2)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ContractViolation):
            explicit(MIN, ("a", (1, 2)), ("a", (2, 1)))

    def test_empty_instance_rejected(self):
        with pytest.raises(ContractViolation):
            ExplicitInstance(MIN, 2, ())
