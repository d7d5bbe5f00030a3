import random

import pytest

from baseswap.exchange import BasisPair, apply_and_validate
from baseswap.gen import (
    random_bispanning_graph,
    random_exchange_walk,
    random_forbidden_set,
)
from baseswap.graphic import (
    pick_reduction_vertex,
    solve_graphic_gabow,
    solve_graphic_white,
    vertex_span,
)
from baseswap.matroid import GraphicMatroid, GroundSetError, Multigraph
from baseswap.reductions import IncompatiblePairsError

from conftest import A, B, C, D, E, F, DT_EDGES


class TestWhite:
    def test_k4_within_bounds(self, k4):
        m, x, y = k4
        seq = solve_graphic_white(m.graph, x, y)
        r = m.full_rank
        assert 1 <= seq.length <= r * r
        assert seq.width <= 2 * (r - 1)
        final = apply_and_validate(x, seq)
        assert final.first == y.first

    def test_k4_single_forbidden_edge(self, k4):
        # F = {b} fits inside (X1 n Y1) u (X2 n Y2) for the swapped target
        m, x, y = k4
        target = y.swapped()
        seq = solve_graphic_white(m.graph, x, target, forbidden={B})
        final = apply_and_validate(x, seq, forbidden={B})
        assert final.first == target.first

    def test_same_pair_empty(self, k4):
        m, x, _ = k4
        assert solve_graphic_white(m.graph, x, x).length == 0

    def test_figure_three_refusal(self, k4):
        # F = {b, e} spans four vertices and must be refused outright
        m, x, y = k4
        with pytest.raises(GroundSetError):
            solve_graphic_white(m.graph, x, y.swapped(), forbidden={B, E})

    def test_incompatible_rejected(self, k4):
        m, x, _ = k4
        unequal_union = BasisPair(frozenset({A, B, D}), frozenset({D, E, F}), m)
        with pytest.raises(IncompatiblePairsError):
            solve_graphic_white(m.graph, x, unequal_union)

    def test_non_basis_member_rejected(self, k4):
        m, x, _ = k4
        not_forests = BasisPair(frozenset({A, B, D}), frozenset({C, E, F}), m)
        with pytest.raises(IncompatiblePairsError):
            solve_graphic_white(m.graph, x, not_forests)

    def test_random_instances_meet_bounds(self):
        rng = random.Random(20240809)
        for _ in range(40):
            n = rng.randint(4, 24)
            g, x = random_bispanning_graph(n, rng)
            m = GraphicMatroid(g)
            y = random_exchange_walk(m, x, rng.randint(1, n), rng)
            f = random_forbidden_set(x, y, g, rng)
            seq = solve_graphic_white(g, x, y, forbidden=f)
            final = apply_and_validate(x, seq, forbidden=f)
            assert final.first == y.first and final.second == y.second
            r = m.full_rank
            assert seq.length <= r * r
            assert seq.width <= 2 * (r - 1)


class TestGabow:
    def test_dt_two_steps(self, dt):
        m, x = dt
        seq = solve_graphic_gabow(m.graph, x, h=0)
        assert seq.length == 2
        final = apply_and_validate(x, seq)
        assert final.first == x.second

    def test_k4_every_h(self, k4):
        m, x, _ = k4
        for h in range(6):
            seq = solve_graphic_gabow(m.graph, x, h)
            assert seq.length == 3
            assert h in seq.steps[-1]
            final = apply_and_validate(x, seq)
            assert final.first == x.second and final.second == x.first

    def test_wheel_reversal_length_four(self):
        # W4: hub 0, rim 1-2-3-4; a bispanning partition
        g = Multigraph(
            {0: (0, 1), 1: (0, 2), 2: (0, 3), 3: (0, 4),
             4: (1, 2), 5: (2, 3), 6: (3, 4), 7: (4, 1)}
        )
        m = GraphicMatroid(g)
        x = BasisPair(frozenset({0, 4, 5, 6}), frozenset({1, 2, 3, 7}), m)
        assert m.is_basis(x.first) and m.is_basis(x.second)
        seq = solve_graphic_gabow(g, x, h=3)
        assert seq.length == 4

    def test_strictly_monotone(self):
        rng = random.Random(99)
        for _ in range(20):
            n = rng.randint(4, 20)
            g, x = random_bispanning_graph(n, rng)
            h = rng.choice(sorted(x.union))
            seq = solve_graphic_gabow(g, x, h)
            r = GraphicMatroid(g).full_rank
            assert seq.length == r and seq.width == 1
            assert h in seq.steps[-1]
            first = set(x.first)
            for k, (e, f) in enumerate(seq):
                assert e in first and e in x.first and f in x.second
                first.discard(e)
                first.add(f)
                # after step k, |first ^ X2| = 2 (r - k - 1)
                assert len(first - x.second) == r - k - 1

    def test_not_bispanning_rejected(self):
        g = Multigraph({0: (1, 2), 1: (2, 3), 2: (1, 3)})
        m = GraphicMatroid(g)
        with pytest.raises(GroundSetError):
            solve_graphic_gabow(g, BasisPair(frozenset({0, 1}), frozenset({2}), m), h=0)


class TestPickVertex:
    def test_dt_degree_two(self, dt):
        m, _ = dt
        vertex, kind = pick_reduction_vertex(m.graph)
        assert kind == "degree2" and vertex in (1, 3)

    def test_k4_avoids_forbidden_star(self, k4):
        # all four vertices have degree 3; F = {b} = edge 23 blocks 2 and 3
        m, _, _ = k4
        vertex, kind = pick_reduction_vertex(m.graph, forbidden={B})
        assert kind == "degree3" and vertex in (1, 4)
        assert B not in m.graph.incident(vertex)

    def test_avoids_last_edge(self, k4):
        m, _, _ = k4
        vertex, kind = pick_reduction_vertex(m.graph, last=A)  # a = 12
        assert vertex not in (1, 2)

    def test_covered_bispanning_always_has_low_degree(self):
        # average degree below four: a 4-regular covered bispanning graph
        # cannot exist, so the picker always succeeds on generated instances
        rng = random.Random(5)
        for _ in range(10):
            g, _ = random_bispanning_graph(rng.randint(4, 12), rng)
            vertex, kind = pick_reduction_vertex(g)
            deg = g.degree()
            assert deg[vertex] in (2, 3)
