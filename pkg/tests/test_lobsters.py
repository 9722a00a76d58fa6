from __future__ import annotations

import random

import pytest

from lobsterlab.errors import GraphStructureError
from lobsterlab.graphs import build_graph
from lobsterlab.lobsters import (
    Branch,
    Lobster,
    edge_set_of,
    lobster_decompose,
    reassemble,
)
from lobsterlab.matrices import matrix_to_graph


def star_graph(leaves):
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_lobster(rng: random.Random) -> Lobster:
    """A random decomposition, used to exercise the reassembly round trip."""
    spine_len = rng.randint(1, 5)
    next_id = [0]

    def fresh() -> int:
        next_id[0] += 1
        return next_id[0] - 1

    spine = tuple(fresh() for _ in range(spine_len))
    lobes = []
    pendants = []
    for _ in spine:
        branches = []
        for _ in range(rng.randint(0, 3)):
            center = fresh()
            leaves = tuple(fresh() for _ in range(rng.randint(1, 3)))
            branches.append(Branch(center, leaves))
        lobes.append(tuple(branches))
        pendants.append(tuple(fresh() for _ in range(rng.randint(0, 2))))
    return Lobster(spine, tuple(lobes), tuple(pendants))


class TestRoundTrip:
    def test_random_lobsters_reassemble_and_redecompose(self):
        rng = random.Random(421)
        for _ in range(60):
            lob = random_lobster(rng)
            t = reassemble(lob)
            # ids were already dense and sorted, so edge sets must agree
            redone = lobster_decompose(t)
            assert edge_set_of(redone) == t.edges

    def test_round_trip_on_fixture(self, lobster28_matrix):
        g, _ = matrix_to_graph(lobster28_matrix)
        lob = lobster_decompose(g)
        assert edge_set_of(lob) == g.edges


class TestDecompose:
    def test_two_spined_lobster_fixture(self, lobster28_matrix):
        g, _ = matrix_to_graph(lobster28_matrix)
        lob = lobster_decompose(g)
        assert lob.spine_length == 2
        # ids 14 and 27 carry the two spinal vertices in the canonical grid
        assert set(lob.spine) == {14, 27}
        counts = {v: lob.branch_leaf_counts(i) for i, v in enumerate(lob.spine)}
        assert counts[27] == (2, 2, 3)
        assert counts[14] == (2, 3, 3)
        pendants = {v: len(lob.pendants[i]) for i, v in enumerate(lob.spine)}
        assert pendants[27] == 3 and pendants[14] == 2

    def test_star(self):
        lob = lobster_decompose(star_graph(3))
        assert lob.spine == (0,)
        assert lob.lobes == ((),)
        assert set(lob.pendants[0]) == {1, 2, 3}

    def test_uniform_lobster_fixture(self, lobster26_matrix):
        g, _ = matrix_to_graph(lobster26_matrix)
        lob = lobster_decompose(g)
        assert lob.spine_length == 2
        assert lob.branch_leaf_counts(0) == (3, 3, 3)
        assert lob.branch_leaf_counts(1) == (3, 3, 3)
        assert lob.pendant_counts == (0, 0)

    def test_k2(self):
        lob = lobster_decompose(build_graph(2, [(0, 1)]))
        assert lob.spine == (0,)
        assert lob.pendants == ((1,),)

    def test_deeper_tree_rejected(self):
        legs = build_graph(
            10,
            [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7), (7, 8), (8, 9)],
        )
        with pytest.raises(GraphStructureError):
            lobster_decompose(legs)

    def test_base_of_base_is_path(self, lobster26_matrix):
        from lobsterlab.graphs import base, is_tree

        g, _ = matrix_to_graph(lobster26_matrix)
        bb = base(base(g))
        assert bb.num_vertices <= 1 or (
            is_tree(bb) and all(bb.degree(v) <= 2 for v in bb.vertices())
        )
