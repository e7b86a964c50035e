import random

import pytest

from lnt.anonymity import degree_classes, topological_anonymity
from lnt.errors import EmptyGraphError
from lnt.graph import ChannelGraph

from conftest import cycle_graph, graph_from, path_graph, random_channel_graph, star_graph


class TestDegreeClasses:
    def test_star(self):
        classes = degree_classes(star_graph(3))
        assert classes[3] == {"hub"}
        assert classes[1] == {"leaf0", "leaf1", "leaf2"}

    def test_cycle_is_one_class(self):
        classes = degree_classes(cycle_graph(4))
        assert set(classes) == {2}
        assert len(classes[2]) == 4

    def test_path(self):
        classes = degree_classes(path_graph())
        assert classes == {1: {"a", "c"}, 2: {"b"}}

    def test_empty_graph(self):
        with pytest.raises(EmptyGraphError):
            degree_classes(ChannelGraph([], {}))


class TestTopologicalAnonymity:
    def test_five_cycle_paper_literal(self):
        result = topological_anonymity(cycle_graph(5), epsilon=4)
        assert result.ta == 0.0

    def test_five_cycle_flipped(self):
        result = topological_anonymity(cycle_graph(5), epsilon=4, sense="indistinguishability")
        assert result.ta == 1.0

    def test_star_on_four_nodes_is_minus_one(self):
        result = topological_anonymity(star_graph(3), epsilon=4)
        assert result.ta == -1.0

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            topological_anonymity(cycle_graph(5), epsilon=1)

    def test_sense_validation(self):
        with pytest.raises(ValueError):
            topological_anonymity(cycle_graph(5), sense="upside_down")

    def test_rows_reproduce_score(self):
        rng = random.Random(83)
        for _ in range(20):
            g = random_channel_graph(rng)
            if g.n == 0:
                continue
            result = topological_anonymity(g, epsilon=3)
            reward = sum(c.class_size * c.boolean_flag for c in result.per_class)
            penalty = sum(c.class_size for c in result.per_class if c.penalized)
            assert result.ta == (reward - penalty) / g.n
            assert -1.0 <= result.ta <= 1.0

    def test_senses_partition_the_node_count(self):
        rng = random.Random(89)
        for _ in range(15):
            g = random_channel_graph(rng)
            lit = topological_anonymity(g, epsilon=4, sense="paper_literal")
            flip = topological_anonymity(g, epsilon=4, sense="indistinguishability")
            reward_lit = sum(c.class_size * c.boolean_flag for c in lit.per_class)
            reward_flip = sum(c.class_size * c.boolean_flag for c in flip.per_class)
            assert reward_lit + reward_flip == g.n

    def test_non_increasing_in_epsilon(self):
        rng = random.Random(97)
        for _ in range(20):
            g = random_channel_graph(rng)
            scores = [topological_anonymity(g, epsilon=e).ta for e in range(2, 8)]
            assert all(a >= b for a, b in zip(scores, scores[1:]))

    def test_isomorphism_invariance(self):
        rng = random.Random(101)
        for _ in range(10):
            g = random_channel_graph(rng)
            mapping = {v: f"renamed_{i}" for i, v in enumerate(reversed(g.nodes()))}
            relabeled = graph_from(
                [(mapping[u], mapping[v], e.cost) for u, v, e in g.edges()],
                extra_nodes=[mapping[v] for v in g.nodes()],
            )
            for sense in ("paper_literal", "indistinguishability"):
                assert (
                    topological_anonymity(g, 4, sense).ta
                    == topological_anonymity(relabeled, 4, sense).ta
                )
