import io

import numpy as np
import pytest

from bippr import EdgeListParseError, Graph, RandomStream, degree, load_edge_list, step
from bippr.graph import step_many

from conftest import random_connected


def load(text, weighted=False):
    return load_edge_list(io.StringIO(text), weighted=weighted)


class TestLoadEdgeList:
    def test_path_graph(self):
        g = load("a b\nb c")
        assert g.n == 3
        assert g.m == 2
        assert g.degrees.tolist() == [1.0, 2.0, 1.0]
        assert g.labels == ["a", "b", "c"]

    def test_duplicate_edges_merge_weights(self):
        g = load("a b 2.0\na b 3.0", weighted=True)
        assert g.n == 2
        assert g.m == 1
        assert g.degree(0) == 5.0

    def test_self_loop(self):
        g = load("a a")
        assert g.n == 1
        assert g.m == 1
        assert g.degree(0) == 1.0

    def test_comments_and_blank_lines(self):
        g = load("# header\n\na b  # trailing\n b c\n")
        assert g.n == 3
        assert g.m == 2

    def test_reverse_duplicate_merges(self):
        g = load("a b 1.5\nb a 2.5", weighted=True)
        assert g.m == 1
        assert g.degree(0) == 4.0

    def test_wrong_token_count(self):
        with pytest.raises(EdgeListParseError, match="line 2"):
            load("a b\na b c d")

    def test_weight_without_flag_is_error(self):
        with pytest.raises(EdgeListParseError, match="line 1"):
            load("a b 2.0")

    def test_non_numeric_weight(self):
        with pytest.raises(EdgeListParseError, match="non-numeric"):
            load("a b x", weighted=True)

    def test_nonpositive_weight(self):
        with pytest.raises(EdgeListParseError, match="positive"):
            load("a b 0", weighted=True)
        with pytest.raises(EdgeListParseError, match="positive"):
            load("a b -1.5", weighted=True)

    def test_first_appearance_label_order(self):
        g = load("z y\ny x")
        assert g.labels == ["z", "y", "x"]
        assert g.node_id("x") == 2


class TestDegree:
    def test_star_center(self, s3):
        assert degree(s3, 0) == 3.0

    def test_k2(self, k2):
        assert degree(k2, 0) == 1.0
        assert degree(k2, 1) == 1.0

    def test_weighted_single_edge(self):
        g = load("a b 2.5", weighted=True)
        assert degree(g, 0) == 2.5

    def test_out_of_range(self, k2):
        with pytest.raises(ValueError):
            degree(k2, 2)
        with pytest.raises(ValueError):
            degree(k2, -1)


class TestInvariants:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_symmetry_and_degree_sum(self, seed):
        g = random_connected(60, "er", seed)
        g.check()
        assert abs(g.degrees.sum() - 2.0 * g.total_weight) <= 1e-9 * g.total_weight

    def test_weighted_degree_sum(self):
        g = load("a b 2.0\nb c 0.5\na c 1.25", weighted=True)
        g.check()
        assert g.degrees.sum() == pytest.approx(2 * g.total_weight, abs=1e-12)


class TestStep:
    def test_sole_neighbor(self, k2):
        assert step(k2, 0, RandomStream(0)) == 1

    def test_self_loop_only(self):
        g = load("a a")
        assert step(g, 0, RandomStream(0)) == 0

    def test_isolated_node_rejected(self):
        g = Graph.from_edges([(0, 1)], n=3)
        with pytest.raises(ValueError, match="isolated"):
            step(g, 2, RandomStream(0))

    def test_triangle_uniform_frequency(self, k3):
        rng = RandomStream(11)
        n = 100_000
        nodes = step_many(k3, np.zeros(n, dtype=np.int64), rng)
        freq1 = (nodes == 1).mean()
        freq2 = (nodes == 2).mean()
        assert abs(freq1 - 0.5) < 0.01
        assert abs(freq2 - 0.5) < 0.01

    def test_weighted_distribution_within_4_sigma(self):
        g = load("a b 3.0\na c 1.0", weighted=True)
        rng = RandomStream(5)
        n = 100_000
        nodes = step_many(g, np.zeros(n, dtype=np.int64), rng)
        for target, p in [(1, 0.75), (2, 0.25)]:
            sigma = np.sqrt(p * (1 - p) / n)
            assert abs((nodes == target).mean() - p) < 4 * sigma

    def test_deterministic_given_stream(self, k3):
        a = step_many(k3, np.zeros(1000, dtype=np.int64), RandomStream(9, 3))
        b = step_many(k3, np.zeros(1000, dtype=np.int64), RandomStream(9, 3))
        assert np.array_equal(a, b)
