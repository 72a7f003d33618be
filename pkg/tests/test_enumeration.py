"""Enumeration engine: exact counts against naive oracles, translation
identities, determinism, streaming contracts, and budgets."""

import pytest

from polylat.enumeration import (BudgetExceededError, EnsembleSpec,
                                 InvalidSpecError, count_by_topology,
                                 count_tables, enumerate_ensemble,
                                 max_topology_class)
from polylat.lattice import lex_min_site, validate, visits
from polylat.topology import comb_signature, tree_key

import oracles


def spec(cls, d, n, boundary="penetrable", convention="translation-classes"):
    return EnsembleSpec(cls, d, n, boundary, convention)


class TestSpecValidation:
    def test_from_origin_walks_only(self):
        with pytest.raises(InvalidSpecError):
            EnsembleSpec("tree", 2, 3, "penetrable", "from-origin")

    def test_dimension_and_size(self):
        with pytest.raises(InvalidSpecError):
            EnsembleSpec("tree", 1, 3)
        with pytest.raises(InvalidSpecError):
            EnsembleSpec("tree", 2, -1)

    def test_budget_error_carries_estimate(self):
        with pytest.raises(BudgetExceededError) as err:
            enumerate_ensemble(spec("tree", 2, 40))
        assert err.value.estimate > 1e20

    def test_budget_override(self):
        s = enumerate_ensemble(spec("walk", 2, 3), size_limit=3)
        assert s.total == 36
        with pytest.raises(BudgetExceededError):
            enumerate_ensemble(spec("walk", 2, 4), size_limit=3)

    def test_node_budget(self):
        with pytest.raises(BudgetExceededError):
            enumerate_ensemble(spec("walk", 2, 8), node_budget=10)


class TestCountsAgainstOracles:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_animals_d2_match_subset_oracle(self, n):
        assert enumerate_ensemble(spec("animal", 2, n)).total == \
            oracles.animal_count_by_sites(2, n)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_animals_d3_match_subset_oracle(self, n):
        assert enumerate_ensemble(spec("animal", 3, n)).total == \
            oracles.animal_count_by_sites(3, n)

    @pytest.mark.parametrize("d,n", [(2, n) for n in range(1, 8)]
                             + [(3, n) for n in range(1, 6)])
    def test_trees_match_matrix_tree_oracle(self, d, n):
        assert enumerate_ensemble(spec("tree", d, n)).total == \
            oracles.tree_count_by_sites(d, n)

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_polygons_match_subset_oracle(self, n):
        assert enumerate_ensemble(spec("polygon", 2, n)).total == \
            oracles.polygon_count(2, n)

    def test_polygon_d3_small(self):
        assert enumerate_ensemble(spec("polygon", 3, 4)).total == \
            oracles.polygon_count(3, 4) == 3

    @pytest.mark.parametrize("n", range(0, 6))
    def test_combs_match_leaf_pair_oracle(self, n):
        assert enumerate_ensemble(spec("comb", 2, n)).total == \
            oracles.comb_count_by_edges(2, n)

    def test_walk_small_closed_forms(self):
        for d in (2, 3):
            assert enumerate_ensemble(spec("walk", d, 1)).total == 2 * d
            assert enumerate_ensemble(spec("walk", d, 2)).total == 2 * d * (2 * d - 1)


class TestPaperAnchoredCounts:
    def test_walks_d3_from_origin_4_steps(self):
        s = enumerate_ensemble(spec("walk", 3, 4, "penetrable", "from-origin"))
        assert s.total == 726

    def test_trees_d3_contains_origin_census(self):
        s = enumerate_ensemble(spec("tree", 3, 5, "penetrable", "contains-origin"))
        assert s.total == 3390

    def test_tree_census_by_topology(self):
        table = count_by_topology(spec("tree", 3, 5, "penetrable",
                                       "contains-origin"))
        assert sorted(tc.count for tc in table.classes.values()) == [75, 1500, 1815]

    def test_odd_polygons_vanish(self):
        for n in (2, 3, 5, 7):
            assert enumerate_ensemble(spec("polygon", 3, n)).total == 0

    def test_degenerate_sizes(self):
        # one-site walk/comb, empty animals/trees/rings at size 0
        for cls, expect in (("walk", 1), ("comb", 1), ("tree", 0),
                            ("animal", 0), ("polygon", 0)):
            assert enumerate_ensemble(spec(cls, 2, 0)).total == expect


class TestTranslationIdentities:
    @pytest.mark.parametrize("cls,d,n", [
        ("animal", 2, 5), ("tree", 2, 6), ("tree", 3, 4),
        ("polygon", 2, 8), ("walk", 2, 5), ("comb", 2, 5), ("comb", 3, 3),
    ])
    def test_contains_origin_is_size_times_classes(self, cls, d, n):
        bar = enumerate_ensemble(spec(cls, d, n)).total
        oo = enumerate_ensemble(spec(cls, d, n, "penetrable",
                                     "contains-origin")).total
        factor = n + 1 if cls in ("walk", "comb") else n
        assert oo == factor * bar

    @pytest.mark.parametrize("cls,d,n", [
        ("animal", 2, 5), ("tree", 2, 6), ("walk", 2, 6), ("comb", 2, 5),
        ("polygon", 2, 8),
    ])
    def test_containment_chain_counts(self, cls, d, n):
        bar = enumerate_ensemble(spec(cls, d, n)).total
        plus = enumerate_ensemble(spec(cls, d, n, "impenetrable",
                                       "contains-origin")).total
        oo = enumerate_ensemble(spec(cls, d, n, "penetrable",
                                     "contains-origin")).total
        assert bar <= plus <= oo

    def test_walk_from_origin_equals_translation_classes(self):
        for d, n in ((2, 6), (3, 4)):
            assert enumerate_ensemble(spec("walk", d, n)).total == \
                enumerate_ensemble(spec("walk", d, n, "penetrable",
                                        "from-origin")).total


class TestSummaries:
    def test_histogram_sums_to_total(self):
        for convention in ("translation-classes", "contains-origin"):
            for boundary in ("penetrable", "impenetrable"):
                s = enumerate_ensemble(spec("tree", 2, 5, boundary, convention))
                assert sum(s.visit_histogram.values()) == s.total

    def test_no_zero_visit_entries(self):
        # every convention anchors the polymer to touch the surface
        s = enumerate_ensemble(spec("animal", 2, 5, "impenetrable",
                                    "contains-origin"))
        assert 0 not in s.visit_histogram
        assert min(s.visit_histogram) >= 1

    def test_deterministic_replay(self):
        a = enumerate_ensemble(spec("comb", 2, 5, "penetrable", "contains-origin"))
        b = enumerate_ensemble(spec("comb", 2, 5, "penetrable", "contains-origin"))
        assert a.total == b.total and a.visit_histogram == b.visit_histogram
        stream_a, stream_b = [], []
        enumerate_ensemble(spec("tree", 2, 4, "penetrable", "contains-origin"),
                           consumer=stream_a.append)
        enumerate_ensemble(spec("tree", 2, 4, "penetrable", "contains-origin"),
                           consumer=stream_b.append)
        assert stream_a == stream_b

    def test_threads_give_identical_values(self):
        for cls, d, n in (("tree", 2, 6), ("comb", 2, 6), ("walk", 3, 4)):
            sequential = enumerate_ensemble(
                spec(cls, d, n, "penetrable", "contains-origin"))
            parallel = enumerate_ensemble(
                spec(cls, d, n, "penetrable", "contains-origin"), threads=2)
            assert sequential.total == parallel.total
            assert sequential.visit_histogram == parallel.visit_histogram
        table_seq = count_by_topology(spec("tree", 2, 6, "penetrable",
                                           "contains-origin"))
        table_par = count_by_topology(spec("tree", 2, 6, "penetrable",
                                           "contains-origin"), threads=2)
        assert {k: (tc.count, tc.visit_histogram)
                for k, tc in table_seq.classes.items()} == \
               {k: (tc.count, tc.visit_histogram)
                for k, tc in table_par.classes.items()}


class TestStreaming:
    def test_emitted_members_are_valid_and_counted(self):
        got = []
        s = enumerate_ensemble(spec("tree", 2, 4, "penetrable",
                                    "contains-origin"), consumer=got.append)
        assert len(got) == s.total
        origin = (0, 0)
        assert len(set(got)) == len(got)
        for p in got:
            assert validate(p)
            assert origin in p.sites

    def test_halfspace_membership(self):
        got = []
        enumerate_ensemble(spec("walk", 2, 4, "impenetrable",
                                "contains-origin"), consumer=got.append)
        for p in got:
            assert (0, 0) in p.sites
            assert all(s[0] >= 0 for s in p.sites)

    def test_translation_class_stream_is_normalized(self):
        got = []
        enumerate_ensemble(spec("comb", 2, 4), consumer=got.append)
        for p in got:
            assert lex_min_site(p) == (0, 0)

    def test_histogram_matches_streamed_visits(self):
        from collections import Counter
        got = []
        s = enumerate_ensemble(spec("polygon", 2, 6, "penetrable",
                                    "contains-origin"), consumer=got.append)
        assert dict(Counter(visits(p) for p in got)) == s.visit_histogram


class TestTopologyTables:
    def test_marginal_reproduces_summary(self, tables):
        for cls, d, n in (("tree", 2, 6), ("animal", 2, 5), ("comb", 2, 6),
                          ("polygon", 2, 8), ("walk", 2, 5)):
            table = tables.get(cls, d, n)
            summary = enumerate_ensemble(spec(cls, d, n, "penetrable",
                                              "contains-origin"))
            assert table.total == summary.total
            assert table.total_histogram() == summary.visit_histogram

    def test_tree_keys_match_streamed_topology(self):
        table = count_by_topology(spec("tree", 2, 5, "penetrable",
                                       "contains-origin"))
        got = []
        enumerate_ensemble(spec("tree", 2, 5, "penetrable", "contains-origin"),
                           consumer=got.append)
        from collections import Counter
        direct = Counter(str(tree_key(p)) for p in got)
        assert dict(direct) == {k: tc.count for k, tc in table.classes.items()}

    def test_comb_keys_match_signature_op(self):
        table = count_by_topology(spec("comb", 2, 5, "penetrable",
                                       "contains-origin"))
        got = []
        enumerate_ensemble(spec("comb", 2, 5, "penetrable", "contains-origin"),
                           consumer=got.append)
        from collections import Counter
        direct = Counter(str(comb_signature(p).key()) for p in got)
        assert dict(direct) == {k: tc.count for k, tc in table.classes.items()}

    def test_count_tables_matches_individual_runs(self):
        variants = [("penetrable", "contains-origin"),
                    ("impenetrable", "contains-origin"),
                    ("penetrable", "translation-classes")]
        multi = count_tables("tree", 2, 5, variants)
        for v in variants:
            single = count_by_topology(EnsembleSpec("tree", 2, 5, *v))
            assert multi[v].total == single.total
            assert {k: tc.count for k, tc in multi[v].classes.items()} == \
                   {k: tc.count for k, tc in single.classes.items()}

    def test_max_topology_class_trees(self):
        key, count = max_topology_class(spec("tree", 3, 5, "penetrable",
                                             "contains-origin"))
        assert count == 1815
        assert key == tree_key(  # the 5-site path
            __import__("polylat").lattice.LatticePolymer.make(
                "tree", 3, [(i, 0, 0) for i in range(5)],
                [((i, 0, 0), (i + 1, 0, 0)) for i in range(4)]))

    def test_max_topology_class_matches_oracle_small(self):
        table = count_by_topology(spec("tree", 2, 3, "penetrable",
                                       "contains-origin"))
        key, count = max_topology_class(spec("tree", 2, 3, "penetrable",
                                             "contains-origin"))
        assert count == max(tc.count for tc in table.classes.values())

    def test_max_topology_requires_penetrable_contains_origin(self):
        with pytest.raises(InvalidSpecError):
            max_topology_class(spec("tree", 2, 3))
