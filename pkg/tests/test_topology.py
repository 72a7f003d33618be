"""Topology keys: AHU tree codes, canonical graph certificates, comb
signatures.  Key equality must coincide with the intended equivalence."""

import itertools
import random

import pytest

from polylat.enumeration import EnsembleSpec, count_by_topology
from polylat.lattice import LatticePolymer, translate
from polylat.topology import (CombSignature, GRAPH_KEY_SITE_CAP, SizeCapError,
                              TopologyKey, WrongClassError, comb_signature,
                              graph_key, tree_key)

from oracles import free_trees_bounded


def P(cls, d, sites, edges, labels=None):
    return LatticePolymer.make(cls, d, sites, edges, labels)


def path_tree(n, d=2):
    pts = [tuple(i if j == 0 else 0 for j in range(d)) for i in range(n)]
    return P("tree", d, pts, zip(pts, pts[1:]))


def star_tree(d=2):
    center = (0,) * d
    leaves = []
    for j in range(d):
        for sign in (1, -1):
            leaves.append(tuple(sign if i == j else 0 for i in range(d)))
    return P("tree", d, [center] + leaves, [(center, l) for l in leaves])


# The comb drawn with four side chains hanging off a 13-step backbone;
# transcribed coordinates, signature <4; 2,3,4,1,3; 3,1,5,2>.
FIG_COMB_SITES = [
    (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 1), (3, 2),
    (4, 0), (4, 1), (4, 2), (4, 3), (5, 3), (6, 3), (7, 3), (8, 3),
    (6, 4), (7, 4), (7, 0), (7, 1), (7, 2), (6, 5), (6, 2), (8, 0), (8, 2),
]
FIG_COMB_EDGES = [
    ((1, 1), (1, 2)), ((2, 2), (2, 3)), ((1, 2), (2, 2)), ((2, 2), (3, 2)),
    ((1, 3), (1, 4)), ((3, 1), (3, 2)), ((1, 3), (2, 3)), ((3, 1), (4, 1)),
    ((4, 0), (4, 1)), ((4, 1), (4, 2)), ((4, 2), (4, 3)), ((4, 3), (5, 3)),
    ((5, 3), (6, 3)), ((6, 3), (7, 3)), ((7, 3), (8, 3)), ((6, 2), (6, 3)),
    ((6, 2), (7, 2)), ((7, 1), (7, 2)), ((7, 0), (7, 1)), ((7, 0), (8, 0)),
    ((7, 3), (7, 4)), ((6, 4), (6, 5)), ((6, 4), (7, 4)), ((8, 2), (8, 3)),
]


def fig_comb():
    return P("comb", 2, FIG_COMB_SITES, FIG_COMB_EDGES, ((1, 1), (6, 5)))


def lattice_symmetries(d):
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1), repeat=d):
            yield perm, signs


def apply_symmetry(polymer, perm, signs):
    def f(p):
        return tuple(signs[i] * p[perm[i]] for i in range(len(p)))

    labels = tuple(f(x) for x in polymer.labels) if polymer.labels else None
    return LatticePolymer.make(polymer.cls, polymer.d,
                               [f(s) for s in polymer.sites],
                               [(f(a), f(b)) for a, b in polymer.edges],
                               labels)


class TestTreeKey:
    def test_path_vs_star_distinct(self):
        assert tree_key(path_tree(5)) != tree_key(star_tree())

    def test_translation_invariant(self):
        p = path_tree(5)
        assert tree_key(p) == tree_key(translate(p, (3, -7)))

    def test_wrong_class(self):
        with pytest.raises(WrongClassError):
            tree_key(P("animal", 2, [(0, 0)], []))

    def test_invariant_under_all_lattice_symmetries(self):
        rng = random.Random(7)
        for _ in range(5):
            # random tree by growth
            sites = [(0, 0, 0)]
            edges = []
            occ = {sites[0]}
            while len(sites) < 8:
                base = rng.choice(sites)
                j = rng.randrange(3)
                w = tuple(c + rng.choice((1, -1)) if i == j else c
                          for i, c in enumerate(base))
                if w not in occ:
                    occ.add(w)
                    edges.append((base, w))
                    sites.append(w)
            p = P("tree", 3, sites, edges)
            base_key = tree_key(p)
            for perm, signs in lattice_symmetries(3):
                assert tree_key(apply_symmetry(p, perm, signs)) == base_key

    @pytest.mark.parametrize("n", range(1, 8))
    def test_distinct_keys_match_free_tree_generator(self, n, tables):
        table = tables.get("tree", 2, n)
        assert len(table.classes) == free_trees_bounded(n, 4)


class TestGraphKey:
    def test_cycle_vs_path(self):
        square_sites = [(0, 0), (1, 0), (1, 1), (0, 1)]
        square_edges = list(zip(square_sites, square_sites[1:] + square_sites[:1]))
        cycle = P("animal", 2, square_sites, square_edges)
        path = P("animal", 2, [(0, 0), (1, 0), (2, 0), (3, 0)],
                 [((i, 0), (i + 1, 0)) for i in range(3)])
        assert graph_key(cycle) != graph_key(path)

    def test_edge_subsets_differ(self):
        sites = [(0, 0), (1, 0), (1, 1), (0, 1)]
        full = list(zip(sites, sites[1:] + sites[:1]))
        assert graph_key(P("animal", 2, sites, full)) != \
            graph_key(P("animal", 2, sites, full[:3]))

    def test_isomorphic_embeddings_share_keys(self):
        # the same abstract 5-cycle-with-tail in two embeddings
        a_sites = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 0)]
        a_edges = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)),
                   ((0, 1), (0, 0)), ((1, 0), (2, 0))]
        b_sites = [(0, 0), (0, 1), (1, 1), (1, 0), (0, -1)]
        b_edges = [((0, 0), (0, 1)), ((0, 1), (1, 1)), ((1, 1), (1, 0)),
                   ((1, 0), (0, 0)), ((0, 0), (0, -1))]
        assert graph_key(P("animal", 2, a_sites, a_edges)) == \
            graph_key(P("animal", 2, b_sites, b_edges))

    def test_site_cap(self):
        n = GRAPH_KEY_SITE_CAP + 1
        pts = [(i, 0) for i in range(n)]
        p = P("animal", 2, pts, zip(pts, pts[1:]))
        with pytest.raises(SizeCapError):
            graph_key(p)

    def test_symmetry_invariance(self):
        sites = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 0)]
        edges = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)),
                 ((0, 1), (0, 0)), ((1, 0), (2, 0))]
        p = P("animal", 2, sites, edges)
        key = graph_key(p)
        for perm, signs in lattice_symmetries(2):
            assert graph_key(apply_symmetry(p, perm, signs)) == key


class TestCombSignature:
    def test_figure_comb(self):
        sig = comb_signature(fig_comb())
        assert sig == CombSignature(4, (2, 3, 4, 1, 3), (3, 1, 5, 2))
        assert str(sig) == "4;2,3,4,1,3;3,1,5,2"
        assert sig.total_edges() == 24

    def test_straight_path(self):
        pts = [(0, i) for i in range(7)]
        p = P("comb", 2, pts, zip(pts, pts[1:]), (pts[0], pts[-1]))
        assert comb_signature(p) == CombSignature(0, (6,), ())

    def test_reversed_labels_reverse_the_signature(self):
        p = fig_comb()
        rev = LatticePolymer.make("comb", 2, p.sites, p.edges,
                                  (p.labels[1], p.labels[0]))
        assert comb_signature(rev) == comb_signature(p).reversed()

    def test_parse_round_trip(self):
        sig = CombSignature(4, (2, 3, 4, 1, 3), (3, 1, 5, 2))
        assert CombSignature.parse(str(sig)) == sig

    def test_arity_validation(self):
        with pytest.raises(ValueError):
            CombSignature(2, (1, 1), (1, 1))
        with pytest.raises(ValueError):
            CombSignature(1, (1, 0), (1,))

    def test_wrong_class(self):
        with pytest.raises(WrongClassError):
            comb_signature(path_tree(4))


class TestKeySerialization:
    def test_kind_hex_format(self):
        key = TopologyKey("comb-signature", b"0;3;")
        assert str(key) == "comb-signature:" + b"0;3;".hex()

    def test_keys_order_and_hash(self):
        a = TopologyKey("tree-code", b"(()())")
        b = TopologyKey("tree-code", b"(()())")
        assert a == b and hash(a) == hash(b)
        assert sorted([TopologyKey("z", b""), a])[0] == a
