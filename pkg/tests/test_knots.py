"""Knot invariants from exact projections.

The trefoil determinant oracle is computed here from the textbook 3-crossing
diagram by hand-building its crossing/arc matrix, independently of the
projection pipeline.
"""

import pytest

from polylat.constructs import build_phi30, build_phi_chain
from polylat.knots import (NoGenericProjectionError, PROJECTION_SCHEDULE,
                           _det_bareiss_int, _diagram, alexander_data,
                           cycle_order, normalize_alexander)
from polylat.lattice import LatticePolymer
from polylat.topology import knot_invariant, WrongClassError

from test_topology import apply_symmetry, lattice_symmetries


def unit_square_3d():
    pts = [(0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 0, 1)]
    return LatticePolymer.make("polygon", 3, pts,
                               zip(pts, pts[1:] + pts[:1]))


def trefoil_determinant_oracle():
    """Standard alternating 3-crossing diagram: crossing i sends under-arc i
    to i+1 beneath over-arc i+2 (indices mod 3).  Evaluate the relation
    matrix at t = -1 and take a first minor."""
    rows = []
    for i in range(3):
        row = [0, 0, 0]
        row[i] += -1
        row[(i + 1) % 3] += -1
        row[(i + 2) % 3] += 2
        rows.append(row)
    minor = [row[:-1] for row in rows[:-1]]
    return abs(_det_bareiss_int(minor))


def test_trefoil_oracle_value():
    assert trefoil_determinant_oracle() == 3


def test_unit_square_is_unknotted():
    inv = knot_invariant(unit_square_3d())
    assert inv.determinant == 1
    assert inv.alexander == (1,)


def test_phi30_matches_trefoil_oracle():
    inv = knot_invariant(build_phi30())
    assert inv.determinant == trefoil_determinant_oracle() == 3
    # Alexander polynomial of the trefoil, normalized: 1 - t + t^2
    assert inv.alexander == (1, -1, 1)


def test_determinant_stable_across_generic_projections():
    cycle = tuple(cycle_order(build_phi30()))
    dets = []
    for direction in PROJECTION_SCHEDULE[:6]:
        crossings = _diagram(cycle, direction)
        if crossings is None:
            continue
        from polylat.knots import _alexander_from_relations, _crossing_relations
        det, _ = _alexander_from_relations(_crossing_relations(crossings), False)
        dets.append(det)
    assert len(dets) >= 3
    assert set(dets) == {3}


def test_invariant_under_lattice_symmetries_and_reversal():
    phi = build_phi30()
    base = knot_invariant(phi).determinant
    count = 0
    for perm, signs in lattice_symmetries(3):
        image = apply_symmetry(phi, perm, signs)
        assert knot_invariant(image).determinant == base
        count += 1
        if count == 10:
            break
    reversed_cycle = tuple(reversed(cycle_order(phi)))
    rev = LatticePolymer.make(
        "polygon", 3, reversed_cycle,
        zip(reversed_cycle, reversed_cycle[1:] + reversed_cycle[:1]))
    assert knot_invariant(rev).determinant == base


@pytest.mark.parametrize("t", [1, 2, 3])
def test_phi_chain_determinants_multiply(t):
    inv = knot_invariant(build_phi_chain(t))
    assert inv.determinant == 3 ** t


def test_phi_chain_alexander_is_trefoil_power():
    inv = knot_invariant(build_phi_chain(2))
    trefoil = (1, -1, 1)
    square = normalize_alexander(
        tuple(sum(trefoil[i] * trefoil[k - i]
                  for i in range(max(0, k - 2), min(k, 2) + 1))
              for k in range(5)))
    assert inv.alexander == square


def test_determinants_are_odd():
    for t in (1, 2):
        assert knot_invariant(build_phi_chain(t)).determinant % 2 == 1


def test_wrong_class_and_dimension():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1)]
    square2d = LatticePolymer.make("polygon", 2, pts,
                                   zip(pts, pts[1:] + pts[:1]))
    with pytest.raises(WrongClassError):
        knot_invariant(square2d)
    tree = LatticePolymer.make("tree", 3, [(0, 0, 0)], [])
    with pytest.raises(WrongClassError):
        knot_invariant(tree)
