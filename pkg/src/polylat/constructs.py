"""Executable versions of the explicit constructions and maps.

These serve both as generators of test fixtures (known polygons and combs
with pinned invariants) and as direct machine checks of constructive
claims: the 30-step trefoil polygon, its stacked 28t-step composites, the
straight comb witnesses, the two-case comb injection into the next-larger
half-space ensemble, and the comb split into two combs and a walk.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import (LatticePolymer, adjacency, lex_normalize, normalize_edge,
                      path_between, translate, validate, visits)
from .topology import CombSignature

# 30-step polygon transcribed from the anchor sites A=(0,0,0), C=(0,0,4),
# D=(1,0,4), F=(3,1,0), G=(3,1,1) and the enclosing box [0,3]x[-2,1]x[0,4];
# the transcription is validated by edge count, all-degrees-2, the box, and
# its knot determinant rather than trusted blindly.
PHI30_CYCLE = (
    (0, 0, 0), (1, 0, 0), (2, 0, 0), (2, -1, 0), (2, -1, 1), (2, -1, 2),
    (1, -1, 2), (1, 0, 2), (1, 1, 2), (2, 1, 2), (3, 1, 2), (3, 1, 1),
    (3, 1, 0), (3, 0, 0), (3, -1, 0), (3, -2, 0), (2, -2, 0), (1, -2, 0),
    (1, -1, 0), (1, -1, 1), (1, 0, 1), (2, 0, 1), (2, 0, 2), (2, 0, 3),
    (1, 0, 3), (1, 0, 4), (0, 0, 4), (0, 0, 3), (0, 0, 2), (0, 0, 1),
)

RECIPES = ("phi30", "phi_chain", "straight_comb", "comb_plus_map",
           "comb_decompose")


@dataclass(frozen=True)
class ConstructionRecipe:
    name: str
    parameters: dict

    def __post_init__(self):
        if self.name not in RECIPES:
            raise ValueError(f"unknown recipe {self.name!r}")


def _cycle_polymer(cycle) -> LatticePolymer:
    edges = [(a, b) for a, b in zip(cycle, cycle[1:] + (cycle[0],))]
    return LatticePolymer.make("polygon", 3, cycle, edges)


def build_phi30() -> LatticePolymer:
    """The 30-step trefoil polygon with its first anchor site at the origin."""
    return _cycle_polymer(PHI30_CYCLE)


def build_phi_chain(t: int) -> LatticePolymer:
    """Stack t translated copies of the 30-step polygon along the third axis,
    welding consecutive copies by deleting their shared edge, then shorten
    the top by rerouting the 3-step cap to a single step.

    The result has 28t edges, lies in the half-space x_1 >= 0, and touches
    the surface in exactly 4t sites; its knot type is the product of t
    trefoils.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    sites = set()
    edges = set()
    for j in range(t):
        shift = (0, 0, 4 * j)
        layer = [tuple(c + s for c, s in zip(p, shift)) for p in PHI30_CYCLE]
        sites.update(layer)
        edges.update(normalize_edge(a, b)
                     for a, b in zip(layer, layer[1:] + [layer[0]]))
    for j in range(1, t):
        edges.discard(normalize_edge((0, 0, 4 * j), (1, 0, 4 * j)))
    # replace the cap B->C->D->E by the single edge B->E
    top = 4 * t
    b_site, c_site = (0, 0, top - 1), (0, 0, top)
    d_site, e_site = (1, 0, top), (1, 0, top - 1)
    sites -= {c_site, d_site}
    edges -= {normalize_edge(b_site, c_site), normalize_edge(c_site, d_site),
              normalize_edge(d_site, e_site)}
    edges.add(normalize_edge(b_site, e_site))
    return LatticePolymer.make("polygon", 3, sites, edges)


def straight_comb_witness(signature: CombSignature, d: int) -> LatticePolymer:
    """A comb with the given signature, placed flat.

    For d >= 3 the backbone runs along the second axis and side chains
    along the third, all inside the hyperplane x_1 = 0, so every site is a
    visit (sigma = N + 1).  For d = 2 the backbone runs along the surface
    line with side chains perpendicular into the bulk, so the visits are
    exactly the backbone sites (at least b + 2 of them).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    sig = signature
    backbone_steps = sum(sig.n)

    def pt(*coords):
        return tuple(coords) + (0,) * (d - len(coords))

    sites = [pt(0, i) for i in range(backbone_steps + 1)]
    edges = [(pt(0, i), pt(0, i + 1)) for i in range(backbone_steps)]
    attach = 0
    for k in range(sig.b):
        attach += sig.n[k]
        prev = pt(0, attach)
        for step in range(1, sig.s[k] + 1):
            if d >= 3:
                cur = pt(0, attach, step)
            else:
                cur = pt(step, attach)
            sites.append(cur)
            edges.append((prev, cur))
            prev = cur
    labels = (pt(0, 0), pt(0, backbone_steps))
    comb = LatticePolymer.make("comb", d, sites, edges, labels)
    check = validate(comb)
    if not check:
        raise ValueError(f"invalid signature: {check.reason}")
    return comb


def comb_plus_map(polymer: LatticePolymer, *, validated: bool = False) -> LatticePolymer:
    """The injection C_N^+ -> C_{N+2}^+: append a 2-step tail at a
    degree-1 origin, otherwise splice a 3-step detour through x_1 = -1,
    then renormalize to the half-space.  The image always has at most 2
    sites in the surface, and the case is readable off that count.

    ``validated=True`` lets bulk callers who already hold a checked member
    of C_N^+ skip the input re-validation.
    """
    p = polymer
    origin = (0,) * p.d
    if not validated:
        if not validate(p) or p.cls != "comb":
            raise ValueError("input must be a valid comb")
        if origin not in p.sites or any(s[0] < 0 for s in p.sites):
            raise ValueError("input must contain the origin inside the half-space")
        if p.edge_count() == 0:
            raise ValueError("needs at least one edge")
    adj = adjacency(p)
    e1 = tuple(1 if i == 0 else 0 for i in range(p.d))
    minus1 = tuple(-c for c in e1)

    sites = set(p.sites)
    edges = set(p.edges)
    labels = list(p.labels)
    if len(adj[origin]) == 1:
        # append the 2-step walk from the origin away from the surface
        minus2 = tuple(-2 * c for c in e1)
        sites.update((minus1, minus2))
        edges.add(normalize_edge(origin, minus1))
        edges.add(normalize_edge(minus1, minus2))
        labels = [minus2 if lab == origin else lab for lab in labels]
    else:
        # splice a detour through the slab x_1 = -1 into one surface edge
        v = min(w for w in adj[origin] if w[0] == 0)
        v_down = tuple(c - e for c, e in zip(v, e1))
        edges.discard(normalize_edge(origin, v))
        sites.update((v_down, minus1))
        edges.add(normalize_edge(v, v_down))
        edges.add(normalize_edge(v_down, minus1))
        edges.add(normalize_edge(minus1, origin))
    hat = LatticePolymer.make("comb", p.d, sites, edges, labels)
    out = lex_normalize(hat)
    if visits(out) > 2 or (not validated and not validate(out)):
        raise AssertionError("comb injection produced an out-of-contract image")
    return out


@dataclass
class CombDecomposition:
    """Split of an (N+M)-edge comb into two combs and a walk.

    ``raw`` holds the pieces in the input's own coordinates (their edge
    sets partition the input's edges); the named fields are the same
    pieces lex-normalized.  ``case`` is I, II, or III following the split
    position relative to the side chains; the anchors record which sites
    played the reconstruction roles.
    """

    comb_a: LatticePolymer
    comb_b: LatticePolymer
    walk: LatticePolymer
    case: str
    anchors: dict
    raw: tuple


def _subpath_edges(path_sites):
    return [(a, b) for a, b in zip(path_sites, path_sites[1:])]


def comb_decompose(polymer: LatticePolymer, split: int) -> CombDecomposition:
    """Break an (N+M)-edge comb at split position N into an N-edge comb, an
    (M-i)-edge comb, and an i-step walk whose edge sets partition the input.

    Following the three-case analysis on where N lands relative to the side
    chains; at most 2M+2 inputs can share one output triple.
    """
    p = polymer
    if not validate(p) or p.cls != "comb":
        raise ValueError("input must be a valid comb")
    total = p.edge_count()
    n = split
    m = total - n
    if n < 1 or m < 1:
        raise ValueError("split must leave both parts nonempty")

    adj = adjacency(p)
    backbone = path_between(p, p.labels[0], p.labels[1])
    t = len(backbone) - 1
    on_backbone = set(backbone)
    attach_idx = [i for i in range(1, t) if len(adj[backbone[i]]) == 3]
    chains = {}
    for i in attach_idx:
        v = backbone[i]
        run = [v]
        cur = next(w for w in adj[v] if w not in on_backbone)
        run.append(cur)
        while len(adj[cur]) == 2:
            nxt = next(w for w in adj[cur] if w != run[-2])
            run.append(nxt)
            cur = nxt
        chains[i] = run          # attach site first, free end last
    s_len = {i: len(chains[i]) - 1 for i in attach_idx}
    b = len(attach_idx)

    def comb_piece(sites, edges, lab_a, lab_b):
        return LatticePolymer.make("comb", p.d, sites, edges, (lab_a, lab_b))

    def walk_piece(path_sites):
        if len(path_sites) == 1:
            return LatticePolymer.make("walk", p.d, path_sites, (),
                                       (path_sites[0], path_sites[0]))
        return LatticePolymer.make("walk", p.d, path_sites,
                                   _subpath_edges(path_sites),
                                   (path_sites[0], path_sites[-1]))

    def assemble(idx_set, extra_sites, extra_edges, lab_a, lab_b):
        # backbone slice plus whole chains at the given attach indices
        sites = list(extra_sites)
        edges = list(extra_edges)
        for i in idx_set:
            sites.extend(chains[i][1:])
            edges.extend(_subpath_edges(chains[i]))
        return comb_piece(sites, edges, lab_a, lab_b)

    prefix_s = 0
    case = None
    anchors = {}
    # scan for case II / III at each chain index J
    for pos, j_idx in enumerate(attach_idx):
        s_before = prefix_s
        i_j = j_idx
        if i_j + s_before < n <= i_j + s_before + s_len[i_j]:
            case = "II"
            big_l = n - i_j - s_before - 1
            v = backbone[i_j]
            y = backbone[i_j + 1]
            u = chains[i_j][big_l]
            theta_sites = chains[i_j][big_l:]
            left_attach = [k for k in attach_idx if k < i_j]
            k1_sites = backbone[:i_j + 2] + chains[i_j][1:big_l + 1]
            k1_edges = (_subpath_edges(backbone[:i_j + 2])
                        + _subpath_edges(chains[i_j][:big_l + 1]))
            k1 = assemble(left_attach, k1_sites, k1_edges, backbone[0], y)
            right_attach = [k for k in attach_idx if k > i_j + 1]
            k2_sites = backbone[i_j + 1:]
            k2_edges = _subpath_edges(backbone[i_j + 1:])
            if (i_j + 1) in attach_idx:
                # y carries its own chain; its free end becomes the new A end
                right_attach = [i_j + 1] + right_attach
                lab_a = chains[i_j + 1][-1]
            else:
                lab_a = y
            k2 = assemble(right_attach, k2_sites, k2_edges, lab_a, backbone[-1])
            theta = walk_piece(theta_sites)
            anchors = {"u": u, "y": y, "v": v}
            break
        prev_i = attach_idx[pos - 1] if pos else 0
        if prev_i + s_before < n <= i_j + s_before:
            case = "III"
            cut = n - s_before
            v = backbone[cut]
            left_attach = [k for k in attach_idx if k < cut]
            k1 = assemble(left_attach, backbone[:cut + 1],
                          _subpath_edges(backbone[:cut + 1]), backbone[0], v)
            if cut == i_j:
                theta = walk_piece(chains[i_j])
                right_attach = [k for k in attach_idx if k > cut]
            else:
                theta = walk_piece([v])
                right_attach = [k for k in attach_idx if k >= cut]
            k2 = assemble(right_attach, backbone[cut:],
                          _subpath_edges(backbone[cut:]), v, backbone[-1])
            anchors = {"break": v}
            break
        prefix_s += s_len[i_j]
    else:
        # case I: the split lands beyond the last side chain
        case = "I"
        cut = t - m
        v = backbone[cut]
        k1 = assemble(attach_idx, backbone[:cut + 1],
                      _subpath_edges(backbone[:cut + 1]), backbone[0], v)
        k2 = comb_piece(backbone[cut:], _subpath_edges(backbone[cut:]),
                        v, backbone[-1])
        theta = walk_piece([v])
        anchors = {"break": v}

    raw = (k1, k2, theta)
    for piece in raw[:2]:
        if not validate(piece):
            raise AssertionError("decomposition produced an invalid comb")
    if k1.edge_count() != n:
        raise AssertionError("first piece must carry exactly the split size")
    if k1.edge_count() + k2.edge_count() + theta.edge_count() != total:
        raise AssertionError("pieces must partition the edges")
    return CombDecomposition(lex_normalize(k1), lex_normalize(k2),
                             lex_normalize(theta), case, anchors, raw)
