"""Canonical quenched-topology keys.

Branched polymers are keyed by their abstract graph: center-rooted AHU
codes for trees, a canonical-labelling certificate for animals, and the
two-labelled segment signature for combs.  Ring polymers in Z^3 are
keyed by Alexander data (see knots.py); at the sizes this artifact
enumerates every polygon is an unknot, so enumeration tables never need
more than the determinant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import knots
from .lattice import LatticePolymer, adjacency, path_between, validate

GRAPH_KEY_SITE_CAP = 12


class WrongClassError(ValueError):
    pass


class SizeCapError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TopologyKey:
    kind: str
    payload: bytes

    def __str__(self) -> str:
        return f"{self.kind}:{self.payload.hex()}"


@dataclass(frozen=True)
class CombSignature:
    """Segment lengths <b; n_0..n_b; s_1..s_b> read along the backbone."""

    b: int
    n: tuple
    s: tuple

    def __post_init__(self):
        if self.b != len(self.s) or len(self.n) != self.b + 1:
            raise ValueError("inconsistent signature arity")
        if any(x <= 0 for x in self.n) or any(x <= 0 for x in self.s):
            raise ValueError("segment lengths must be positive")

    def total_edges(self) -> int:
        return sum(self.n) + sum(self.s)

    def reversed(self) -> "CombSignature":
        return CombSignature(self.b, tuple(reversed(self.n)), tuple(reversed(self.s)))

    def __str__(self) -> str:
        return "%d;%s;%s" % (self.b,
                             ",".join(map(str, self.n)),
                             ",".join(map(str, self.s)))

    @staticmethod
    def parse(text: str) -> "CombSignature":
        b_s, n_s, s_s = (part.strip() for part in text.split(";"))
        n = tuple(int(x) for x in n_s.split(",")) if n_s else ()
        s = tuple(int(x) for x in s_s.split(",")) if s_s else ()
        return CombSignature(int(b_s), n, s)

    def key(self) -> TopologyKey:
        return TopologyKey("comb-signature", str(self).encode())


@dataclass(frozen=True)
class KnotInvariant:
    """|Delta(-1)| plus the Alexander polynomial normalized up to units."""

    determinant: int
    alexander: tuple | None = None

    def key(self) -> TopologyKey:
        return TopologyKey("knot-invariant", str(self.determinant).encode())


# ---------------------------------------------------------------------------
# trees: AHU canonical code, rooted at the center


def _ahu_root_code(adj, root) -> bytes:
    code = {}
    order = [root]
    parent = {root: None}
    for v in order:
        for w in adj[v]:
            if w != parent.get(v):
                parent[w] = v
                order.append(w)
    for v in reversed(order):
        children = sorted(code[w] for w in adj[v] if w != parent[v])
        code[v] = b"(" + b"".join(children) + b")"
    return code[root]


def _tree_centers(adj):
    # peel leaves until one or two sites remain
    deg = {v: len(ws) for v, ws in adj.items()}
    layer = [v for v, k in deg.items() if k <= 1]
    remaining = len(adj)
    while remaining > 2:
        nxt = []
        for v in layer:
            deg[v] = 0
            for w in adj[v]:
                if deg[w] > 1:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        remaining -= len(layer)
        layer = nxt
    return layer


def ahu_code(adj) -> bytes:
    """Canonical code of an abstract free tree given as an adjacency dict."""
    centers = _tree_centers(adj)
    return min(_ahu_root_code(adj, c) for c in centers)


def tree_key(polymer: LatticePolymer) -> TopologyKey:
    if polymer.cls != "tree":
        raise WrongClassError("tree_key requires class=tree")
    return TopologyKey("tree-code", ahu_code(adjacency(polymer)))


# ---------------------------------------------------------------------------
# animals: canonical labelling by refinement + full individualization


def _refine(n, neigh, colors):
    while True:
        sig = sorted(range(n), key=lambda v: (colors[v], sorted(colors[w] for w in neigh[v])))
        new = [0] * n
        prev_key = None
        c = -1
        for v in sig:
            key = (colors[v], sorted(colors[w] for w in neigh[v]))
            if key != prev_key:
                c += 1
                prev_key = key
            new[v] = c
        if new == colors:
            return colors
        colors = new


def _certificate(n, neigh, colors):
    # colors are discrete: position by color
    pos = [0] * n
    for v in range(n):
        pos[colors[v]] = v
    bits = []
    for i in range(n):
        vi = pos[i]
        row = 0
        nb = set(neigh[vi])
        for j in range(n):
            row = (row << 1) | (1 if pos[j] in nb else 0)
        bits.append(row)
    return tuple(bits)


def canonical_graph_certificate(n, neigh) -> tuple:
    """Minimum adjacency certificate over all refinement-compatible orders.

    Exhaustive individualization keeps this isomorphism-complete; intended
    for graphs of at most GRAPH_KEY_SITE_CAP vertices.
    """
    best = [None]

    def rec(colors):
        colors = _refine(n, neigh, colors)
        classes = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        target = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                target = c
                break
        if target is None:
            cert = _certificate(n, neigh, colors)
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        for v in classes[target]:
            child = [2 * c for c in colors]
            child[v] -= 1
            rec(child)

    rec([0] * n)
    return best[0]


def graph_key(polymer: LatticePolymer) -> TopologyKey:
    if polymer.cls not in ("animal", "tree"):
        raise WrongClassError("graph_key requires class=animal")
    if len(polymer.sites) > GRAPH_KEY_SITE_CAP:
        raise SizeCapError(f"graph_key capped at {GRAPH_KEY_SITE_CAP} sites")
    sites = sorted(polymer.sites)
    index = {s: i for i, s in enumerate(sites)}
    neigh = [[] for _ in sites]
    for a, b in polymer.edges:
        neigh[index[a]].append(index[b])
        neigh[index[b]].append(index[a])
    cert = canonical_graph_certificate(len(sites), neigh)
    payload = ("%d:" % len(sites)).encode() + b",".join(b"%x" % r for r in cert)
    return TopologyKey("graph-code", payload)


# ---------------------------------------------------------------------------
# combs


def comb_signature(polymer: LatticePolymer) -> CombSignature:
    if polymer.cls != "comb":
        raise WrongClassError("comb_signature requires class=comb")
    if not validate(polymer):
        raise ValueError("invalid comb")
    adj = adjacency(polymer)
    a, b = polymer.labels
    backbone = path_between(polymer, a, b)
    attach = [i for i in range(1, len(backbone) - 1) if len(adj[backbone[i]]) == 3]
    n = []
    prev = 0
    for i in attach:
        n.append(i - prev)
        prev = i
    n.append(len(backbone) - 1 - prev)
    on_backbone = set(backbone)
    s = []
    for i in attach:
        v = backbone[i]
        chain_start = next(w for w in adj[v] if w not in on_backbone)
        length = 1
        prev_site, cur = v, chain_start
        while len(adj[cur]) == 2:
            nxt = next(w for w in adj[cur] if w != prev_site)
            prev_site, cur = cur, nxt
            length += 1
        s.append(length)
    return CombSignature(len(attach), tuple(n), tuple(s))


# ---------------------------------------------------------------------------
# polygons


def knot_invariant(polymer: LatticePolymer) -> KnotInvariant:
    """Alexander data of a polygon in Z^3 from an exact generic projection."""
    if polymer.cls != "polygon":
        raise WrongClassError("knot_invariant requires class=polygon")
    if polymer.d != 3:
        raise WrongClassError("knot invariants are computed in d=3 only")
    det, poly = knots.alexander_data(polymer)
    return KnotInvariant(det, poly)
