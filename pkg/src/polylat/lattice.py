"""Lattice geometry and polymer representations.

A polymer is a finite connected subgraph of the hypercubic lattice Z^d,
stored as an explicit (sites, edges) pair: two polymers with the same
sites but different edge subsets are distinct configurations.  The
adsorbing surface is always the hyperplane where the first coordinate
vanishes; a site on it is a "visit".
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
import re

Point = tuple[int, ...]
Edge = tuple[Point, Point]

POLYMER_CLASSES = ("animal", "tree", "walk", "polygon", "comb")

#: classes whose size parameter counts edges (the rest count sites)
EDGE_COUNTED = ("walk", "polygon", "comb")

#: classes carrying an ordered pair of labelled endpoints
LABELLED = ("walk", "comb")


def normalize_edge(a: Point, b: Point) -> Edge:
    return (a, b) if a <= b else (b, a)


def unit_steps(d: int) -> list[Point]:
    """The 2d unit vectors of Z^d, positive directions first."""
    steps = []
    for j in range(d):
        steps.append(tuple(1 if i == j else 0 for i in range(d)))
    for j in range(d):
        steps.append(tuple(-1 if i == j else 0 for i in range(d)))
    return steps


def add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class LatticePolymer:
    """A lattice polymer: connected subgraph of Z^d with a class tag.

    ``labels`` is the ordered endpoint pair (rho_A, rho_B) for walks and
    combs, ``None`` otherwise.  Instances are immutable and hashable.
    """

    cls: str
    d: int
    sites: frozenset
    edges: frozenset
    labels: tuple | None = None

    @staticmethod
    def make(cls, d, sites, edges, labels=None) -> "LatticePolymer":
        edges = frozenset(normalize_edge(a, b) for a, b in edges)
        return LatticePolymer(cls, d, frozenset(sites), edges,
                              tuple(labels) if labels else None)

    def site_count(self) -> int:
        return len(self.sites)

    def edge_count(self) -> int:
        return len(self.edges)

    def size(self) -> int:
        """The model size parameter: edges for walk/polygon/comb, sites otherwise."""
        return len(self.edges) if self.cls in EDGE_COUNTED else len(self.sites)


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def adjacency(polymer: LatticePolymer) -> dict:
    adj: dict = {s: [] for s in polymer.sites}
    for a, b in polymer.edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _connected(sites, adj) -> bool:
    if not sites:
        return False
    start = next(iter(sites))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(sites)


def validate(polymer: LatticePolymer) -> Validation:
    """Check every class invariant; never raises on bad structure."""
    p = polymer
    if p.cls not in POLYMER_CLASSES:
        return Validation(False, "unknown-class")
    if p.d < 2:
        return Validation(False, "dimension")
    if not p.sites:
        return Validation(False, "empty")
    for s in p.sites:
        if len(s) != p.d:
            return Validation(False, "coordinate-length")
    for a, b in p.edges:
        if a not in p.sites or b not in p.sites:
            return Validation(False, "edge-endpoint-missing")
        if sum(abs(x - y) for x, y in zip(a, b)) != 1:
            return Validation(False, "edge-not-nearest-neighbour")
    adj = adjacency(p)
    if not _connected(p.sites, adj):
        return Validation(False, "disconnected")

    n_sites, n_edges = len(p.sites), len(p.edges)
    degrees = {s: len(adj[s]) for s in p.sites}

    if p.cls in LABELLED:
        if p.labels is None or len(p.labels) != 2:
            return Validation(False, "labels-missing")
        if any(x not in p.sites for x in p.labels):
            return Validation(False, "label-not-a-site")
    elif p.labels is not None:
        return Validation(False, "labels-forbidden")

    if p.cls == "animal":
        return Validation(True)

    if p.cls in ("tree", "walk", "comb"):
        if n_edges != n_sites - 1:
            return Validation(False, "not-a-tree")
        # connected with n-1 edges => acyclic

    if p.cls == "tree":
        return Validation(True)

    if p.cls == "walk":
        if n_edges == 0:
            # 0-step walk: a single labelled site
            a, b = p.labels
            if a != b:
                return Validation(False, "zero-step-labels")
            return Validation(True)
        leaves = [s for s in p.sites if degrees[s] == 1]
        if len(leaves) != 2 or set(p.labels) != set(leaves):
            return Validation(False, "walk-endpoints")
        return Validation(True)

    if p.cls == "polygon":
        if n_sites != n_edges or n_sites < 4 or n_sites % 2:
            return Validation(False, "polygon-count")
        if any(degrees[s] != 2 for s in p.sites):
            return Validation(False, "polygon-degree")
        return Validation(True)

    # comb
    if n_edges == 0:
        a, b = p.labels
        if a != b:
            return Validation(False, "zero-step-labels")
        return Validation(True)
    a, b = p.labels
    if a == b or degrees[a] != 1 or degrees[b] != 1:
        return Validation(False, "comb-endpoints")
    if max(degrees.values()) > 3:
        return Validation(False, "comb-degree")
    backbone = set(path_between(p, a, b))
    for s in p.sites:
        if degrees[s] == 3 and s not in backbone:
            return Validation(False, "comb-branch-off-backbone")
    return Validation(True)


def path_between(polymer: LatticePolymer, a: Point, b: Point) -> list:
    """The unique a--b path in an acyclic polymer, as a site list."""
    adj = adjacency(polymer)
    parent = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def visits(polymer: LatticePolymer) -> int:
    """Number of sites in the adsorbing hyperplane x_1 = 0."""
    return sum(1 for s in polymer.sites if s[0] == 0)


def first_coordinate_counts(sites) -> Counter:
    return Counter(s[0] for s in sites)


def lex_min_site(polymer: LatticePolymer) -> Point:
    return min(polymer.sites)


def translate(polymer: LatticePolymer, vector: Point) -> LatticePolymer:
    sites = frozenset(add(s, vector) for s in polymer.sites)
    edges = frozenset(normalize_edge(add(a, vector), add(b, vector))
                      for a, b in polymer.edges)
    labels = None
    if polymer.labels is not None:
        labels = tuple(add(s, vector) for s in polymer.labels)
    return LatticePolymer(polymer.cls, polymer.d, sites, edges, labels)


def lex_normalize(polymer: LatticePolymer) -> LatticePolymer:
    """Translate so the lexicographically smallest site is the origin."""
    z = lex_min_site(polymer)
    if not any(z):
        return polymer
    return translate(polymer, tuple(-c for c in z))


def spans(polymer: LatticePolymer) -> tuple:
    """Per-coordinate spans, 1 + max_j - min_j."""
    out = []
    for j in range(polymer.d):
        coords = [s[j] for s in polymer.sites]
        out.append(1 + max(coords) - min(coords))
    return tuple(out)


def _farthest(adj, start):
    # BFS sweep; returns (site, edge distance)
    dist = {start: 0}
    queue = deque([start])
    far = (start, 0)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                if dist[w] > far[1]:
                    far = (w, dist[w])
                queue.append(w)
    return far


def longest_path(polymer: LatticePolymer) -> int:
    """Edge count of the longest simple path (tree diameter, double BFS)."""
    if polymer.cls not in ("tree", "walk", "comb"):
        raise ValueError("longest_path requires an acyclic class")
    adj = adjacency(polymer)
    a, _ = _farthest(adj, next(iter(polymer.sites)))
    _, dist = _farthest(adj, a)
    return dist


_POINT_RE = re.compile(r"\(([-0-9,]+)\)")


def _fmt_point(p: Point) -> str:
    return "(" + ",".join(str(c) for c in p) + ")"


def to_line(polymer: LatticePolymer) -> str:
    """Canonical one-line text form: "class d; sites; edges; labels".

    Sites are sorted lexicographically and edges sorted as normalized pairs,
    so equal polymers serialize identically.
    """
    sites = " ".join(_fmt_point(s) for s in sorted(polymer.sites))
    edges = " ".join(_fmt_point(a) + "~" + _fmt_point(b)
                     for a, b in sorted(polymer.edges))
    if polymer.labels is not None:
        labels = _fmt_point(polymer.labels[0]) + "~" + _fmt_point(polymer.labels[1])
    else:
        labels = "-"
    return f"{polymer.cls} {polymer.d}; {sites}; {edges}; {labels}"


def from_line(line: str) -> LatticePolymer:
    head, sites_s, edges_s, labels_s = (part.strip() for part in line.split(";"))
    cls, d = head.split()
    d = int(d)

    def points(text):
        return [tuple(int(c) for c in m.group(1).split(","))
                for m in _POINT_RE.finditer(text)]

    sites = points(sites_s)
    edge_pts = points(edges_s)
    if len(edge_pts) % 2:
        raise ValueError("malformed edge list")
    edges = [(edge_pts[i], edge_pts[i + 1]) for i in range(0, len(edge_pts), 2)]
    labels = None
    if labels_s != "-":
        lp = points(labels_s)
        if len(lp) != 2:
            raise ValueError("malformed labels")
        labels = tuple(lp)
    return LatticePolymer.make(cls, d, sites, edges, labels)
