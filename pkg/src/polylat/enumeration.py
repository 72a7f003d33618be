"""Exhaustive enumeration of lattice polymer ensembles.

The search runs once over lex-normalized (or endpoint-anchored) translation
representatives; the contains-origin and half-space ensembles are derived
from each representative by exact translation bookkeeping instead of
separate searches, which also yields the cross-check identities
|P^oo_N| = N |Pbar_N| (animals, trees, rings) and (N+1) |Pbar_N|
(walks, combs) for free.

Counts are exact Python integers throughout.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from .lattice import (EDGE_COUNTED, LatticePolymer, POLYMER_CLASSES, add,
                      lex_normalize, translate, unit_steps)
from .topology import (CombSignature, GRAPH_KEY_SITE_CAP, SizeCapError,
                       TopologyKey, ahu_code, canonical_graph_certificate)

BOUNDARIES = ("penetrable", "impenetrable")
CONVENTIONS = ("translation-classes", "contains-origin", "from-origin")

#: default size caps per class; enumeration beyond these needs an explicit
#: override and a matching appetite for CPU time
DEFAULT_SIZE_LIMITS = {
    ("tree", 2): 11, ("tree", 3): 9,
    ("animal", 2): 11, ("animal", 3): 9,
    ("polygon", 2): 16, ("polygon", 3): 16,
    ("comb", 2): 13, ("comb", 3): 13,
    ("walk", 2): 16, ("walk", 3): 12,
}
_FALLBACK_SIZE_LIMIT = 7


class InvalidSpecError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class EnsembleSpec:
    """Names one finite configuration set P_N^X under a counting convention."""

    cls: str
    d: int
    size: int
    boundary: str = "penetrable"
    convention: str = "translation-classes"

    def __post_init__(self):
        if self.cls not in POLYMER_CLASSES:
            raise InvalidSpecError(f"unknown class {self.cls!r}")
        if self.d < 2:
            raise InvalidSpecError("dimension must be >= 2")
        if self.size < 0:
            raise InvalidSpecError("size must be nonnegative")
        if self.boundary not in BOUNDARIES:
            raise InvalidSpecError(f"unknown boundary {self.boundary!r}")
        if self.convention not in CONVENTIONS:
            raise InvalidSpecError(f"unknown convention {self.convention!r}")
        if self.convention == "from-origin" and self.cls != "walk":
            raise InvalidSpecError("from-origin applies to walks only")

    def site_count(self) -> int:
        """Sites per configuration (N' in the sandwich bounds)."""
        return self.size + 1 if self.cls in EDGE_COUNTED else self.size

    def as_dict(self) -> dict:
        return {"class": self.cls, "d": self.d, "size": self.size,
                "boundary": self.boundary, "convention": self.convention}

    @staticmethod
    def from_dict(data: dict) -> "EnsembleSpec":
        return EnsembleSpec(data["class"], data["d"], data["size"],
                            data.get("boundary", "penetrable"),
                            data.get("convention", "translation-classes"))


@dataclass
class EnumerationSummary:
    spec: EnsembleSpec
    total: int
    visit_histogram: dict
    wall_time: float = 0.0


@dataclass
class TopologyClass:
    key: TopologyKey
    count: int = 0
    visit_histogram: dict = field(default_factory=dict)


@dataclass
class TopologyTable:
    """Per-topology counts and visit histograms: the sufficient statistic."""

    spec: EnsembleSpec
    classes: dict                  # str(key) -> TopologyClass
    total: int
    wall_time: float = 0.0

    def total_histogram(self) -> dict:
        out = Counter()
        for tc in self.classes.values():
            out.update(tc.visit_histogram)
        return dict(out)


def size_limit_for(spec: EnsembleSpec) -> int:
    return DEFAULT_SIZE_LIMITS.get((spec.cls, spec.d), _FALLBACK_SIZE_LIMIT)


def estimate_ensemble_size(spec: EnsembleSpec) -> int:
    # coarse upper estimate used in budget errors only
    base = 2 * spec.d - 1
    if spec.cls in ("tree", "animal"):
        return 2 * spec.d * (3 * base) ** spec.size
    return 2 * spec.d * base ** spec.size


# ---------------------------------------------------------------------------
# representative generators
#
# Each yields lightweight records (sites, edges, labels, meta):
#   sites  tuple of coordinate tuples
#   edges  tuple of normalized site pairs
#   labels (rho_A, rho_B) or None
#   meta   class-specific (comb signature), else None


def _lex_positive(p) -> bool:
    for c in p:
        if c > 0:
            return True
        if c < 0:
            return False
    return False


def _site_sets(d, n, root_branch=None):
    """Connected n-site subsets of Z^d with lexicographic minimum at the
    origin (Redelmeier growth over the lex order)."""
    origin = (0,) * d
    if n == 1:
        if root_branch in (None, 0):
            yield (origin,)
        return
    steps = unit_steps(d)
    initial = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    cells = [origin]
    reached = {origin, *initial}

    def rec(cand):
        for idx, c in enumerate(cand):
            new = []
            for s in steps:
                w = add(c, s)
                if w not in reached and _lex_positive(w):
                    new.append(w)
                    reached.add(w)
            cells.append(c)
            if len(cells) == n:
                yield tuple(cells)
            else:
                yield from rec(cand[idx + 1:] + new)
            cells.pop()
            reached.difference_update(new)

    if root_branch is None:
        yield from rec(initial)
    else:
        # branch j includes initial candidate j and excludes candidates < j
        c = initial[root_branch]
        new = []
        for s in steps:
            w = add(c, s)
            if w not in reached and _lex_positive(w):
                new.append(w)
                reached.add(w)
        cells.append(c)
        if n == 2:
            yield tuple(cells)
        else:
            yield from rec(initial[root_branch + 1:] + new)
        cells.pop()


def _induced_edges(sites):
    index = {s: i for i, s in enumerate(sites)}
    d = len(sites[0])
    edges = []
    for i, s in enumerate(sites):
        for j in range(d):
            w = tuple(c + (1 if k == j else 0) for k, c in enumerate(s))
            if w in index and i < index[w]:
                edges.append((i, index[w]))
            w2 = tuple(c - (1 if k == j else 0) for k, c in enumerate(s))
            if w2 in index and i < index[w2]:
                edges.append((i, index[w2]))
    return edges


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _connected_with(n, edge_subset):
    if n == 1:
        return True
    dsu = _DSU(n)
    parts = n
    for a, b in edge_subset:
        if dsu.union(a, b):
            parts -= 1
    return parts == 1


def _spanning_trees(n, edges):
    """All spanning trees of the induced graph, as edge-index tuples."""
    m = len(edges)
    chosen = []

    def rec(i, dsu, components):
        if components == 1:
            yield tuple(chosen)
            return
        if i == m:
            return
        a, b = edges[i]
        ra, rb = dsu.find(a), dsu.find(b)
        if ra != rb:
            # include
            nxt = _DSU(n)
            nxt.parent = dsu.parent[:]
            nxt.union(ra, rb)
            chosen.append(i)
            yield from rec(i + 1, nxt, components - 1)
            chosen.pop()
        # exclude, if the rest can still connect everything
        rest = _DSU(n)
        rest.parent = dsu.parent[:]
        parts = components
        for j in range(i + 1, m):
            if rest.union(*edges[j]):
                parts -= 1
        if parts == 1:
            yield from rec(i + 1, dsu, components)

    yield from rec(0, _DSU(n), n)


def _connected_spanning_subgraphs(n, edges):
    """All connected spanning edge subsets (lattice animals on fixed sites)."""
    m = len(edges)
    chosen = []

    def rec(i, dsu, components):
        if i == m:
            if components == 1:
                yield tuple(chosen)
            return
        a, b = edges[i]
        # include
        nxt = _DSU(n)
        nxt.parent = dsu.parent[:]
        merged = nxt.union(a, b)
        chosen.append(i)
        yield from rec(i + 1, nxt, components - 1 if merged else components)
        chosen.pop()
        # exclude, if the rest can still connect everything
        rest = _DSU(n)
        rest.parent = dsu.parent[:]
        parts = components
        for j in range(i + 1, m):
            if rest.union(*edges[j]):
                parts -= 1
        if parts == 1:
            yield from rec(i + 1, dsu, components)

    if n == 1:
        yield ()
        return
    yield from rec(0, _DSU(n), n)


def _tree_like_reps(cls, d, n, root_branch=None):
    for sites in _site_sets(d, n, root_branch):
        edges = _induced_edges(sites)
        if cls == "tree":
            structures = _spanning_trees(n, edges)
        else:
            structures = _connected_spanning_subgraphs(n, edges)
        for subset in structures:
            chosen = tuple(
                (sites[a], sites[b]) if sites[a] <= sites[b] else (sites[b], sites[a])
                for a, b in (edges[i] for i in subset))
            yield sites, chosen, None, None


def _walk_reps(d, n, halfspace=False, root_branch=None):
    origin = (0,) * d
    if n == 0:
        if root_branch in (None, 0):
            yield (origin,), (), (origin, origin), None
        return
    steps = unit_steps(d)
    first = steps if root_branch is None else [steps[root_branch]]
    path = [origin]
    occupied = {origin}

    def rec():
        if len(path) == n + 1:
            sites = tuple(path)
            edges = tuple((a, b) if a <= b else (b, a)
                          for a, b in zip(path, path[1:]))
            yield sites, edges, (path[0], path[-1]), None
            return
        tip = path[-1]
        allowed = steps if len(path) > 1 else first
        for s in allowed:
            w = add(tip, s)
            if w in occupied or (halfspace and w[0] < 0):
                continue
            occupied.add(w)
            path.append(w)
            yield from rec()
            path.pop()
            occupied.remove(w)

    yield from rec()


def _polygon_reps(d, n, root_branch=None):
    """Self-avoiding polygons with lex-min site at the origin.

    The cycle is traced from the origin towards its lex-smaller neighbour
    first, so each polygon appears exactly once.
    """
    if n < 4 or n % 2:
        return
    origin = (0,) * d
    steps = unit_steps(d)
    firsts = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    if root_branch is not None:
        firsts = [firsts[root_branch]]
    path = [origin]
    occupied = {origin}

    def dist_to_origin(p):
        return sum(abs(c) for c in p)

    def rec():
        tip = path[-1]
        remaining = n - (len(path) - 1)
        if remaining == 1:
            if dist_to_origin(tip) == 1 and path[1] < tip:
                sites = tuple(path)
                edges = tuple((a, b) if a <= b else (b, a)
                              for a, b in zip(path, path[1:] + [origin]))
                yield sites, edges, None, None
            return
        for s in steps:
            w = add(tip, s)
            if w in occupied or not _lex_positive(w):
                continue
            gap = dist_to_origin(w)
            if gap > remaining - 1 or (remaining - 1 - gap) % 2:
                continue
            occupied.add(w)
            path.append(w)
            yield from rec()
            path.pop()
            occupied.remove(w)

    for f in firsts:
        occupied.add(f)
        path.append(f)
        yield from rec()
        path.pop()
        occupied.remove(f)


def _comb_reps(d, n, root_branch=None):
    """Combs with rho_A anchored at the origin: backbone walk first, then
    side chains attached left-to-right with on-the-fly self-avoidance."""
    origin = (0,) * d
    if n == 0:
        # degenerate single-site comb; no backbone, no signature
        if root_branch in (None, 0):
            yield (origin,), (), (origin, origin), None
        return
    steps = unit_steps(d)
    first = steps if root_branch is None else [steps[root_branch]]
    backbone = [origin]
    occupied = {origin}
    chains = {}    # interior index -> list of chain sites (excluding attach site)

    def emit():
        t = len(backbone) - 1
        attach = sorted(chains)
        n_seg = []
        prev = 0
        for i in attach:
            n_seg.append(i - prev)
            prev = i
        n_seg.append(t - prev)
        sig = CombSignature(len(attach), tuple(n_seg),
                            tuple(len(chains[i]) for i in attach))
        sites = list(backbone)
        edges = [(a, b) if a <= b else (b, a)
                 for a, b in zip(backbone, backbone[1:])]
        for i in attach:
            run = [backbone[i]] + chains[i]
            sites.extend(chains[i])
            edges.extend((a, b) if a <= b else (b, a)
                         for a, b in zip(run, run[1:]))
        return (tuple(sites), tuple(edges), (backbone[0], backbone[-1]), sig)

    def grow_chain(k, budget_left):
        # add one site to the chain at interior index k, then either settle
        # for this length or keep extending while budget remains
        tip = chains[k][-1] if chains[k] else backbone[k]
        for s in steps:
            w = add(tip, s)
            if w in occupied:
                continue
            occupied.add(w)
            chains[k].append(w)
            yield from attach_from(k + 1, budget_left - 1)
            if budget_left > 1:
                yield from grow_chain(k, budget_left - 1)
            chains[k].pop()
            occupied.remove(w)

    def attach_from(k, budget):
        t = len(backbone) - 1
        if budget == 0:
            yield emit()
            return
        if k > t - 1:
            return
        # no chain at k
        yield from attach_from(k + 1, budget)
        # chain of some length 1..budget at k
        chains[k] = []
        yield from grow_chain(k, budget)
        del chains[k]

    def grow_backbone():
        t = len(backbone) - 1
        if t >= 1:
            budget = n - t
            if budget == 0:
                yield emit()
            elif t >= 2:
                yield from attach_from(1, budget)
        if t == n:
            return
        tip = backbone[-1]
        allowed = first if t == 0 else steps
        for s in allowed:
            w = add(tip, s)
            if w in occupied:
                continue
            occupied.add(w)
            backbone.append(w)
            yield from grow_backbone()
            backbone.pop()
            occupied.remove(w)

    yield from grow_backbone()

# ---------------------------------------------------------------------------
# driving the search


def _root_branch_count(spec: EnsembleSpec) -> int:
    if spec.cls in ("tree", "animal", "polygon"):
        return spec.d
    return 2 * spec.d


def _rep_stream(spec: EnsembleSpec, root_branch=None):
    cls, d, n = spec.cls, spec.d, spec.size
    if cls in ("tree", "animal"):
        if n == 0:
            return iter(())
        return _tree_like_reps(cls, d, n, root_branch)
    if cls == "walk":
        halfspace = (spec.convention == "from-origin"
                     and spec.boundary == "impenetrable")
        return _walk_reps(d, n, halfspace, root_branch)
    if cls == "polygon":
        return _polygon_reps(d, n, root_branch)
    return _comb_reps(d, n, root_branch)


def _contributions(sites, spec: EnsembleSpec):
    """(sigma, multiplicity) pairs this representative adds to the ensemble
    named by the spec, via the translation identities."""
    counts = Counter(s[0] for s in sites)
    conv, boundary = spec.convention, spec.boundary
    if conv == "from-origin":
        return ((counts[0], 1),)
    if conv == "translation-classes":
        return ((counts[min(counts)], 1),)
    # contains-origin
    if boundary == "penetrable":
        return tuple((m, m) for m in counts.values())
    m = counts[min(counts)]
    return ((m, m),)


def _check_budget(spec, size_limit):
    limit = size_limit if size_limit is not None else size_limit_for(spec)
    if spec.size > limit:
        raise BudgetExceededError(
            f"size {spec.size} exceeds the {spec.cls} budget of {limit} "
            f"in d={spec.d}; estimated ensemble size "
            f"{estimate_ensemble_size(spec):.3g}",
            estimate=estimate_ensemble_size(spec))


def _emit_members(spec, sites, edges, labels, consumer):
    rep = LatticePolymer.make(spec.cls, spec.d, sites, edges, labels)
    if spec.convention == "from-origin":
        consumer(rep)
        return
    if spec.convention == "translation-classes":
        consumer(lex_normalize(rep))
        return
    if spec.boundary == "penetrable":
        anchors = sorted(rep.sites)
    else:
        low = min(s[0] for s in rep.sites)
        anchors = sorted(s for s in rep.sites if s[0] == low)
    for v in anchors:
        consumer(translate(rep, tuple(-c for c in v)))


def enumerate_ensemble(spec: EnsembleSpec, consumer=None, *,
                       size_limit=None, node_budget=None,
                       threads=1) -> EnumerationSummary:
    """Enumerate the named finite set, streaming members to the consumer.

    The summary is exact; with ``threads > 1`` only the mergeable summary is
    computed (a consumer callback is a sequential feature).
    """
    _check_budget(spec, size_limit)
    if threads > 1:
        if consumer is not None:
            raise ValueError("consumer streaming is single-threaded")
        return _parallel(spec, threads, want_table=False)
    t0 = time.perf_counter()
    if spec.cls == "comb" and consumer is None and node_budget is None:
        table = count_by_topology(spec, size_limit=size_limit)
        return EnumerationSummary(spec, table.total, table.total_histogram(),
                                  time.perf_counter() - t0)
    hist = Counter()
    total = 0
    reps = 0
    for sites, edges, labels, _meta in _rep_stream(spec):
        reps += 1
        if node_budget is not None and reps > node_budget:
            raise BudgetExceededError(
                f"node budget {node_budget} exhausted",
                estimate=estimate_ensemble_size(spec))
        for sigma, mult in _contributions(sites, spec):
            hist[sigma] += mult
            total += mult
        if consumer is not None:
            _emit_members(spec, sites, edges, labels, consumer)
    return EnumerationSummary(spec, total, dict(sorted(hist.items())),
                              time.perf_counter() - t0)


def _walk_key(size: int) -> TopologyKey:
    adj = {i: [j for j in (i - 1, i + 1) if 0 <= j <= size] for i in range(size + 1)}
    return TopologyKey("tree-code", ahu_code(adj))


def _cycle_key(size: int) -> TopologyKey:
    neigh = [[(i - 1) % size, (i + 1) % size] for i in range(size)]
    cert = canonical_graph_certificate(size, neigh)
    payload = ("%d:" % size).encode() + b",".join(b"%x" % r for r in cert)
    return TopologyKey("graph-code", payload)


def _topology_key_fn(spec: EnsembleSpec):
    cls, n = spec.cls, spec.size
    if cls == "tree":
        def key_fn(sites, edges, labels, meta):
            index = {s: i for i, s in enumerate(sites)}
            adj = {i: [] for i in range(len(sites))}
            for a, b in edges:
                adj[index[a]].append(index[b])
                adj[index[b]].append(index[a])
            return TopologyKey("tree-code", ahu_code(adj))
        return key_fn
    if cls == "animal":
        if n > GRAPH_KEY_SITE_CAP:
            raise SizeCapError(
                f"animal topology keys are capped at {GRAPH_KEY_SITE_CAP} sites")
        def key_fn(sites, edges, labels, meta):
            index = {s: i for i, s in enumerate(sites)}
            neigh = [[] for _ in sites]
            for a, b in edges:
                neigh[index[a]].append(index[b])
                neigh[index[b]].append(index[a])
            cert = canonical_graph_certificate(len(sites), neigh)
            payload = ("%d:" % len(sites)).encode() + b",".join(b"%x" % r for r in cert)
            return TopologyKey("graph-code", payload)
        return key_fn
    if cls == "comb":
        degenerate = TopologyKey("comb-signature", b"0;;")
        def key_fn(sites, edges, labels, meta):
            return meta.key() if meta is not None else degenerate
        return key_fn
    if cls == "walk":
        fixed = _walk_key(n)
        return lambda *args: fixed
    # polygon: everything at enumeration scale is an unknot (the smallest
    # knotted polygon needs 24 edges); d=2 rings are keyed by the cycle graph
    if spec.d == 3:
        if n >= 24:
            raise SizeCapError("knotted sizes are outside enumeration scale")
        fixed = TopologyKey("knot-invariant", b"1")
    else:
        fixed = _cycle_key(n) if n >= 4 and n % 2 == 0 else TopologyKey("graph-code", b"")
    return lambda *args: fixed


def count_by_topology(spec: EnsembleSpec, *, size_limit=None,
                      threads=1) -> TopologyTable:
    """Exact per-topology counts and visit histograms for the ensemble."""
    _check_budget(spec, size_limit)
    if threads > 1:
        return _parallel(spec, threads, want_table=True)
    if spec.cls == "comb":
        variant = (spec.boundary, spec.convention)
        return count_tables(spec.cls, spec.d, spec.size, [variant],
                            size_limit=size_limit)[variant]
    t0 = time.perf_counter()
    key_fn = _topology_key_fn(spec)
    classes = {}
    total = 0
    for sites, edges, labels, meta in _rep_stream(spec):
        key = key_fn(sites, edges, labels, meta)
        name = str(key)
        tc = classes.get(name)
        if tc is None:
            tc = classes[name] = TopologyClass(key, 0, {})
        hist = tc.visit_histogram
        for sigma, mult in _contributions(sites, spec):
            hist[sigma] = hist.get(sigma, 0) + mult
            tc.count += mult
            total += mult
    for tc in classes.values():
        tc.visit_histogram = dict(sorted(tc.visit_histogram.items()))
    return TopologyTable(spec, dict(sorted(classes.items())), total,
                         time.perf_counter() - t0)


def max_topology_class(spec: EnsembleSpec, *, size_limit=None):
    """The commonest topology and its exact count (ties: canonical key order).

    Defined on the penetrable contains-origin ensemble, matching the
    M_N quantity the per-topology bounds refer to.
    """
    if spec.convention != "contains-origin" or spec.boundary != "penetrable":
        raise InvalidSpecError(
            "max_topology_class is defined for penetrable contains-origin")
    table = count_by_topology(spec, size_limit=size_limit)
    if not table.classes:
        raise InvalidSpecError("empty ensemble")
    best = max(table.classes.values(), key=lambda tc: (tc.count, tc.key))
    ties = [tc for tc in table.classes.values() if tc.count == best.count]
    winner = min(ties, key=lambda tc: tc.key)
    return winner.key, winner.count


# ---------------------------------------------------------------------------
# parallel driving: the search tree is split at its root branches and the
# per-branch summaries/tables (commutative monoid) are merged in branch order


def _branch_job(args):
    spec_dict, branch, want_table = args
    spec = EnsembleSpec.from_dict(spec_dict)
    if spec.cls == "comb":
        variant = (spec.boundary, spec.convention)
        books = _comb_count_tables(spec.d, spec.size, (variant,),
                                   root_branch=branch)
        classes, total = books[variant]
        if not want_table:
            hist = Counter()
            for tc in classes.values():
                hist.update(tc.visit_histogram)
            return total, dict(hist)
        packed = {name: [tc.key.kind, tc.key.payload, tc.count,
                         tc.visit_histogram]
                  for name, tc in classes.items()}
        return total, packed
    if not want_table:
        hist = Counter()
        total = 0
        for sites, _e, _l, _m in _rep_stream(spec, root_branch=branch):
            for sigma, mult in _contributions(sites, spec):
                hist[sigma] += mult
                total += mult
        return total, dict(hist)
    key_fn = _topology_key_fn(spec)
    classes = {}
    total = 0
    for sites, edges, labels, meta in _rep_stream(spec, root_branch=branch):
        key = key_fn(sites, edges, labels, meta)
        name = str(key)
        entry = classes.get(name)
        if entry is None:
            entry = classes[name] = [key.kind, key.payload, 0, {}]
        for sigma, mult in _contributions(sites, spec):
            entry[3][sigma] = entry[3].get(sigma, 0) + mult
            entry[2] += mult
            total += mult
    return total, classes


def _parallel(spec: EnsembleSpec, threads: int, want_table: bool):
    import multiprocessing

    t0 = time.perf_counter()
    jobs = [(spec.as_dict(), b, want_table)
            for b in range(_root_branch_count(spec))]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(min(threads, len(jobs))) as pool:
        parts = pool.map(_branch_job, jobs)
    if not want_table:
        hist = Counter()
        total = 0
        for part_total, part_hist in parts:
            total += part_total
            hist.update(part_hist)
        return EnumerationSummary(spec, total, dict(sorted(hist.items())),
                                  time.perf_counter() - t0)
    classes = {}
    total = 0
    for part_total, part_classes in parts:
        total += part_total
        for name, (kind, payload, count, hist) in part_classes.items():
            tc = classes.get(name)
            if tc is None:
                tc = classes[name] = TopologyClass(TopologyKey(kind, payload), 0, {})
            tc.count += count
            for sigma, mult in hist.items():
                tc.visit_histogram[sigma] = tc.visit_histogram.get(sigma, 0) + mult
    for tc in classes.values():
        tc.visit_histogram = dict(sorted(tc.visit_histogram.items()))
    return TopologyTable(spec, dict(sorted(classes.items())), total,
                         time.perf_counter() - t0)


def count_tables(cls: str, d: int, size: int, variants, *,
                 size_limit=None) -> dict:
    """Topology tables for several (boundary, convention) views of the same
    underlying search, in one enumeration pass.

    Returns {(boundary, convention): TopologyTable}.  Equivalent to calling
    count_by_topology per variant, at a fraction of the cost.
    """
    specs = {v: EnsembleSpec(cls, d, size, v[0], v[1]) for v in variants}
    for spec in specs.values():
        _check_budget(spec, size_limit)
    t0 = time.perf_counter()
    any_spec = next(iter(specs.values()))
    if cls == "comb":
        books = _comb_count_tables(d, size, tuple(variants))
        elapsed = time.perf_counter() - t0
        out = {}
        for v, (classes, total) in books.items():
            for tc in classes.values():
                tc.visit_histogram = dict(sorted(tc.visit_histogram.items()))
            out[v] = TopologyTable(specs[v], dict(sorted(classes.items())),
                                   total, elapsed)
        return out
    key_fn = _topology_key_fn(any_spec)
    books = {v: ({}, [0]) for v in variants}   # classes, total-in-a-box
    for sites, edges, labels, meta in _rep_stream(any_spec):
        key = key_fn(sites, edges, labels, meta)
        name = str(key)
        counts = Counter(s[0] for s in sites)
        m_min = counts[min(counts)]
        for v, (classes, total) in books.items():
            boundary, convention = v
            if convention == "from-origin":
                contribs = ((counts[0], 1),)
            elif convention == "translation-classes":
                contribs = ((m_min, 1),)
            elif boundary == "penetrable":
                contribs = tuple((m, m) for m in counts.values())
            else:
                contribs = ((m_min, m_min),)
            tc = classes.get(name)
            if tc is None:
                tc = classes[name] = TopologyClass(key, 0, {})
            hist = tc.visit_histogram
            for sigma, mult in contribs:
                hist[sigma] = hist.get(sigma, 0) + mult
                tc.count += mult
                total[0] += mult
    elapsed = time.perf_counter() - t0
    out = {}
    for v, (classes, total) in books.items():
        for tc in classes.values():
            tc.visit_histogram = dict(sorted(tc.visit_histogram.items()))
        out[v] = TopologyTable(specs[v], dict(sorted(classes.items())),
                               total[0], elapsed)
    return out


# ---------------------------------------------------------------------------
# fast comb driving: combs dominate every other class by orders of magnitude
# (their size parameter counts edges and the growth constant exceeds the
# tree one per site), so the counting paths use a visitor-style enumerator
# with incremental first-coordinate bookkeeping instead of the generator.
# Cross-validated against _comb_reps in the test suite.


def comb_visit(d, n, visit, root_branch=None):
    """Enumerate combs anchored at rho_A = origin, invoking
    ``visit(backbone_dirs, chain_items, x1_counts)`` once per comb.

    Sites are packed into single integers (first coordinate in the low bit
    field) so the hot loop runs on int arithmetic.  ``backbone_dirs`` is the
    live list of step directions (0..d-1 positive axes, d..2d-1 negative),
    ``chain_items`` a sorted tuple of (interior index, direction list),
    ``x1_counts`` the live counter of shifted first coordinates (only its
    values and key order are meaningful).  Visitors copy what they keep.
    """
    field = 7
    assert n < (1 << (field - 1)) - 2
    strides = [1 << (field * j) for j in range(d)]
    origin_code = sum(s << (field - 1) for s in strides)
    deltas = strides + [-s for s in strides]
    mask = (1 << field) - 1
    if n == 0:
        if root_branch in (None, 0):
            visit([], (), {origin_code & mask: 1})
        return
    first = range(2 * d) if root_branch is None else (root_branch,)
    backbone = [origin_code]
    bb_dirs = []
    occupied = {origin_code}
    chains = {}
    x1cnt = {origin_code & mask: 1}

    def emit():
        # attach_from scans interior indices in ascending order, so the
        # insertion order of `chains` is already sorted
        visit(bb_dirs, tuple(chains.items()), x1cnt)

    def grow_chain(k, tip, dirs, budget_left):
        next_k = k + 1
        for step in range(2 * d):
            w = tip + deltas[step]
            if w in occupied:
                continue
            occupied.add(w)
            dirs.append(step)
            c = w & mask
            x1cnt[c] = x1cnt.get(c, 0) + 1
            attach_from(next_k, budget_left - 1)
            if budget_left > 1:
                grow_chain(k, w, dirs, budget_left - 1)
            dirs.pop()
            occupied.remove(w)
            rem = x1cnt[c] - 1
            if rem:
                x1cnt[c] = rem
            else:
                del x1cnt[c]

    def attach_from(k, budget):
        if budget == 0:
            emit()
            return
        if k > len(backbone) - 2:
            return
        attach_from(k + 1, budget)
        dirs = chains[k] = []
        grow_chain(k, backbone[k], dirs, budget)
        del chains[k]

    def grow_backbone():
        t = len(backbone) - 1
        if t >= 1:
            budget = n - t
            if budget == 0:
                emit()
            elif t >= 2:
                attach_from(1, budget)
        if t == n:
            return
        tip = backbone[-1]
        allowed = first if t == 0 else range(2 * d)
        for step in allowed:
            w = tip + deltas[step]
            if w in occupied:
                continue
            occupied.add(w)
            backbone.append(w)
            bb_dirs.append(step)
            c = w & mask
            x1cnt[c] = x1cnt.get(c, 0) + 1
            grow_backbone()
            backbone.pop()
            bb_dirs.pop()
            occupied.remove(w)
            rem = x1cnt[c] - 1
            if rem:
                x1cnt[c] = rem
            else:
                del x1cnt[c]

    grow_backbone()


def _signature_of(bb_dirs, chain_items):
    if not bb_dirs:
        return None
    t = len(bb_dirs)
    n_seg = []
    prev = 0
    for i, _chain in chain_items:
        n_seg.append(i - prev)
        prev = i
    n_seg.append(t - prev)
    return CombSignature(len(chain_items), tuple(n_seg),
                         tuple(len(chain) for _i, chain in chain_items))


def _comb_count_tables(d, size, variants, root_branch=None):
    """One visitor pass filling (classes, total) books per variant; the
    topology key is memoized on the structural signature (there are at most
    2^{N-2} of them), keeping the per-configuration cost flat."""
    books = {v: [{}, 0] for v in variants}
    items = tuple((v, book) for v, book in books.items())
    key_cache = {}
    degenerate = (TopologyKey("comb-signature", b"0;;"), "comb-signature:"
                  + b"0;;".hex())

    def key_for(bb_dirs, chain_items):
        if not bb_dirs:
            return degenerate
        shape = (len(bb_dirs),
                 tuple((i, len(c)) for i, c in chain_items))
        hit = key_cache.get(shape)
        if hit is None:
            key = _signature_of(bb_dirs, chain_items).key()
            hit = key_cache[shape] = (key, str(key))
        return hit

    def visit(bb_dirs, chain_items, x1cnt):
        key, name = key_for(bb_dirs, chain_items)
        m_min = x1cnt[min(x1cnt)]
        pen = tuple(x1cnt.values())
        for v, book in items:
            boundary, convention = v
            classes = book[0]
            tc = classes.get(name)
            if tc is None:
                tc = classes[name] = TopologyClass(key, 0, {})
            hist = tc.visit_histogram
            if convention == "translation-classes":
                hist[m_min] = hist.get(m_min, 0) + 1
                tc.count += 1
                book[1] += 1
            elif boundary == "penetrable":
                added = 0
                for m in pen:
                    hist[m] = hist.get(m, 0) + m
                    added += m
                tc.count += added
                book[1] += added
            else:
                hist[m_min] = hist.get(m_min, 0) + m_min
                tc.count += m_min
                book[1] += m_min

    comb_visit(d, size, visit, root_branch)
    return books
