"""Exact finite-size adsorption thermodynamics over visit histograms.

Every sum runs over integer visit histograms, never over raw
configurations, so a beta sweep costs O(grid x distinct sigma) after one
enumeration pass.  Partition functions are evaluated in 113-bit mpmath
arithmetic with ascending-term accumulation; counts stay exact integers.

Limiting objects (growth constants, critical points) are never computed,
only rigorously bounded or estimated by declared finite-size estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from .enumeration import EnsembleSpec, TopologyTable

#: working precision for partition sums (well above the 80-bit floor)
PRECISION_BITS = 113

#: tolerance constants, centralized
CONVEXITY_TOL = 1e-10
EXPECTATION_REL_TOL = 1e-12
FINITE_DIFF_TOL = 1e-8
FINITE_DIFF_STEP = 1e-4
PSEUDO_CRITICAL_THETA = 0.02

#: beta*N beyond this would leave even extended-precision exponent comfort
OVERFLOW_GUARD = 1e8


class EmptyEnsembleError(ValueError):
    pass


class NoCrossingError(RuntimeError):
    pass


@dataclass(frozen=True)
class BetaGrid:
    values: tuple

    def __post_init__(self):
        vals = tuple(float(b) for b in self.values)
        if not vals:
            raise ValueError("empty grid")
        if any(b >= c for b, c in zip(vals, vals[1:])):
            raise ValueError("grid must be strictly ascending")
        object.__setattr__(self, "values", vals)

    def __iter__(self):
        return iter(self.values)

    @staticmethod
    def regular(start, stop, step) -> "BetaGrid":
        n = int(round((stop - start) / step))
        return BetaGrid(tuple(start + i * step for i in range(n + 1)))


def _mp():
    mpmath.mp.prec = PRECISION_BITS
    return mpmath


def partition_function(histogram: dict, beta: float):
    """Z(beta) = sum_k count(k) e^{beta k}; the exact integer total at beta=0."""
    if not histogram:
        raise EmptyEnsembleError("empty visit histogram")
    if beta == 0:
        return sum(histogram.values())
    mp = _mp()
    if abs(beta) * max(histogram) > OVERFLOW_GUARD:
        raise OverflowError("beta out of the extended exponent range")
    b = mp.mpf(beta)
    terms = sorted(mp.mpf(c) * mp.exp(b * k) for k, c in histogram.items())
    return mp.fsum(terms)


def log_partition(histogram: dict, beta: float):
    z = partition_function(histogram, beta)
    mp = _mp()
    return mp.log(mp.mpf(z))


def free_energy(histogram: dict, beta: float, size: int) -> float:
    """F_N(beta) = (1/N) log Z_N(beta)."""
    return float(log_partition(histogram, beta) / size)


def quenched_free_energy(table: TopologyTable, beta: float) -> float:
    """Topology-averaged per-class free energy, exact class weights."""
    if not table.classes:
        raise EmptyEnsembleError("empty topology table")
    mp = _mp()
    total = mp.mpf(table.total)
    n = table.spec.size
    acc = mp.mpf(0)
    for tc in table.classes.values():
        acc += mp.mpf(tc.count) / total * log_partition(tc.visit_histogram, beta)
    return float(acc / n)


def expected_visits(histogram: dict, beta: float) -> float:
    """E_beta(sigma) = sum_k k count(k) e^{beta k} / Z."""
    if not histogram:
        raise EmptyEnsembleError("empty visit histogram")
    mp = _mp()
    b = mp.mpf(beta)
    z = mp.fsum(sorted(mp.mpf(c) * mp.exp(b * k) for k, c in histogram.items()))
    num = mp.fsum(sorted(mp.mpf(k * c) * mp.exp(b * k) for k, c in histogram.items()))
    return float(num / z)


def quenched_expected_visits(table: TopologyTable, beta: float) -> float:
    if not table.classes:
        raise EmptyEnsembleError("empty topology table")
    mp = _mp()
    total = mp.mpf(table.total)
    acc = mp.mpf(0)
    for tc in table.classes.values():
        acc += mp.mpf(tc.count) / total * expected_visits(tc.visit_histogram, beta)
    return float(acc)


def relative_free_energy(histogram: dict, beta: float, size: int) -> float:
    """dF = F_N(beta) - F_N(0)."""
    mp = _mp()
    return float((log_partition(histogram, beta)
                  - mp.log(mp.mpf(sum(histogram.values())))) / size)


def relative_quenched(table: TopologyTable, beta: float) -> float:
    """dFQ = F_N^Q(beta) - F_N^Q(0)."""
    return quenched_free_energy(table, beta) - quenched_free_energy(table, 0.0)


def animal_negative_beta_margin(table: TopologyTable, beta: float) -> float:
    """Margin of the finite-size repulsive-surface bound for penetrable
    animals:  dFQ >= -log(dN)/N + beta N^{-1/d}  for beta <= 0.

    Positive margin means the bound holds with room to spare.
    """
    spec = table.spec
    if spec.cls != "animal" or spec.boundary != "penetrable":
        raise ValueError("bound applies to penetrable animals")
    if beta > 0:
        raise ValueError("bound applies to beta <= 0")
    n, d = spec.size, spec.d
    bound = -math.log(d * n) / n + beta * n ** (-1.0 / d)
    return relative_quenched(table, beta) - bound


# ---------------------------------------------------------------------------
# curves


@dataclass
class ThermoPoint:
    beta: float
    z: object           # exact int at beta=0, mpf otherwise
    f: float
    fq: float
    e_sigma: float
    eq_sigma: float
    df: float
    dfq: float


@dataclass
class ThermoResult:
    spec: EnsembleSpec
    points: list

    def column(self, name):
        return [getattr(p, name) for p in self.points]


def thermo_curve(table: TopologyTable, grid: BetaGrid) -> ThermoResult:
    hist = table.total_histogram()
    if not hist:
        raise EmptyEnsembleError("empty ensemble")
    n = table.spec.size
    mp = _mp()
    log_z0 = mp.log(mp.mpf(table.total))
    fq0 = quenched_free_energy(table, 0.0)
    points = []
    for beta in grid:
        z = partition_function(hist, beta)
        f = float(mp.log(mp.mpf(z)) / n)
        fq = quenched_free_energy(table, beta)
        points.append(ThermoPoint(
            beta=beta, z=z, f=f, fq=fq,
            e_sigma=expected_visits(hist, beta),
            eq_sigma=quenched_expected_visits(table, beta),
            df=float((mp.log(mp.mpf(z)) - log_z0) / n),
            dfq=fq - fq0))
    return ThermoResult(table.spec, points)


def convexity_margins(result: ThermoResult) -> list:
    """Second differences of log Z on the grid (>= -tol when convex)."""
    pts = result.points
    n = result.spec.size
    out = []
    for a, b, c in zip(pts, pts[1:], pts[2:]):
        h1, h2 = b.beta - a.beta, c.beta - b.beta
        second = (c.f * n - b.f * n) / h2 - (b.f * n - a.f * n) / h1
        out.append(second)
    return out


def jensen_margins(result: ThermoResult) -> list:
    """dF - dFQ at each grid point (>= 0 by the annealed/quenched inequality)."""
    return [p.df - p.dfq for p in result.points]


def finite_difference_check(table: TopologyTable, beta: float,
                            step: float = FINITE_DIFF_STEP) -> float:
    """|E_beta(sigma) - N dF/dbeta| with a five-point stencil of the
    given grid step, evaluated in extended precision."""
    hist = table.total_histogram()
    mp = _mp()
    h = mp.mpf(step)

    def logz(b):
        return mp.log(mp.mpf(partition_function(hist, float(b))))

    deriv = (-logz(beta + 2 * step) + 8 * logz(beta + step)
             - 8 * logz(beta - step) + logz(beta - 2 * step)) / (12 * h)
    return abs(float(deriv) - expected_visits(hist, beta))


# ---------------------------------------------------------------------------
# pseudo-critical estimator (declared finite-size estimator, not beta_c)


@dataclass
class PseudoCritical:
    theta: float
    which: str
    crossings: list      # (size N, beta or None), ascending N

    @property
    def any_crossing(self) -> bool:
        return any(b is not None for _n, b in self.crossings)


def pseudo_critical(tables: list, grid: BetaGrid, theta: float = PSEUDO_CRITICAL_THETA,
                    which: str = "annealed") -> PseudoCritical:
    """First grid beta where dF (or dFQ) exceeds theta, refined by bisection.

    Takes topology tables for an ascending range of sizes; reports the
    crossing per size (None where dF stays below theta on the whole grid).
    """
    if len(tables) < 2:
        raise ValueError("need at least two sizes")
    if which not in ("annealed", "quenched"):
        raise ValueError("which must be annealed or quenched")

    def df_at(table, beta):
        if which == "annealed":
            return relative_free_energy(table.total_histogram(), beta, table.spec.size)
        return relative_quenched(table, beta)

    crossings = []
    for table in sorted(tables, key=lambda t: t.spec.size):
        betas = list(grid)
        cross = None
        for lo, hi in zip(betas, betas[1:]):
            if df_at(table, hi) > theta >= df_at(table, lo):
                a, b = lo, hi
                for _ in range(60):
                    mid = 0.5 * (a + b)
                    if df_at(table, mid) > theta:
                        b = mid
                    else:
                        a = mid
                    if b - a < 1e-9:
                        break
                cross = 0.5 * (a + b)
                break
        crossings.append((table.spec.size, cross))
    return PseudoCritical(theta, which, crossings)


# ---------------------------------------------------------------------------
# rigorous growth-constant bounds


@dataclass(frozen=True)
class GrowthBound:
    kind: str
    value: float
    inputs: dict = field(default_factory=dict)


def growth_lower_bound_madras(d: int, n: int, t_n: int) -> GrowthBound:
    """lambda_{d,T} >= (d (2N)^{(d-1)/d} t_N)^{1/N}, exact t_N in, extended
    precision out."""
    if t_n <= 0:
        raise ValueError("t_N must be a positive integer")
    mp = _mp()
    value = (mp.mpf(d) * mp.mpf(2 * n) ** (mp.mpf(d - 1) / d) * t_n) ** (mp.mpf(1) / n)
    return GrowthBound("lower-madras", float(value),
                       {"d": d, "n": n, "count": t_n})


def growth_lower_bound_monotone(sequence) -> GrowthBound:
    """max_n a_n^{1/n}: a lower bound on lim a_n^{1/n} whenever the caller
    certifies supermultiplicativity a_{M+N} >= a_M a_N."""
    seq = list(sequence)
    if not seq or any(a <= 0 for a in seq):
        raise ValueError("sequence must be positive")
    mp = _mp()
    value = max(mp.mpf(a) ** (mp.mpf(1) / n) for n, a in enumerate(seq, start=1))
    return GrowthBound("lower-monotone", float(value), {"terms": len(seq)})


def submultiplicative_upper_bound(sequence, g=None) -> GrowthBound:
    """min_n [g(n) a_n]^{1/n}: a rigorous upper bound on lim a_n^{1/n}
    whenever the caller certifies a_{M+N} <= g(M) a_M a_N.

    The overhead g defaults to 1; callers with a nontrivial concatenation
    overhead pass their own (its unquantified constants are theirs to pick).
    """
    seq = list(sequence)
    if not seq or any(a <= 0 for a in seq):
        raise ValueError("sequence must be positive")
    if g is None:
        g = lambda n: 1
    mp = _mp()
    value = min((mp.mpf(g(n)) * a) ** (mp.mpf(1) / n)
                for n, a in enumerate(seq, start=1))
    return GrowthBound("upper-submultiplicative", float(value),
                       {"terms": len(seq), "overhead": "caller" if g else "unit"})


# ---------------------------------------------------------------------------
# pattern occurrence statistics


def count_star_sites(sites, edges, d: int) -> int:
    """Sites of full degree 2d (the star pattern with all 2d incident edges)."""
    deg = {}
    for a, b in edges:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    return sum(1 for s in sites if deg.get(s, 0) == 2 * d)


def count_straight_pattern(walk_sites, d: int) -> int:
    """Occurrences of the centered straight 4-step pattern along the first
    axis, with the empty-box side condition on the surrounding cube of
    side 4."""
    sites = list(walk_sites)
    n = len(sites) - 1
    total = 0
    site_set = set(sites)
    for j in range(2, n - 1):
        center = sites[j]
        window = sites[j - 2:j + 3]
        straight = all(
            w == tuple(center[0] + off if i == 0 else center[i]
                       for i in range(d))
            for off, w in zip(range(-2, 3), window))
        if not straight:
            continue
        clean = True
        for s in site_set:
            if all(abs(s[i] - center[i]) <= 2 for i in range(d)):
                if s not in window:
                    clean = False
                    break
        if clean:
            total += 1
    return total


def pattern_stats(spec: EnsembleSpec, pattern: str, *, size_limit=None) -> dict:
    """Histogram of per-configuration occurrence counts over the ensemble.

    Patterns: "star-H" (degree-2d sites; trees/animals), "saw-PQ" (straight
    centered 4-step windows with empty box; walks), "side-chain-count"
    (number of side chains; combs).  All three are translation invariant,
    so each representative's count is weighted by its multiplicity.
    """
    from .enumeration import _check_budget, _contributions, _rep_stream

    compatible = {"star-H": ("tree", "animal"), "saw-PQ": ("walk",),
                  "side-chain-count": ("comb",)}
    if pattern not in compatible:
        raise ValueError(f"unknown pattern {pattern!r}")
    if spec.cls not in compatible[pattern]:
        raise ValueError(f"pattern {pattern} does not apply to {spec.cls}")
    _check_budget(spec, size_limit)
    hist = {}
    for sites, edges, labels, meta in _rep_stream(spec):
        if pattern == "star-H":
            occ = count_star_sites(sites, edges, spec.d)
        elif pattern == "saw-PQ":
            occ = count_straight_pattern(sites, spec.d)
        else:
            occ = meta.b if meta is not None else 0
        weight = sum(m for _sigma, m in _contributions(sites, spec))
        hist[occ] = hist.get(occ, 0) + weight
    return dict(sorted(hist.items()))


# ---------------------------------------------------------------------------
# sandwich bounds (dimension pairs)


def sandwich_margins(z_value, lower_count: int, upper_count: int,
                     beta: float, n_sites: int) -> tuple:
    """(lower, upper) margins of
    |P^{oo,d-1}| e^{beta N'} <= Z(beta | P^{X,d}) <= |P^{X,d}| e^{beta N'}
    for beta >= 0, with N' the per-configuration site count.  Computed in
    log space; both entries are >= 0 when the bounds hold."""
    if beta < 0:
        raise ValueError("sandwich bounds apply to beta >= 0")
    mp = _mp()
    log_z = mp.log(mp.mpf(z_value))
    term = mp.mpf(beta) * n_sites
    lower = float(log_z - (mp.log(mp.mpf(lower_count)) + term)) if lower_count > 0 else float("inf")
    upper = float((mp.log(mp.mpf(upper_count)) + term) - log_z)
    return lower, upper
