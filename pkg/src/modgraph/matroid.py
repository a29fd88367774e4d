"""Cographic matroid rank oracle, density and polytope certificates.

The matroid lives on the edge set of a connected bridgeless multigraph;
its bases are the complements of spanning trees.  Everything here runs in
exact rational arithmetic: the maximal density m, the maximal attaining
set T0, the scaled-base-polytope membership test, the iterative witness
construction, and an independent covering-LP oracle for the same constant.

Subset scans are exhaustive with a hard cap of 20 edges; correctness
certificates matter more than asymptotic speed at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import simplex
from .graphs import Multigraph, betti, bridges, spanning_trees

MAX_GROUND_SET = 20
MAX_LP_TREES = 500


class MatroidError(ValueError):
    """Invalid matroid input (bridges present, ground set too large, ...)."""


class CertificateError(RuntimeError):
    """An internal certificate recheck failed; signals an implementation bug."""


@dataclass(frozen=True)
class DensityCertificate:
    """Certificate for the maximal density m of a cographic matroid.

    m: exact maximum of |S|/rk(S) over nonempty edge subsets.
    t0: the union of all maximizers (itself a maximizer).
    witness: vector w with w_e >= 1 and w in m*P(M), or None if not built.
    """

    m: Fraction
    t0: frozenset[int]
    witness: tuple[Fraction, ...] | None = None


class CographicMatroid:
    """Rank oracle over edge subsets of a connected bridgeless multigraph."""

    def __init__(self, graph: Multigraph):
        blocked = bridges(graph)
        if blocked:
            raise MatroidError(
                f"graph has bridges {sorted(blocked)}; contract them first"
            )
        self.graph = graph
        self.n_edges = graph.n_edges
        index = {v: i for i, (v, _) in enumerate(graph.vertices)}
        self._ends = [(index[t], index[h]) for t, h in graph.edges]
        self._n_vertices = graph.n_vertices
        self.full_rank = betti(graph)
        self._rank_table: list[int] | None = None

    def corank(self, subset) -> int:
        """Matroid rank of an edge subset: |S| - (components(G - S) - 1)."""
        mask = 0
        for eid in subset:
            if not 0 <= eid < self.n_edges:
                raise MatroidError(f"edge id {eid} outside the ground set")
            mask |= 1 << eid
        return self._rank_mask(mask)

    def _rank_mask(self, mask: int) -> int:
        n = self._n_vertices
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = n
        size = 0
        for eid, (a, b) in enumerate(self._ends):
            if mask >> eid & 1:
                size += 1
                continue
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        return size - (comps - 1)

    def rank_table(self) -> list[int]:
        """Rank of every subset, indexed by bitmask; built once per matroid."""
        if self._rank_table is None:
            _check_size(self.n_edges)
            self._rank_table = [self._rank_mask(m) for m in range(1 << self.n_edges)]
        return self._rank_table


def _check_size(e: int):
    if e > MAX_GROUND_SET:
        raise MatroidError(
            f"ground set has {e} edges; exhaustive scans are capped at "
            f"{MAX_GROUND_SET} (contract the graph first)"
        )
    if e == 0:
        raise MatroidError("empty ground set")


def density(matroid: CographicMatroid) -> DensityCertificate:
    """Maximal density m = max |S|/rk(S) and the union T0 of all maximizers.

    Exhaustive scan over all nonempty subsets; T0 attains the maximum by
    union closure of maximizers, which is rechecked here.
    """
    e = matroid.n_edges
    _check_size(e)
    rank = matroid.rank_table()
    # Pass 1: the maximum as an exact fraction p/q.
    p, q = 0, 1
    for mask in range(1, 1 << e):
        size = mask.bit_count()
        rk = rank[mask]
        # size/rk > p/q without Fraction overhead
        if size * q > p * rk:
            p, q = size, rk
    m = Fraction(p, q)
    # Pass 2: union of all maximizers.
    t0_mask = 0
    for mask in range(1, 1 << e):
        if mask.bit_count() * q == p * rank[mask]:
            t0_mask |= mask
    t0 = frozenset(i for i in range(e) if t0_mask >> i & 1)
    if len(t0) * q != p * rank[t0_mask]:
        raise CertificateError(
            "union of density maximizers fails to attain the maximum"
        )
    return DensityCertificate(m=m, t0=t0)


def _phi_table(w: list[Fraction], e: int) -> list[Fraction]:
    """Coordinate sums over every subset, by subset-sum DP."""
    phi = [Fraction(0)] * (1 << e)
    for mask in range(1, 1 << e):
        low = mask & -mask
        phi[mask] = phi[mask ^ low] + w[low.bit_length() - 1]
    return phi


def in_scaled_polytope(matroid: CographicMatroid, w, t) -> bool:
    """Exact membership of w in t*P(M): 0 <= phi_S(w) <= t*rk(S) for all S,
    with equality phi_E(w) = t*rk(E)."""
    e = matroid.n_edges
    _check_size(e)
    w = [Fraction(x) for x in w]
    if len(w) != e:
        raise MatroidError("weight vector length must equal the edge count")
    t = Fraction(t)
    rank = matroid.rank_table()
    phi = _phi_table(w, e)
    full = (1 << e) - 1
    if phi[full] != t * rank[full]:
        return False
    for mask in range(1, full + 1):
        val = phi[mask]
        if val < 0 or val > t * rank[mask]:
            return False
    return True


def build_witness(matroid: CographicMatroid) -> DensityCertificate:
    """Constructive witness w >= 1 with w in m*P(M), certifying the threshold.

    Iterative tightening: starting from the all-ones vector, repeatedly pick
    the smallest edge outside the maximal tight family and raise its
    coordinate by the largest feasible amount.  The maximal tight set grows
    strictly, so at most e rounds occur.  The result is rechecked against
    the polytope definition before being returned.
    """
    e = matroid.n_edges
    cert = density(matroid)
    m = cert.m
    rank = matroid.rank_table()
    full = (1 << e) - 1
    target = [m * rk for rk in rank]

    w = [Fraction(1)] * e
    phi = _phi_table(w, e)

    def tight_union() -> int:
        u = 0
        for mask in range(1, full + 1):
            if phi[mask] == target[mask]:
                u |= mask
        return u

    tight = tight_union()
    if not tight:
        raise CertificateError("no tight set at the all-ones start")
    rounds = 0
    while tight != full:
        rounds += 1
        if rounds > e:
            raise CertificateError("tight family stopped growing")
        ek = next(i for i in range(e) if not tight >> i & 1)
        bit = 1 << ek
        eps = None
        for mask in range(1, full + 1):
            if mask & bit:
                slack = target[mask] - phi[mask]
                if eps is None or slack < eps:
                    eps = slack
        if eps is None or eps <= 0:
            raise CertificateError("no positive slack outside the tight family")
        w[ek] += eps
        for mask in range(1, full + 1):
            if mask & bit:
                phi[mask] += eps
        new_tight = tight_union()
        if new_tight & tight != tight or new_tight == tight:
            raise CertificateError("tight family stopped growing")
        tight = new_tight

    witness = tuple(w)
    if any(x < 1 for x in witness):
        raise CertificateError("witness dropped below the all-ones floor")
    if not in_scaled_polytope(matroid, witness, m):
        raise CertificateError("witness failed the scaled-polytope recheck")
    return DensityCertificate(m=m, t0=cert.t0, witness=witness)


def cover_lp_oracle(g: Multigraph, max_trees: int = MAX_LP_TREES) -> Fraction:
    """Covering-LP value: min sum c_T with sum_T c_T * v_T >= (1,...,1).

    v_T is the indicator of the complement of spanning tree T.  Solved with
    the exact rational simplex; independent of the density route.
    """
    if bridges(g):
        raise MatroidError("covering LP needs a bridgeless graph")
    trees = spanning_trees(g)
    if len(trees) > max_trees:
        raise MatroidError(
            f"{len(trees)} spanning trees exceeds the LP guard ({max_trees})"
        )
    e = g.n_edges
    cols = len(trees)
    a = [[Fraction(0)] * cols for _ in range(e)]
    for j, tree in enumerate(trees):
        for eid in range(e):
            if eid not in tree:
                a[eid][j] = Fraction(1)
    value, _ = simplex.minimize([Fraction(1)] * cols, a, [Fraction(1)] * e)
    return value
