"""Convergence thresholds, optimal contractions and report assembly.

The threshold c of a connected graph is the maximal density of the
cographic matroid of its bridgeless core, certified by a maximizing edge
set and a polytope witness.  Every graph contracts onto an "optimal" one
with e/b equal to the same threshold; the contraction is read off the
maximal density-attaining set and rechecked exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graphs import (
    Multigraph,
    betti,
    bridges,
    contract_edges,
    delete_edges,
    genus,
    is_stable,
    valences,
)
from .kirchhoff import IntPolynomial, psi_from_graph, psi_trees
from .matroid import (
    CertificateError,
    CographicMatroid,
    DensityCertificate,
    build_witness,
    density,
)

SEARCH_MAX_EDGES = 15


class NoCyclesError(ValueError):
    """The graph is a tree: every edge is a bridge and no threshold exists."""


def make_ngon(n: int) -> Multigraph:
    """Cycle on n vertices (n >= 2); n = 2 gives two parallel edges."""
    if n < 2:
        raise ValueError("an n-gon needs n >= 2")
    vertices = tuple((i, 0) for i in range(n))
    edges = tuple((i, (i + 1) % n) for i in range(n))
    return Multigraph(vertices, edges)


def make_doubled_2ngon(n: int) -> Multigraph:
    """2n-gon with every other side doubled: 3n edges, Betti number n + 1.

    Stable for every n >= 1 (each vertex meets one doubled and one single
    side).  The 2n cycle edges come first, then the duplicate copies of the
    even-indexed sides.
    """
    if n < 1:
        raise ValueError("the doubled 2n-gon needs n >= 1")
    v = 2 * n
    vertices = tuple((i, 0) for i in range(v))
    edges = [(i, (i + 1) % v) for i in range(v)]
    edges.extend((i, i + 1) for i in range(0, v, 2))
    return Multigraph(vertices, tuple(edges))


def threshold(g: Multigraph) -> tuple[Fraction, DensityCertificate]:
    """Convergence threshold and certificates.

    Contracts all bridges, then takes the maximal density of the cographic
    matroid of the core; the returned certificate includes the maximizing
    set T0 and a polytope witness, both indexed by core edge ids.
    """
    if betti(g) == 0:
        raise NoCyclesError(
            "every edge is a bridge (b = 0); the threshold is undefined"
        )
    core, _ = contract_edges(g, bridges(g))
    cert = build_witness(CographicMatroid(core))
    return cert.m, cert


def optimal_contraction(g: Multigraph) -> tuple[frozenset[int], Multigraph]:
    """Edge set S and quotient graph with c unchanged and equal to e/b.

    S is the complement of the maximal density-attaining set T0; loops in S
    are deleted and the rest is contracted.  The optimality of the result
    (same threshold, threshold = edge count / Betti number) is recomputed
    from scratch and a failure raises CertificateError.
    """
    matroid = CographicMatroid(g)
    cert = density(matroid)
    contracted = frozenset(range(g.n_edges)) - cert.t0
    loops = frozenset(e for e in contracted if g.is_loop(e))
    trimmed, del_map = delete_edges(g, loops)
    reduced, _ = contract_edges(
        trimmed, frozenset(del_map[e] for e in contracted - loops)
    )
    if reduced.n_edges != len(cert.t0):
        raise CertificateError("contraction did not leave exactly T0")
    if betti(reduced) != matroid.corank(cert.t0):
        raise CertificateError("contraction changed the matroid rank of T0")
    if bridges(reduced):
        raise CertificateError("optimal contraction produced a bridge")
    c_bar = density(CographicMatroid(reduced)).m
    if c_bar != cert.m:
        raise CertificateError(
            f"threshold changed under contraction: {cert.m} -> {c_bar}"
        )
    if c_bar != Fraction(reduced.n_edges, betti(reduced)):
        raise CertificateError("contracted graph is not optimal (c != e/b)")
    return contracted, reduced


# ---------------------------------------------------------------------------
# Witness search


def _series_classes(ends, n_vertices, n_edges) -> list[list[int]]:
    """Partition edges into cographic parallel classes ({e, f} a 2-cut).

    Input graph must be connected and bridgeless, so parallelism is an
    equivalence relation and every class has matroid rank 1.
    """

    def comps_without(skip_a: int, skip_b: int) -> int:
        parent = list(range(n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = n_vertices
        for eid, (a, b) in enumerate(ends):
            if eid == skip_a or eid == skip_b:
                continue
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        return comps

    assigned = [-1] * n_edges
    classes: list[list[int]] = []
    for i in range(n_edges):
        if assigned[i] >= 0:
            continue
        cls = [i]
        assigned[i] = len(classes)
        for j in range(i + 1, n_edges):
            if assigned[j] < 0 and comps_without(i, j) > 1:
                cls.append(j)
                assigned[j] = assigned[i]
        classes.append(cls)
    return classes


def _rank_of_mask(ends, n_vertices, mask: int) -> int:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n_vertices
    size = 0
    for eid, (a, b) in enumerate(ends):
        if mask >> eid & 1:
            size += 1
            continue
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return size - (comps - 1)


def _density_reaches(ends, n_vertices, n_edges, target: Fraction,
                     min_valence_3: bool) -> bool:
    """Exact decision: does some nonempty S have |S| >= target * rank(S)?

    Every density maximizer extends to a flat, flats are unions of series
    classes, and (for target > 1) a maximizer never contains a graph loop.
    Under minimum valence 3 a loop-free flat of rank k with >= target*k
    edges forces comp(G - S) <= v/2 + |S|/3 in a loopless graph, hence
    k <= (3v - 6)/(4*target - 6); graphs with loops get the weaker bound
    k <= (v - 2)/(target - 2) (single-vertex components may keep loops and
    pay only their >= 2 non-loop endpoints, which bridgelessness forces).
    This keeps the decision cheap at 14-15 edges, where full subset scans
    would dominate the search.
    """
    p, q = target.numerator, target.denominator
    classes = _series_classes(ends, n_vertices, n_edges)
    sizes = [len(c) for c in classes]
    if max(sizes) * q >= p:
        return True
    ncls = len(classes)

    if min_valence_3:
        has_loop = any(a == b for a, b in ends)
        if not has_loop and 4 * p > 6 * q:
            k_bound = ((3 * n_vertices - 6) * q) // (4 * p - 6 * q)
        elif has_loop and p > 2 * q:
            k_bound = ((n_vertices - 2) * q) // (p - 2 * q)
        else:
            k_bound = None
        if k_bound is not None:
            k_bound = min(k_bound, n_edges * q // p, n_edges - n_vertices + 1)
            if k_bound <= 1:
                return False
            if k_bound <= 3:
                reps = [c[0] for c in classes]
                for k in range(2, min(k_bound, ncls) + 1):
                    for combo in itertools.combinations(range(ncls), k):
                        base = 0
                        for c in combo:
                            base |= 1 << reps[c]
                        if _rank_of_mask(ends, n_vertices, base) != k:
                            continue
                        weight = 0
                        for c in range(ncls):
                            probe = base | (1 << reps[c])
                            if _rank_of_mask(ends, n_vertices, probe) == k:
                                weight += sizes[c]
                        if weight * q >= p * k:
                            return True
                return False

    if ncls <= 13:
        # Weighted scan over unions of series classes: exact, since every
        # maximizer is such a union.
        masks = []
        for cls in classes:
            m = 0
            for eid in cls:
                m |= 1 << eid
            masks.append(m)
        for sub in range(1, 1 << ncls):
            union = 0
            weight = 0
            for c in range(ncls):
                if sub >> c & 1:
                    union |= masks[c]
                    weight += sizes[c]
            if weight * q >= p * _rank_of_mask(ends, n_vertices, union):
                return True
        return False

    for mask in range(1, 1 << n_edges):
        if mask.bit_count() * q >= p * _rank_of_mask(ends, n_vertices, mask):
            return True
    return False


def _gen_edge_lists(v: int, e: int, min_valence: int = 3):
    """Canonical sorted edge multisets on exactly v vertices with e edges.

    Edges are normalized (a, b) with a <= b and emitted in nondecreasing
    lexicographic order; a new vertex may only enter as max_used + 1, so
    every isomorphism class keeps at least one representative (its
    lexicographically minimal labelling).  Valences are forced >= min_valence.
    """
    exact = min_valence > 0 and 2 * e == min_valence * v  # no slack valence
    deg = [0] * v
    edges: list[tuple[int, int]] = []

    def rec(last_a: int, last_b: int, used: int):
        placed = len(edges)
        if placed == e:
            if used == v and all(d >= min_valence for d in deg):
                yield tuple(edges)
            return
        remaining = e - placed
        deficit = sum(
            min_valence - deg[i] for i in range(used) if deg[i] < min_valence
        ) + min_valence * (v - used)
        if deficit > 2 * remaining:
            return
        first_needy = next(
            (i for i in range(used) if deg[i] < min_valence), used
        )
        hi_a = min(first_needy, used, v - 1)
        for a in range(last_a, hi_a + 1):
            new_a = a == used
            b_lo = last_b if a == last_a else a
            b_hi = min(v - 1, (a + 1) if new_a else used)
            for b in range(b_lo, b_hi + 1):
                if exact:
                    # Every valence lands exactly on min_valence; a loop
                    # would leave its vertex with one non-loop edge, a bridge.
                    if a == b:
                        continue
                    if deg[a] >= min_valence or deg[b] >= min_valence:
                        continue
                edges.append((a, b))
                deg[a] += 1
                deg[b] += 1
                yield from rec(a, b, max(used, b + 1))
                deg[a] -= 1
                deg[b] -= 1
                edges.pop()

    yield from rec(0, 0, 0)


def _connected(ends, n_vertices) -> bool:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n_vertices
    for a, b in ends:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


def _is_bridgeless(ends, n_vertices) -> bool:
    for skip in range(len(ends)):
        a0, b0 = ends[skip]
        if a0 == b0:
            continue
        parent = list(range(n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = n_vertices
        for eid, (a, b) in enumerate(ends):
            if eid == skip:
                continue
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        if comps > 1:
            return False
    return True


def _fingerprint(g: Multigraph, psi: IntPolynomial):
    degs = tuple(sorted(valences(g).values()))
    monos = tuple(
        sorted(
            tuple(i for i, p in enumerate(exps) if p)
            for exps, _ in psi.terms().items()
        )
    )
    return (g.n_vertices, g.n_edges, degs, monos)


def search_divergent(
    target_genus: int, max_edges: int, target
) -> list[tuple[Multigraph, Fraction]]:
    """Stable genus-0-vertex graphs with b = target_genus and c >= target.

    Enumerates connected bridgeless multigraphs with minimum valence 3 and
    at most max_edges edges, by recursive edge addition in canonical order.
    Hits are deduplicated by the cheap fingerprint (v, e, valence sequence,
    Kirchhoff monomial multiset) only, so isomorphic duplicates can survive;
    the output is sorted by c descending, then edge count ascending.
    """
    if target_genus < 2:
        raise ValueError("search needs genus >= 2")
    if not 1 <= max_edges <= SEARCH_MAX_EDGES:
        raise ValueError(f"max_edges must be in 1..{SEARCH_MAX_EDGES}")
    target = Fraction(target)
    if target <= 0:
        raise ValueError("target must be positive")

    hits: dict[tuple, tuple[Multigraph, Fraction]] = {}
    for v in range(1, max_edges - target_genus + 2):
        e = v + target_genus - 1
        if e > max_edges:
            break
        if 3 * v > 2 * e:
            continue  # minimum valence 3 unreachable
        for ends in _gen_edge_lists(v, e):
            if not _connected(ends, v):
                continue
            if not _is_bridgeless(ends, v):
                continue
            if not _density_reaches(ends, v, e, target, min_valence_3=True):
                continue
            g = Multigraph(tuple((i, 0) for i in range(v)), ends)
            cert = density(CographicMatroid(g))
            if cert.m < target:
                raise CertificateError(
                    "density pre-filter accepted a graph below the target"
                )
            key = _fingerprint(g, psi_trees(g))
            if key not in hits:
                hits[key] = (g, cert.m)
    out = sorted(hits.items(), key=lambda kv: (-kv[1][1], kv[1][0].n_edges, kv[0]))
    return [pair for _, pair in out]


# ---------------------------------------------------------------------------
# Report assembly


def rational_fields(x: Fraction) -> dict:
    """Stable JSON rendering of an exact rational: string, decimal, float."""
    return {
        "fraction": str(x),
        "decimal": decimal6(x),
        "float": float(x),
    }


def decimal6(x: Fraction) -> str:
    """Exact decimal rendering to 6 places (round half to even)."""
    scaled = round(x * 10**6)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 10**6}.{scaled % 10**6:06d}"


@dataclass(frozen=True)
class ConvergenceReport:
    """Full analysis of one input graph.

    For tree inputs (b = 0) the report uses the "no_cycles" variant: there
    is no polynomial factor in the integrand and no threshold; all
    threshold-related fields are None.
    """

    graph: Multigraph
    stable: bool
    bridge_ids: tuple[int, ...]
    variant: str  # "threshold" or "no_cycles"
    core: Multigraph | None = None
    core_edge_map: tuple[tuple[int, int], ...] = ()
    psi: IntPolynomial | None = None
    psi_routes_agree: bool = False
    c: Fraction | None = None
    certificate: DensityCertificate | None = None
    contracted_edges: tuple[int, ...] = ()  # original edge ids
    optimal_graph: Multigraph | None = None
    probe: dict | None = None

    def to_json_dict(self) -> dict:
        g = self.graph
        out = {
            "schema": "1",
            "variant": self.variant,
            "graph": g.to_json_dict(),
            "summary": {
                "vertices": g.n_vertices,
                "edges": g.n_edges,
                "betti": betti(g),
                "genus": genus(g),
                "stable": self.stable,
            },
            "bridges": list(self.bridge_ids),
        }
        if self.variant == "no_cycles":
            out["note"] = (
                "every edge is a bridge; the integrand has no polynomial "
                "factor and no divergence threshold is defined"
            )
            return out
        cert = self.certificate
        core = self.core
        gbar = self.optimal_graph
        out["core"] = {
            "graph": core.to_json_dict(),
            "edges": core.n_edges,
            "betti": betti(core),
            "edge_map": {str(a): b for a, b in self.core_edge_map},
        }
        out["psi"] = {
            "routes_agree": self.psi_routes_agree,
            "terms": len(self.psi.terms()),
            "degree": self.psi.degree(),
            "display": str(self.psi),
        }
        out["c"] = rational_fields(self.c)
        out["certificate"] = {
            "m": str(cert.m),
            "t0": sorted(cert.t0),
            "witness": [str(x) for x in cert.witness],
        }
        out["optimal_contraction"] = {
            "contracted_edges": list(self.contracted_edges),
            "graph": gbar.to_json_dict(),
            "edges": gbar.n_edges,
            "betti": betti(gbar),
            "c": rational_fields(Fraction(gbar.n_edges, betti(gbar))),
        }
        out["convergence"] = {
            "converges_for": f"Re(s) > {self.c}",
            "diverges_at": str(self.c),
        }
        out["probe"] = self.probe
        return out

    def csv_row(self, label: str = "-") -> list[str]:
        g = self.graph
        if self.variant == "no_cycles":
            c_str = dec = ""
            core_e = core_b = 0
            contracted = psi_terms = 0
        else:
            c_str = str(self.c)
            dec = decimal6(self.c)
            core_e = self.core.n_edges
            core_b = betti(self.core)
            contracted = len(self.contracted_edges)
            psi_terms = len(self.psi.terms())
        return [
            label,
            str(g.n_vertices),
            str(g.n_edges),
            str(betti(g)),
            str(genus(g)),
            str(self.stable).lower(),
            self.variant,
            c_str,
            dec,
            str(core_e),
            str(core_b),
            str(contracted),
            str(psi_terms),
        ]


CSV_HEADER = [
    "input",
    "vertices",
    "edges",
    "betti",
    "genus",
    "stable",
    "variant",
    "c",
    "c_decimal",
    "core_edges",
    "core_betti",
    "contracted_edges",
    "psi_terms",
]


class PsiMismatchError(CertificateError):
    """The two Kirchhoff routes disagreed; a hard failure."""


def analyze(g: Multigraph, with_probe: bool = False,
            probe_seed: int | None = None) -> ConvergenceReport:
    """Run the full pipeline on one graph and package the report.

    Stability, bridges, Kirchhoff polynomial by both routes (with exact
    equality enforced), threshold with certificates, optimal contraction of
    the bridgeless core, and optionally numeric probes at s = c and
    s = c + 1/2.
    """
    stable = is_stable(g)
    bridge_ids = tuple(sorted(bridges(g)))
    if betti(g) == 0:
        return ConvergenceReport(
            graph=g, stable=stable, bridge_ids=bridge_ids, variant="no_cycles"
        )
    det_route, tree_route = psi_from_graph(g)
    if det_route != tree_route:
        raise PsiMismatchError(
            "determinant and spanning-tree routes disagree on the Kirchhoff "
            "polynomial"
        )
    core, core_map = contract_edges(g, bridge_ids)
    c, cert = threshold(g)
    contracted_core, gbar = optimal_contraction(core)
    inv_map = {new: old for old, new in core_map.items()}
    contracted_original = tuple(sorted(inv_map[e] for e in contracted_core))

    probe_payload = None
    if with_probe:
        probe_payload = _probe_payload(core, c, probe_seed)

    return ConvergenceReport(
        graph=g,
        stable=stable,
        bridge_ids=bridge_ids,
        variant="threshold",
        core=core,
        core_edge_map=tuple(sorted(core_map.items())),
        psi=tree_route,
        psi_routes_agree=True,
        c=c,
        certificate=cert,
        contracted_edges=contracted_original,
        optimal_graph=gbar,
        probe=probe_payload,
    )


def _probe_payload(core: Multigraph, c: Fraction, seed: int | None) -> dict:
    from .probe import PROBE_MAX_EDGES, DEFAULT_SEED, ProbeConfig, truncated_J

    if core.n_edges > PROBE_MAX_EDGES:
        return {
            "skipped": f"core has {core.n_edges} edges; probes support at "
            f"most {PROBE_MAX_EDGES}"
        }
    seed = DEFAULT_SEED if seed is None else seed
    payload = {}
    for label, s in (("at_threshold", float(c)), ("above_threshold", float(c) + 0.5)):
        cfg = ProbeConfig(s=s, seed=seed)
        verdict = truncated_J(core, cfg)
        payload[label] = {
            "s": s,
            "method": cfg.method,
            "seed": seed,
            "grid": list(cfg.r_grid),
            "values": list(verdict.values),
            "stderrs": list(verdict.stderrs),
            "increments": list(verdict.increments),
            "ratios": list(verdict.ratios),
            "decay_ratio": verdict.decay_ratio,
            "verdict": verdict.verdict,
        }
    return payload
