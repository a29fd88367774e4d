import json
import random
from fractions import Fraction

import pytest

from modgraph import (
    CographicMatroid,
    NoCyclesError,
    analyze,
    betti,
    bridges,
    decimal6,
    density,
    genus,
    is_stable,
    make_doubled_2ngon,
    make_ngon,
    optimal_contraction,
    parse_graph,
    search_divergent,
    threshold,
)
from modgraph.convergence import (
    _connected,
    _density_reaches,
    _gen_edge_lists,
    _is_bridgeless,
)
from modgraph.graphs import Multigraph
from modgraph.selftest import (
    bridged_triangles_graph,
    random_bridgeless_multigraph,
    theta_graph,
)


class TestFamilies:
    def test_ngon(self):
        g = make_ngon(3)
        assert g.n_vertices == 3 and g.n_edges == 3
        g2 = make_ngon(2)
        assert g2.n_vertices == 2 and g2.n_edges == 2
        for n in range(2, 9):
            assert betti(make_ngon(n)) == 1
        with pytest.raises(ValueError):
            make_ngon(1)

    def test_doubled_2ngon(self):
        for n in range(1, 6):
            g = make_doubled_2ngon(n)
            assert g.n_edges == 3 * n
            assert betti(g) == n + 1
            assert genus(g) == n + 1
            assert is_stable(g)
            assert not bridges(g)
        g = make_doubled_2ngon(2)
        assert g.n_edges == 6 and betti(g) == 3
        with pytest.raises(ValueError):
            make_doubled_2ngon(0)

    def test_doubled_1_is_theta(self):
        g = make_doubled_2ngon(1)
        assert g.n_vertices == 2 and g.n_edges == 3
        assert density(CographicMatroid(g)).m == Fraction(3, 2)


class TestThreshold:
    def test_ngons(self):
        for n in range(2, 7):
            c, cert = threshold(make_ngon(n))
            assert c == n
            assert cert.witness is not None

    def test_doubled_family(self):
        for n in range(2, 6):
            c, _ = threshold(make_doubled_2ngon(n))
            assert c == n

    def test_bridged_triangles(self):
        c, _ = threshold(bridged_triangles_graph())
        assert c == 3

    def test_tree_raises(self):
        with pytest.raises(NoCyclesError):
            threshold(parse_graph("0 1\n1 2"))

    def test_single_loop(self):
        c, cert = threshold(parse_graph('{"edges": [[0, 0]]}'))
        assert c == 1
        assert cert.witness == (Fraction(1),)


class TestOptimalContraction:
    def test_pn_identity(self):
        for n in (2, 4):
            s, gbar = optimal_contraction(make_ngon(n))
            assert s == frozenset()
            assert gbar.n_edges == n

    def test_theta_identity(self):
        s, gbar = optimal_contraction(theta_graph())
        assert s == frozenset()
        assert betti(gbar) == 2

    def test_doubled_2ngons_collapse(self):
        for n in (3, 4, 5):
            s, gbar = optimal_contraction(make_doubled_2ngon(n))
            assert (gbar.n_vertices, gbar.n_edges, betti(gbar)) == (n, n, 1)
            assert len(s) == 2 * n

    def test_doubled_square_already_optimal(self):
        s, gbar = optimal_contraction(make_doubled_2ngon(2))
        assert s == frozenset()
        assert gbar.n_edges == 6

    def test_loop_in_complement_is_deleted(self):
        # triangle with a pendant loop: T0 is the triangle, the loop goes
        g = parse_graph("0 1\n1 2\n2 0\n0 0")
        s, gbar = optimal_contraction(g)
        assert s == frozenset({3})
        assert gbar.n_edges == 3
        assert betti(gbar) == 1

    def test_c_preserved_random(self):
        rng = random.Random(67)
        for _ in range(15):
            g = random_bridgeless_multigraph(rng, 6, 8, 10**9)
            c = density(CographicMatroid(g)).m
            _, gbar = optimal_contraction(g)
            cbar = density(CographicMatroid(gbar)).m
            assert cbar == c == Fraction(gbar.n_edges, betti(gbar))


class TestGenerator:
    def test_every_isomorphism_class_represented(self):
        # brute force over all labelled multigraphs on <= 4 vertices with
        # <= 4 edges: each connected class must appear in the canonical
        # generator output (completeness of the first-use pruning)
        import itertools

        for v in range(1, 5):
            pairs = [(a, b) for a in range(v) for b in range(a, v)]
            for e in range(1, 5):
                generated = set()
                for ends in _gen_edge_lists(v, e, min_valence=0):
                    if _connected(ends, v):
                        generated.add(_canonical_form(ends, v))
                brute = set()
                for combo in itertools.combinations_with_replacement(pairs, e):
                    used = {x for pair in combo for x in pair}
                    if len(used) != v:
                        continue
                    if _connected(combo, v):
                        brute.add(_canonical_form(combo, v))
                assert generated == brute, (v, e)

    def test_min_valence_respected(self):
        for ends in _gen_edge_lists(3, 5, min_valence=3):
            deg = [0, 0, 0]
            for a, b in ends:
                deg[a] += 1
                deg[b] += 1
            assert min(deg) >= 3


def _canonical_form(ends, v):
    import itertools

    best = None
    for perm in itertools.permutations(range(v)):
        relabeled = tuple(
            sorted(tuple(sorted((perm[a], perm[b]))) for a, b in ends)
        )
        if best is None or relabeled < best:
            best = relabeled
    return best


class TestDensityDecision:
    def test_matches_exhaustive_density(self):
        # the search pre-filter must agree with the exact density scan
        rng = random.Random(71)
        cases = 0
        for v in range(2, 5):
            for e in range(v + 1, min(v + 4, 9)):
                for ends in _gen_edge_lists(v, e, min_valence=3):
                    if not _connected(ends, v) or not _is_bridgeless(ends, v):
                        continue
                    g = Multigraph(tuple((i, 0) for i in range(v)), ends)
                    m = density(CographicMatroid(g)).m
                    for t in (m, m + Fraction(1, 7), Fraction(3, 2), Fraction(5)):
                        got = _density_reaches(ends, v, e, t, min_valence_3=True)
                        assert got == (m >= t), (ends, t, m)
                    cases += 1
        assert cases > 50

    def test_matches_without_valence_assumption(self):
        rng = random.Random(73)
        for _ in range(40):
            g = random_bridgeless_multigraph(rng, 5, 8, 10**9)
            ends = tuple(
                (gidx(g, t), gidx(g, h)) for t, h in g.edges
            )
            m = density(CographicMatroid(g)).m
            for t in (m, m + 1, Fraction(1, 2)):
                got = _density_reaches(
                    ends, g.n_vertices, g.n_edges, t, min_valence_3=False
                )
                assert got == (m >= t)


def gidx(g, vid):
    return {v: i for i, (v, _) in enumerate(g.vertices)}[vid]


class TestSearch:
    def test_guards(self):
        with pytest.raises(ValueError):
            search_divergent(1, 5, 1)
        with pytest.raises(ValueError):
            search_divergent(2, 16, 1)
        with pytest.raises(ValueError):
            search_divergent(2, 5, 0)

    def test_genus2_theta_found(self):
        hits = search_divergent(2, 3, Fraction(3, 2))
        assert any(
            c == Fraction(3, 2) and g.n_edges == 3 for g, c in hits
        )

    def test_genus2_no_hits_at_2(self):
        assert search_divergent(2, 3, Fraction(2)) == []

    def test_two_loop_bouquet_at_target_1(self):
        hits = search_divergent(2, 2, Fraction(1))
        assert len(hits) == 1
        g, c = hits[0]
        assert c == 1 and g.n_vertices == 1 and g.n_edges == 2

    def test_huge_target_empty(self):
        assert search_divergent(2, 4, Fraction(10**6)) == []

    def test_monotone_in_target(self):
        lo = search_divergent(3, 6, Fraction(1))
        hi = search_divergent(3, 6, Fraction(2))
        assert len(hi) <= len(lo)
        lo_keys = {(g.edges, c) for g, c in lo}
        assert all((g.edges, c) in lo_keys for g, c in hi)

    def test_sorted_by_c_then_edges(self):
        hits = search_divergent(3, 7, Fraction(1))
        keys = [(-c, g.n_edges) for g, c in hits]
        assert keys == sorted(keys)

    def test_all_hits_satisfy_contract(self):
        for g, c in search_divergent(3, 7, Fraction(2)):
            assert betti(g) == 3
            assert is_stable(g)
            assert not bridges(g)
            assert c == density(CographicMatroid(g)).m
            assert c >= 2


class TestAnalyze:
    def test_p3_report(self):
        rep = analyze(make_ngon(3))
        d = rep.to_json_dict()
        assert d["schema"] == "1"
        assert d["variant"] == "threshold"
        assert d["c"]["fraction"] == "3"
        assert d["c"]["decimal"] == "3.000000"
        assert d["psi"]["display"] == "x0 + x1 + x2"
        assert d["psi"]["routes_agree"] is True
        assert d["optimal_contraction"]["contracted_edges"] == []
        assert d["convergence"] == {
            "converges_for": "Re(s) > 3",
            "diverges_at": "3",
        }

    def test_tree_variant(self):
        rep = analyze(parse_graph("0 1\n1 2"))
        d = rep.to_json_dict()
        assert d["variant"] == "no_cycles"
        assert "c" not in d
        assert "note" in d

    def test_single_loop(self):
        d = analyze(parse_graph('{"edges": [[0, 0]]}')).to_json_dict()
        assert d["c"]["fraction"] == "1"
        assert d["summary"]["stable"] is False

    def test_bridged_triangles_certificates_on_core(self):
        rep = analyze(bridged_triangles_graph())
        d = rep.to_json_dict()
        assert d["bridges"] == [3]
        assert d["core"]["edges"] == 6
        assert d["c"]["fraction"] == "3"
        # contracted edges reported in original ids, disjoint from bridges
        assert 3 not in d["optimal_contraction"]["contracted_edges"]

    def test_deterministic_bytes(self):
        g = make_doubled_2ngon(3)
        a = json.dumps(analyze(g).to_json_dict(), indent=2)
        b = json.dumps(analyze(g).to_json_dict(), indent=2)
        assert a == b

    def test_deterministic_with_probe(self):
        g = theta_graph()
        a = json.dumps(analyze(g, with_probe=True, probe_seed=7).to_json_dict())
        b = json.dumps(analyze(g, with_probe=True, probe_seed=7).to_json_dict())
        assert a == b
        d = analyze(g, with_probe=True, probe_seed=7).to_json_dict()
        assert d["probe"]["at_threshold"]["verdict"] == "diverging"
        assert d["probe"]["above_threshold"]["verdict"] == "saturating"

    def test_probe_skipped_when_core_too_big(self):
        g = make_doubled_2ngon(3)  # 9 edges
        d = analyze(g, with_probe=True).to_json_dict()
        assert "skipped" in d["probe"]

    def test_decimal6(self):
        assert decimal6(Fraction(3, 2)) == "1.500000"
        assert decimal6(Fraction(1, 3)) == "0.333333"
        assert decimal6(Fraction(-1, 3)) == "-0.333333"
        assert decimal6(Fraction(5)) == "5.000000"
