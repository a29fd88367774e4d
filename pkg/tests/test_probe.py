import math

import pytest

from modgraph import ProbeConfig, make_ngon, parse_graph, truncated_J, model_integral
from modgraph.probe import DEFAULT_GRID, _gl_region, _term_supports
from modgraph.kirchhoff import psi_trees
from modgraph.selftest import theta_graph


class TestProbeConfig:
    def test_defaults(self):
        cfg = ProbeConfig(s=2.0)
        assert cfg.r_grid == DEFAULT_GRID
        assert cfg.method == "monte_carlo"

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            ProbeConfig(s=1.0, r_grid=(2.0, 60.0, 400.0))  # 2.0 < e
        with pytest.raises(ValueError):
            ProbeConfig(s=1.0, r_grid=(60.0, 50.0, 400.0))
        with pytest.raises(ValueError):
            ProbeConfig(s=1.0, r_grid=(60.0, 400.0))  # too short

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            ProbeConfig(s=1.0, samples=10)

    def test_method_validation(self):
        with pytest.raises(ValueError):
            ProbeConfig(s=1.0, method="laplace")


class TestTruncatedJ:
    def test_bridge_rejected(self):
        with pytest.raises(ValueError, match="bridge"):
            truncated_J(parse_graph("0 1\n1 2\n2 0\n0 3"), ProbeConfig(s=2.0))

    def test_single_loop_closed_form(self):
        # F(R) = log R at s = 1: exact increments of 2 with the default grid
        g = parse_graph('{"edges": [[0, 0]]}')
        v = truncated_J(g, ProbeConfig(s=1.0))
        assert v.values == pytest.approx([4.0, 6.0, 8.0, 10.0], rel=5e-3)
        assert v.verdict == "diverging"

    def test_values_nondecreasing(self):
        v = truncated_J(make_ngon(3), ProbeConfig(s=3.0))
        assert all(a <= b for a, b in zip(v.values, v.values[1:]))

    def test_seed_reproducible(self):
        g = theta_graph()
        a = truncated_J(g, ProbeConfig(s=1.7, seed=99))
        b = truncated_J(g, ProbeConfig(s=1.7, seed=99))
        assert a == b
        c = truncated_J(g, ProbeConfig(s=1.7, seed=100))
        assert c.values != a.values

    def test_quadrature_matches_monte_carlo(self):
        g = theta_graph()
        mc = truncated_J(g, ProbeConfig(s=2.0))
        gl = truncated_J(g, ProbeConfig(s=2.0, method="tensor_quadrature"))
        assert gl.values == pytest.approx(mc.values, rel=2e-2)
        assert gl.verdict == mc.verdict == "saturating"

    def test_quadrature_guard(self):
        from modgraph import make_doubled_2ngon

        g = make_doubled_2ngon(2)  # 6 edges
        with pytest.raises(ValueError, match="quadrature"):
            truncated_J(g, ProbeConfig(s=3.0, method="tensor_quadrature"))

    def test_edge_guard(self):
        from modgraph import make_doubled_2ngon

        g = make_doubled_2ngon(3)  # 9 edges
        with pytest.raises(ValueError, match="at most"):
            truncated_J(g, ProbeConfig(s=3.0))

    def test_verdicts_fast_cases(self):
        loop = parse_graph('{"edges": [[0, 0]]}')
        assert truncated_J(loop, ProbeConfig(s=1.5)).verdict == "saturating"
        theta = theta_graph()
        assert truncated_J(theta, ProbeConfig(s=1.5)).verdict == "diverging"
        assert truncated_J(theta, ProbeConfig(s=2.0)).verdict == "saturating"

    @pytest.mark.parametrize("maker", ["P2", "P5", "K4", "doubled_square"])
    def test_verdicts_consistent_with_threshold(self, maker):
        # diverging at s = c, saturating at s = c + 1/2, on probe-sized
        # corpus graphs up to 6 edges
        from modgraph import CographicMatroid, density, make_doubled_2ngon
        from modgraph.selftest import k4_graph

        g = {
            "P2": make_ngon(2),
            "P5": make_ngon(5),
            "K4": k4_graph(),
            "doubled_square": make_doubled_2ngon(2),
        }[maker]
        c = float(density(CographicMatroid(g)).m)
        assert truncated_J(g, ProbeConfig(s=c)).verdict == "diverging"
        assert truncated_J(g, ProbeConfig(s=c + 0.5)).verdict == "saturating"

    def test_scaling_doubled_coefficients(self):
        # duplicating every monomial evaluates 2*psi, so the integral picks
        # up exactly 2^(-s) under quadrature weights
        g = theta_graph()
        s = 1.75
        supports = _term_supports(psi_trees(g))
        lo, hi = [0.0] * 3, [4.0] * 3
        base, _ = _gl_region(supports, s, lo, hi, 24)
        doubled, _ = _gl_region(supports + supports, s, lo, hi, 24)
        assert doubled == pytest.approx(2.0 ** (-s) * base, rel=1e-12)


class TestModelIntegral:
    def test_product_closed_form(self):
        r = math.exp(6.0)
        assert model_integral(1, "product", 2.0, r) == pytest.approx(
            1.0 - math.exp(-6.0), rel=1e-12
        )
        assert model_integral(3, "product", 1.0, r) == pytest.approx(216.0, rel=1e-12)

    def test_product_limit_one(self):
        assert model_integral(1, "product", 2.0, 1e9) == pytest.approx(1.0, abs=1e-8)

    # Frozen oracle values from nested adaptive quadrature of the sum-mode
    # integrand over [1, e^4]^n (independent of the antiderivative engine).
    ORACLE = {
        (1, 1): 4.0,
        (1, 2): 0.9816843611112658,
        (2, 2): 2.650005494715729,
        (2, 3): 0.23659269976009198,
        (3, 3): 1.000569467463647,
        (3, 4): 0.05024116647686986,
    }

    @pytest.mark.parametrize("n,s", sorted(ORACLE))
    def test_sum_integer_matches_oracle(self, n, s):
        r = math.exp(4.0)
        assert model_integral(n, "sum", float(s), r) == pytest.approx(
            self.ORACLE[(n, s)], rel=1e-6
        )

    # Non-integer exponents go through quadrature; frozen the same way.
    ORACLE_QUAD = {
        (2, 2.5): 0.712770566619546,
        (3, 3.5): 0.205989573462585,
    }

    @pytest.mark.parametrize("n,s", sorted(ORACLE_QUAD))
    def test_sum_quadrature_matches_oracle(self, n, s):
        r = math.exp(4.0)
        assert model_integral(n, "sum", s, r) == pytest.approx(
            self.ORACLE_QUAD[(n, s)], rel=1e-6
        )

    def test_sum_log_divergence_at_boundary(self):
        # increments roughly constant per unit of log R at s = n
        vals = [model_integral(2, "sum", 2.0, math.exp(k)) for k in (4, 6, 8, 10)]
        inc = [b - a for a, b in zip(vals, vals[1:])]
        assert inc[2] / inc[1] == pytest.approx(1.0, abs=0.05)

    def test_sum_convergent_above_boundary(self):
        vals = [model_integral(2, "sum", 3.0, math.exp(k)) for k in (4, 6, 8, 10)]
        inc = [b - a for a, b in zip(vals, vals[1:])]
        assert inc[2] < 0.5 * inc[1]
        assert vals[-1] < 0.3

    def test_guards(self):
        with pytest.raises(ValueError):
            model_integral(0, "sum", 2.0, 100.0)
        with pytest.raises(ValueError):
            model_integral(1, "sum", 2.0, 1.5)
        with pytest.raises(ValueError):
            model_integral(1, "geometric", 2.0, 100.0)
