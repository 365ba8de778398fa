import math

import numpy as np
import pytest

from spin2.certify import estimate_delta, sample_in_ball
from spin2.errors import DomainError
from spin2.exact import marginal_ratio_exact, partition_exact
from spin2.graphs import EMPTY_PINS, Graph, PinnedConfig, SPIN_MINUS, SPIN_PLUS
from spin2.params import Params
from spin2.scan import regular_tree
from spin2.weitz import (
    decay_fit,
    differing_set,
    fptas_depth,
    saw_ratio,
    ssm_probe,
    weitz_partition,
)

from conftest import bounded_random_graph


class TestSawRatio:
    def test_single_vertex(self):
        g = Graph.from_edges(1, [])
        p = Params(1.2, 0.8, 0.4 + 0.3j)
        assert saw_ratio(g, 0, EMPTY_PINS, p) == p.lam

    def test_star_center_hardcore(self, star3):
        got = saw_ratio(star3, 0, EMPTY_PINS, Params(0, 1, 1))
        assert abs(got - 1 / 8) <= 1e-14

    def test_c4_matches_oracle(self, c4):
        p = Params(1.0, 2.0, 1.5)
        got = saw_ratio(c4, 0, EMPTY_PINS, p)
        want = marginal_ratio_exact(c4, 0, EMPTY_PINS, p)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))

    def test_zero_lambda_is_zero(self, c4):
        assert saw_ratio(c4, 0, EMPTY_PINS, Params(1.3, 0.7, 0)) == 0

    def test_hardcore_plus_neighbor_pins_to_zero(self, p3):
        cfg = PinnedConfig(((1, SPIN_PLUS),))
        assert saw_ratio(p3, 0, cfg, p=Params(0, 1, 1.7)) == 0

    def test_pinned_root_rejected(self, k2):
        with pytest.raises(DomainError):
            saw_ratio(k2, 0, PinnedConfig(((0, SPIN_MINUS),)), Params(1, 1, 1))

    def test_infeasible_config_rejected(self, k2):
        cfg = PinnedConfig(((1, SPIN_PLUS),))
        with pytest.raises(DomainError):
            saw_ratio(k2, 0, cfg, Params(1, 1, 0))

    def test_truncation_boundary_default_lambda(self, c4):
        p = Params(0.9, 1.4, 0.8)
        shallow = saw_ratio(c4, 0, EMPTY_PINS, p, depth=1)
        # depth 1: both children of the root are truncated at value lam
        want = p.lam * ((p.beta * p.lam + 1) / (p.lam + p.gamma)) ** 2
        assert abs(shallow - want) <= 1e-12

    def test_oracle_equality_random_graphs(self):
        rng = np.random.default_rng(10)
        for _ in range(60):
            n = int(rng.integers(2, 10))
            g = bounded_random_graph(n, 4, rng)
            p = Params(rng.uniform(0.1, 2.5), rng.uniform(0.1, 2.5), rng.uniform(0.05, 3.0))
            v = int(rng.integers(0, n))
            got = saw_ratio(g, v, EMPTY_PINS, p)
            want = marginal_ratio_exact(g, v, EMPTY_PINS, p)
            assert abs(got - want) <= 1e-8 * max(1e-12, abs(want))

    def test_both_leaf_conventions_agree_at_full_depth(self):
        rng = np.random.default_rng(14)
        for _ in range(25):
            n = int(rng.integers(3, 10))
            g = bounded_random_graph(n, 4, rng)
            p = Params(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), rng.uniform(0.1, 2.0))
            a = saw_ratio(g, 0, EMPTY_PINS, p, flip_convention=False)
            b = saw_ratio(g, 0, EMPTY_PINS, p, flip_convention=True)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_oracle_equality_with_pins(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(3, 9))
            g = bounded_random_graph(n, 4, rng)
            p = Params(rng.uniform(0.1, 2.0), rng.uniform(0.2, 2.0), rng.uniform(0.1, 2.0))
            pins = []
            for v in range(1, n):
                roll = rng.random()
                if roll < 0.2:
                    pins.append((v, SPIN_MINUS))
                elif roll < 0.3:
                    pins.append((v, SPIN_PLUS))
            cfg = PinnedConfig(tuple(pins))
            got = saw_ratio(g, 0, cfg, p)
            want = marginal_ratio_exact(g, 0, cfg, p)
            assert abs(got - want) <= 1e-8 * max(1e-12, abs(want))


class TestWeitzPartition:
    def test_k2_closed_form(self, k2):
        p = Params(1.0, 2.0, 1.5)
        result = weitz_partition(k2, p)
        assert abs(result.estimate - 7.25) <= 1e-12
        assert len(result.ratios) == 2

    def test_edgeless_graph(self):
        g = Graph.from_edges(2, [])
        p = Params(0.5, 1.5, 0.7)
        assert abs(weitz_partition(g, p).estimate - (1 + p.lam) ** 2) <= 1e-12

    def test_zero_lambda(self, c4):
        p = Params(1.1, 0.6, 0)
        want = p.gamma ** 4
        assert abs(weitz_partition(c4, p).estimate - want) <= 1e-12 * abs(want)

    def test_telescoping_matches_exact(self):
        rng = np.random.default_rng(12)
        for _ in range(40):
            n = int(rng.integers(1, 10))
            g = bounded_random_graph(n, 4, rng) if n > 1 else Graph.from_edges(1, [])
            p = Params(rng.uniform(0.1, 2.5), rng.uniform(0.1, 2.5), rng.uniform(0.05, 3.0))
            got = weitz_partition(g, p).estimate
            want = partition_exact(g, p)
            assert abs(got - want) <= 1e-8 * max(1e-12, abs(want))

    def test_complex_params_in_certified_ball(self):
        cert = estimate_delta((1.5, 1.5, 1.0), 3, seed=0, n_samples=256)
        rng = np.random.default_rng(13)
        points = sample_in_ball(cert.anchor, cert.delta, rng, 5)
        for _ in range(12):
            n = int(rng.integers(2, 9))
            g = bounded_random_graph(n, 3, rng)
            for p in points:
                got = weitz_partition(g, p).estimate
                want = partition_exact(g, p)
                assert abs(got - want) <= 1e-8 * abs(want)

    def test_truncation_error_bound_shape(self):
        # regular trees: full-depth marginal vs truncated marginal decays
        # geometrically with the certified margin
        cert = estimate_delta((1.5, 1.5, 1.0), 3, seed=0, n_samples=256)
        ilo, ihi = cert.rebuild_potential().image_interval(cert.interval.lo, cert.interval.hi)
        strip_diameter = (ihi - ilo) + 2 * cert.epsilon
        p = Params(1.5, 1.5, 1.0)
        for depth in (3, 5, 8, 12):
            g = regular_tree(3, depth)
            full = saw_ratio(g, 0, EMPTY_PINS, p)
            p_full = full / (1 + full)
            for t in range(1, depth):
                trunc = saw_ratio(g, 0, EMPTY_PINS, p, depth=t)
                p_trunc = trunc / (1 + trunc)
                bound = strip_diameter * (1 - cert.eta) ** (t - 1)
                assert abs(p_trunc - p_full) <= bound


class TestSsm:
    def test_identical_configs(self, p3):
        cfg = PinnedConfig(((2, SPIN_MINUS),))
        probe = ssm_probe(p3, 0, cfg, cfg, Params(0, 1, 1))
        assert probe.gap == 0
        assert probe.distance == math.inf

    def test_path_distance_and_gap(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        sigma = PinnedConfig(((4, SPIN_PLUS),))
        tau = PinnedConfig(((4, SPIN_MINUS),))
        probe = ssm_probe(g, 0, sigma, tau, Params(0, 1, 1))
        assert probe.distance == 4
        # independent check from the exact conditionals
        p = Params(0, 1, 1)
        r_sigma = marginal_ratio_exact(g, 0, sigma, p)
        r_tau = marginal_ratio_exact(g, 0, tau, p)
        want = abs(r_sigma / (1 + r_sigma) - r_tau / (1 + r_tau))
        assert abs(probe.gap - want) <= 1e-12

    def test_free_vs_pinned_counts_as_differing(self):
        sigma = PinnedConfig(((1, SPIN_PLUS), (2, SPIN_MINUS)))
        tau = PinnedConfig(((1, SPIN_PLUS),))
        assert differing_set(sigma, tau) == {2}

    def test_deeper_pins_give_smaller_gaps(self):
        p = Params(0, 1, 1)
        gaps = []
        for depth in (3, 4, 5, 6):
            g = regular_tree(3, depth)
            leaves = [v for v in range(g.n) if g.degree(v) == 1]
            sigma = PinnedConfig(tuple((v, SPIN_PLUS) for v in leaves))
            tau = PinnedConfig(tuple((v, SPIN_MINUS) for v in leaves))
            probe = ssm_probe(g, 0, sigma, tau, p)
            assert probe.distance == depth
            gaps.append(probe.gap)
        assert all(a > b > 0 for a, b in zip(gaps, gaps[1:]))


class TestDecayFit:
    def test_exact_geometric(self):
        pts = [(d, 2.5 * 0.3 ** d) for d in range(1, 8)]
        rate, r2 = decay_fit(pts)
        assert abs(rate - (-math.log(0.3))) <= 1e-12
        assert abs(r2 - 1.0) <= 1e-12

    def test_constant_gaps(self):
        rate, _r2 = decay_fit([(d, 0.7) for d in range(5)])
        assert abs(rate) <= 1e-12

    def test_too_few_points(self):
        with pytest.raises(DomainError):
            decay_fit([(1, 0.5), (2, 0.25)])

    def test_nonpositive_gap(self):
        with pytest.raises(DomainError):
            decay_fit([(1, 0.5), (2, 0.0), (3, 0.1)])


class TestFptasDepth:
    def test_monotone_in_eps(self):
        assert fptas_depth(8, 1e-8, 0.6) >= fptas_depth(8, 1e-4, 0.6)

    def test_full_margin(self):
        assert fptas_depth(100, 1e-9, 1.0) == 1

    def test_matches_formula(self):
        n, eps, eta = 8, 1e-6, 0.6
        want = math.ceil(math.log(n / eps) / -math.log(1 - eta))
        assert fptas_depth(n, eps, eta) == want
