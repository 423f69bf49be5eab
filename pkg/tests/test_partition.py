"""Weights, exact and Monte Carlo log Z, and the deterministic bounds."""

import math
from dataclasses import replace

import numpy as np
import pytest

from gibbslab import (
    Discrete,
    EdgePotentialSpec,
    Hypergraph,
    ModelSpec,
    NodePotentialSpec,
    SoftStateParams,
    StateSpaceCapError,
    add_edge,
    build_model,
    edge_change_bound,
    embed_discrete,
    instance_from_json,
    instance_to_json,
    log_z_exact,
    log_z_mc,
    logz_bounds,
    logz_row,
    make_instance,
    node_change_bound,
    replace_node_table,
    weight,
)
from gibbslab.partition import Instance, LogZ

from conftest import random_instance
from naive import naive_log_z


def _graph(n, edges, k=2):
    return Hypergraph(n, k, np.array(edges, dtype=int).reshape(-1, k))


def _constant_model(rho: float) -> ModelSpec:
    """h = rho/2 per color and J = rho everywhere, so rho_min = rho_max."""
    soft = SoftStateParams(kappa=2.0, rho_min=rho, rho_max=rho, j_max=rho,
                           alpha=rho, omega_h=((0.0, 2.0),))
    return ModelSpec("constant", Discrete(2),
                     NodePotentialSpec(table=np.full(2, rho / 2.0)),
                     EdgePotentialSpec(2, support=((np.full((2, 2), rho), 1.0),)),
                     soft, {})


class TestWeight:
    def test_hard_core_zero(self):
        """IS forbids both endpoints occupied: log H = -inf."""
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        assert weight(inst, [1, 1]) == -math.inf
        assert weight(inst, [1, 0]) == 0.0  # lambda = 1: log(1*1*1)

    def test_empty_graph_unit_potentials(self):
        m = build_model("potts", q=3, beta=0.7)
        inst = make_instance(m, _graph(2, [], k=2), 0)
        for sigma in ([0, 0], [1, 2], [2, 1]):
            assert weight(inst, sigma) == 0.0

    def test_ising_equal_spins(self):
        """Anti-ferromagnetic convention: equal spins weigh e^-beta."""
        beta = 0.9
        m = build_model("ising", beta=beta, h=1.0)
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        assert weight(inst, [1, 1]) == pytest.approx(-beta)
        assert weight(inst, [0, 1]) == pytest.approx(beta)

    def test_validates_assignment(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        with pytest.raises(ValueError):
            weight(inst, [0, 2])
        with pytest.raises(ValueError):
            weight(inst, [0])


class TestLogZExact:
    def test_independent_set_examples(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        single = make_instance(m, _graph(2, [[0, 1]]), 0)
        assert math.exp(log_z_exact(single).value) == pytest.approx(3.0, rel=1e-12)
        path = make_instance(m, _graph(3, [[0, 1], [1, 2]]), 0)
        assert math.exp(log_z_exact(path).value) == pytest.approx(5.0, rel=1e-12)

    def test_potts_beta_zero(self):
        m = build_model("potts", q=3, beta=0.0)
        for n, edges in ((2, [[0, 1]]), (4, [[0, 1], [2, 3], [1, 2]])):
            inst = make_instance(m, _graph(n, edges), 0)
            assert log_z_exact(inst).value == pytest.approx(n * math.log(3), rel=1e-12)

    def test_cycle_lucas_number_n20(self):
        """Independent sets of the cycle C_20 number L_20 = 15127 (Lucas);
        exercises the multi-chunk enumeration at the 1e-12 target."""
        m = build_model("independent_set", **{"lambda": 1.0})
        cycle = _graph(20, [[i, (i + 1) % 20] for i in range(20)])
        inst = make_instance(m, cycle, 0)
        value = log_z_exact(inst).value
        assert value == pytest.approx(math.log(15127), rel=1e-12)

    def test_zero_partition_function(self):
        """Forcing the forbidden IS configuration gives Z = 0 exactly."""
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        forced = replace_node_table(replace_node_table(inst, 0, [0.0, 1.0]),
                                    1, [0.0, 1.0])
        result = log_z_exact(forced)
        assert result.is_zero and result == LogZ(-math.inf)

    def test_matches_naive_oracle(self):
        """Agrees with the rational enumerator to 1e-10 relative."""
        rng = np.random.default_rng(21)
        for _ in range(30):
            inst = random_instance(rng)
            got = log_z_exact(inst).value
            want = naive_log_z(inst)
            if want == -math.inf:
                assert got == -math.inf
            else:
                assert got == pytest.approx(want, rel=1e-10, abs=1e-10)

    def test_chunking_and_workers_bit_identical(self):
        """Worker count never changes the result; chunk size only within
        round-off."""
        m = build_model("ising", beta=0.4, h=1.2)
        graph = _graph(10, [[i, (i + 1) % 10] for i in range(10)])
        inst = make_instance(m, graph, 5)
        full = log_z_exact(inst).value
        chunked = log_z_exact(inst, chunk_size=64).value
        two_workers = log_z_exact(inst, chunk_size=64, n_workers=2).value
        assert chunked == two_workers
        assert full == pytest.approx(chunked, rel=1e-13)

    def test_cap(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(6, [[0, 1]]), 0)
        with pytest.raises(StateSpaceCapError):
            log_z_exact(inst, cap=2 ** 5)

    def test_continuous_cells_use_lengths(self):
        """Half-width cells halve every node factor."""
        m = build_model("potts", q=2, beta=0.0)
        emb = embed_discrete(m)
        squeezed = replace(emb, domain=type(emb.domain)(((0.0, 0.5), (1.0, 1.5))))
        inst = make_instance(squeezed, _graph(2, [[0, 1]]), 0)
        # Z = (2 * 0.5)^2 = 1
        assert log_z_exact(inst).value == pytest.approx(0.0, abs=1e-12)


class TestLogZMc:
    def test_no_edges_is_exact(self):
        m = build_model("ising", beta=0.3, h=1.7)
        inst = make_instance(m, _graph(3, [], k=2), 0)
        est = log_z_mc(inst, samples=10, seed=1)
        assert est.value == pytest.approx(3 * math.log(2.7), rel=1e-12)
        assert est.std_error == 0.0

    def test_constant_edge_weight_zero_variance(self):
        """J identically 1 (potts beta=0): exact from the first sample."""
        m = build_model("potts", q=3, beta=0.0)
        inst = make_instance(m, _graph(3, [[0, 1], [1, 2]]), 0)
        est = log_z_mc(inst, samples=2, seed=0)
        assert est.value == pytest.approx(3 * math.log(3), rel=1e-12)
        assert est.std_error == 0.0

    def test_matches_exact_within_se(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        est = log_z_mc(inst, samples=1_000_000, seed=3)
        assert abs(est.value - math.log(3)) <= 3 * est.std_error
        assert est.std_error < 1e-3

    def test_worker_count_bit_identical(self):
        m = build_model("ksat", k=2, beta=0.8)
        inst = make_instance(m, _graph(5, [[0, 1], [2, 3], [3, 4]]), 9)
        a = log_z_mc(inst, samples=40_000, seed=4)
        b = log_z_mc(inst, samples=40_000, seed=4, n_workers=2)
        assert a.value == b.value and a.std_error == b.std_error

    def test_all_zero_weights_reports_bound(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        forced = replace_node_table(replace_node_table(inst, 0, [0.0, 1.0]),
                                    1, [0.0, 1.0])
        est = log_z_mc(forced, samples=100, seed=0)
        assert est.value == -math.inf and est.std_error is None
        assert est.zero_fraction == 1.0 and est.log_upper_bound is not None

    def test_rejects_zero_mass_node(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        bad = replace_node_table(inst, 0, [0.0, 0.0])
        with pytest.raises(ValueError):
            log_z_mc(bad, samples=10, seed=0)


class TestBounds:
    def test_sandwich_example(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        lo, hi = logz_bounds(inst)
        assert lo == 0.0 and hi == pytest.approx(3 * math.log(2))
        assert lo <= log_z_exact(inst).value <= hi

    def test_constant_model_bounds_collapse(self):
        inst = make_instance(_constant_model(1.7), _graph(1, [], k=2), 0)
        lo, hi = logz_bounds(inst)
        assert lo == hi == pytest.approx(math.log(1.7))
        assert log_z_exact(inst).value == pytest.approx(lo, abs=1e-12)

    def test_ksat_plugin(self):
        m = build_model("ksat", k=3, beta=0.5)
        inst = make_instance(m, _graph(3, [[0, 1, 2], [0, 0, 1], [2, 2, 2]], k=3), 1)
        lo, hi = logz_bounds(inst)
        assert lo == pytest.approx(6 * -0.5)
        assert hi == pytest.approx(6 * math.log(2))

    def test_sandwich_random_instances(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            inst = random_instance(rng, n_max=5)
            lo, hi = logz_bounds(inst)
            value = log_z_exact(inst).value
            assert lo - 1e-9 <= value <= hi + 1e-9


class TestChangeBounds:
    def test_node_bound_examples(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        isolated = make_instance(m, _graph(1, [], k=2), 0)
        assert node_change_bound(isolated, 0) == pytest.approx(2 * math.log(2))
        inst_c = make_instance(_constant_model(2.0), _graph(2, [[0, 1]]), 0)
        assert node_change_bound(inst_c, 0) == 0.0
        mp = build_model("potts", q=2, beta=1.0)
        star = make_instance(mp, _graph(4, [[0, 1], [0, 2], [0, 3]]), 0)
        assert node_change_bound(star, 0) == pytest.approx(8 * mp.soft.log_ratio)

    def test_edge_bound_examples(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        empty = make_instance(m, _graph(2, [], k=2), 0)
        # lone edge added to the empty graph: neighborhood (incl. self) = 1
        assert edge_change_bound(empty, (0, 1)) == pytest.approx(7 * math.log(2))
        inst_c = make_instance(_constant_model(1.0), _graph(2, [[0, 1]]), 0)
        assert edge_change_bound(inst_c, 0) == 0.0
        mk = build_model("ksat", k=3, beta=0.5)
        inst3 = make_instance(
            mk, _graph(5, [[0, 1, 2], [2, 3, 4], [0, 0, 3]], k=3), 0)
        # adding (1, 2, 3) touches all three existing edges: nb = 4 with self
        expect = (2 * 3 + 2 * 4 + 1) * mk.soft.log_ratio
        assert edge_change_bound(inst3, (1, 2, 3)) == pytest.approx(expect)

    def test_node_perturbation_respects_bound(self):
        """Swapping h between admissible tables moves log Z at most the bound."""
        rng = np.random.default_rng(17)
        m = build_model("independent_set", **{"lambda": 0.8})
        for _ in range(40):
            inst = random_instance(rng, n_max=4, model=m)
            node = int(rng.integers(inst.graph.n_nodes))
            # another admissible IS table: h(0)=1, h(1) in [rho_min, rho_max - 1]
            new_lam = float(rng.uniform(m.soft.rho_min, m.soft.rho_max - 1.0))
            changed = replace_node_table(inst, node, [1.0, new_lam])
            delta = abs(log_z_exact(changed).value - log_z_exact(inst).value)
            assert delta <= node_change_bound(inst, node) + 1e-9

    def test_edge_addition_respects_bounds(self):
        """|delta log Z| <= edge bound, and delta <= log J_max always."""
        rng = np.random.default_rng(23)
        for _ in range(40):
            inst = random_instance(rng, n_max=4)
            model = inst.model
            edge = tuple(int(x) for x in rng.integers(0, inst.graph.n_nodes,
                                                      size=model.arity))
            table = model.edge_pot.draw(rng)
            bigger = add_edge(inst, edge, table)
            before = log_z_exact(inst).value
            after = log_z_exact(bigger).value
            assert after - before <= math.log(model.soft.j_max) + 1e-9
            if model.soft.j_max <= 1.0:
                assert after <= before + 1e-9
            assert abs(after - before) <= edge_change_bound(inst, edge) + 1e-9


class TestContinuousModel:
    def test_gaussian_with_partition_kernel(self):
        """A genuinely continuous instance: Gaussian node potential and a
        sampled zero-one partition-form kernel over the cells."""
        from gibbslab import PartitionKernel, gaussian_kernel_potential
        from gibbslab.models import (EdgePotentialSpec, ModelSpec,
                                     NodePotentialSpec, SoftStateParams)
        domain, h_table = gaussian_kernel_potential(half_width=2.0, n_cells=24)
        kernel = PartitionKernel(zero_classes=((-2.0, -1.0), (0.5, 1.5)))
        mids = domain.midpoints()
        j_table = np.array([[kernel.evaluate(x, y) for y in mids] for x in mids])
        # soft region: cells inside [0, 0.5) interact with everything (J = 1
        # there since [0, 0.5) meets no zero class together with any class)
        soft = SoftStateParams(kappa=0.5, rho_min=1e-3, rho_max=4.0, j_max=1.0,
                               alpha=1.0, omega_h=((-2.0, 2.0),))
        model = ModelSpec("talagrand_toy", domain,
                          NodePotentialSpec(table=h_table),
                          EdgePotentialSpec(2, support=((j_table, 1.0),)),
                          soft, {})
        inst = make_instance(model, _graph(2, [[0, 1]]), 0)
        got = log_z_exact(inst).value
        assert got == pytest.approx(naive_log_z(inst), rel=1e-10)
        lo, hi = logz_bounds(inst)
        assert lo - 1e-9 <= got <= hi + 1e-9

    def test_chunked_continuous_enumeration(self):
        """512-cell Gaussian domain on two nodes crosses the chunk boundary."""
        from gibbslab import gaussian_kernel_potential
        from gibbslab.models import (EdgePotentialSpec, ModelSpec,
                                     NodePotentialSpec, SoftStateParams)
        domain, h_table = gaussian_kernel_potential()
        soft = SoftStateParams(kappa=1.0, rho_min=1e-6, rho_max=4.0, j_max=1.0,
                               alpha=1.0, omega_h=((-6.0, 6.0),))
        model = ModelSpec("gauss_pair", domain, NodePotentialSpec(table=h_table),
                          EdgePotentialSpec(2, support=((np.ones((512, 512)), 1.0),)),
                          soft, {})
        inst = make_instance(model, _graph(2, [[0, 1]]), 0)
        # J = 1: Z factorizes into the squared Gaussian quadrature
        assert log_z_exact(inst).value == pytest.approx(
            2 * math.log(float(h_table @ domain.lengths)), rel=1e-10)


class TestSerialization:
    def test_logz_row_shapes(self):
        row = logz_row(LogZ(1.25), "exact", 3)
        assert row == {"logz": 1.25, "method": "exact", "seed": 3}
        row = logz_row(LogZ(-math.inf), "exact", 0)
        assert row["logz"] == "-inf"
        m = build_model("potts", q=2, beta=0.0)
        inst = make_instance(m, _graph(2, [[0, 1]]), 0)
        row = logz_row(log_z_mc(inst, samples=4, seed=1), "mc", 1)
        assert row["method"] == "mc" and "se" in row

    def test_instance_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            inst = random_instance(rng)
            back = instance_from_json(instance_to_json(inst))
            np.testing.assert_array_equal(back.graph.edges, inst.graph.edges)
            np.testing.assert_array_equal(back.potentials.node_tables,
                                          inst.potentials.node_tables)
            np.testing.assert_array_equal(back.potentials.edge_tables,
                                          inst.potentials.edge_tables)
            assert log_z_exact(back).value == log_z_exact(inst).value

    def test_embedded_round_trip(self):
        m = embed_discrete(build_model("ising", beta=0.3))
        inst = make_instance(m, _graph(2, [[0, 1]]), 4)
        back = instance_from_json(instance_to_json(inst))
        assert back.model.name == m.name
        assert log_z_exact(back).value == log_z_exact(inst).value

    def test_shape_validation(self):
        m = build_model("independent_set", **{"lambda": 1.0})
        good = make_instance(m, _graph(2, [[0, 1]]), 0)
        with pytest.raises(ValueError):
            Instance(_graph(3, [[0, 1]]), good.potentials, m)
