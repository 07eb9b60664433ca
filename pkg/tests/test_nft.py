import numpy as np
import pytest

from nftopt import (
    CircuitCost,
    CostSpec,
    FidelityCostSpec,
    Gate,
    NftOptimizer,
    Observable,
    ParameterizedCircuit,
    cost_exact,
)

from conftest import random_circuit, random_observable

Z_SPEC = CostSpec([(1.0, Observable([(1.0, "Z")]))])


def rx_cost():
    circuit = ParameterizedCircuit(1, [Gate("rx", (0,), param=0)], 1)
    return CircuitCost(circuit, Z_SPEC)


def random_cost(rng, num_qubits=None, num_rotations=None, shared_groups=None):
    r = num_qubits or int(rng.integers(1, 4))
    n = num_rotations or int(rng.integers(2, 6))
    circuit = random_circuit(rng, r, n, shared_groups=shared_groups)
    obs = random_observable(rng, r)
    return CircuitCost(circuit, CostSpec([(1.0, obs)]))


def test_single_step_analytic():
    # L(theta) = cos(theta); one update lands on the minimum at -pi
    cost = rx_cost()
    opt = NftOptimizer(max_updates=1, max_steps=100).fit(cost, [0.3])
    assert opt.params_[0] == pytest.approx(-np.pi)
    assert opt.cost_ == pytest.approx(-1.0)
    assert cost.steps == 3  # 1 seed + 2 per update


def test_single_step_idempotent_at_optimum():
    cost = rx_cost()
    opt = NftOptimizer(max_updates=1, max_steps=100).fit(cost, [np.pi])
    assert abs(abs(opt.params_[0]) - np.pi) < 1e-9
    assert opt.cost_ == pytest.approx(-1.0, abs=1e-9)


def test_single_step_counter_with_reestimation(rng):
    cost = random_cost(rng)
    opt = NftOptimizer(reestimate_every=3, max_updates=7, max_steps=10**6)
    opt.fit(cost, rng.uniform(0, 2 * np.pi, cost.num_params))
    # 1 seed + 7 updates * 2 + re-estimations at updates 3 and 6
    assert cost.steps == 1 + 7 * 2 + 2
    assert opt.trace_.final_step == cost.steps


def test_multi_step_counter(rng):
    cost = random_cost(rng, num_qubits=2, num_rotations=4)
    opt = NftOptimizer(variant="multi", subset_size=2, max_updates=3,
                       max_steps=10**6, reestimate_every=1000)
    opt.fit(cost, rng.uniform(0, 2 * np.pi, 4))
    assert cost.steps == 1 + 3 * 8  # 3^2 - 1 per update


def test_shared_step_counter(rng):
    cost = random_cost(rng, num_qubits=2, shared_groups=[2, 1, 3])
    opt = NftOptimizer(variant="shared", max_updates=3, max_steps=10**6,
                       reestimate_every=1000)
    opt.fit(cost, rng.uniform(0, 2 * np.pi, 3))
    # sequential sweep: S_j = 2, 1, 3 -> 4 + 2 + 6 estimations
    assert cost.steps == 1 + 4 + 2 + 6


def test_multi_single_subset_matches_single_variant(rng):
    for _ in range(5):
        seed = int(rng.integers(2**31))
        results = []
        for variant in ("single", "multi"):
            local = np.random.default_rng(seed)
            cost = random_cost(local)
            x0 = local.uniform(0, 2 * np.pi, cost.num_params)
            opt = NftOptimizer(variant=variant, subset_size=1, max_updates=4,
                               max_steps=10**6)
            opt.fit(cost, x0)
            results.append(opt.params_)
        np.testing.assert_allclose(results[0], results[1], atol=1e-9)


def test_multi_joint_update_dominates_two_single_updates(rng):
    for _ in range(5):
        seed = int(rng.integers(2**31))
        finals = {}
        for variant in ("single", "multi"):
            local = np.random.default_rng(seed)
            circuit = random_circuit(local, 2, 2)
            obs = random_observable(local, 2)
            cost = CircuitCost(circuit, CostSpec([(1.0, obs)]))
            x0 = local.uniform(0, 2 * np.pi, 2)
            updates = 2 if variant == "single" else 1
            opt = NftOptimizer(variant=variant, subset_size=2,
                               max_updates=updates, max_steps=10**6)
            opt.fit(cost, x0)
            finals[variant] = cost.exact(opt.params_)
        assert finals["multi"] <= finals["single"] + 1e-9


def test_shared_matches_single_when_unshared(rng):
    for _ in range(5):
        seed = int(rng.integers(2**31))
        finals = {}
        for variant in ("single", "shared"):
            local = np.random.default_rng(seed)
            cost = random_cost(local)
            x0 = local.uniform(0, 2 * np.pi, cost.num_params)
            opt = NftOptimizer(variant=variant, max_updates=3, max_steps=10**6)
            opt.fit(cost, x0)
            finals[variant] = cost.exact(opt.params_)
        assert finals["shared"] == pytest.approx(finals["single"], abs=1e-9)


def test_shared_model_matches_probes(rng):
    # theta shared by two RX gates on different qubits, H = Z tensor I
    gates = [Gate("rx", (0,), param=0), Gate("rx", (1,), param=0)]
    circuit = ParameterizedCircuit(2, gates, 1)
    spec = CostSpec([(1.0, Observable([(1.0, "ZI")]))])
    cost = CircuitCost(circuit, spec)

    from nftopt import fit_fourier

    theta0 = 0.37
    nodes = [cost.exact([theta0 + 2 * np.pi * s / 5]) for s in range(5)]
    model = fit_fourier(2, theta0, nodes)
    for theta in rng.uniform(-np.pi, np.pi, 20):
        assert model(theta) == pytest.approx(cost.exact([theta]), abs=1e-9)


def test_variant_precondition_enforced(rng):
    cost = random_cost(rng, num_qubits=2, shared_groups=[2, 1])
    with pytest.raises(ValueError):
        NftOptimizer(variant="single", max_steps=10).fit(cost, [0.0, 0.0])
    with pytest.raises(ValueError):
        NftOptimizer(variant="multi", max_steps=10).fit(cost, [0.0, 0.0])
    # shared accepts the same circuit
    NftOptimizer(variant="shared", max_steps=10).fit(cost, [0.0, 0.0])


def test_config_validation(rng):
    cost = rx_cost()
    with pytest.raises(ValueError):
        NftOptimizer(variant="bogus").fit(cost, [0.0])
    with pytest.raises(ValueError):
        NftOptimizer(sweep="bogus").fit(cost, [0.0])
    with pytest.raises(ValueError):
        NftOptimizer(variant="multi", subset_size=4).fit(cost, [0.0])
    with pytest.raises(ValueError):
        NftOptimizer(reestimate_every=0).fit(cost, [0.0])


def test_monotone_descent_exact_mode(rng):
    for _ in range(5):
        cost = random_cost(rng)
        opt = NftOptimizer(max_updates=30, max_steps=10**6)
        opt.fit(cost, rng.uniform(0, 2 * np.pi, cost.num_params))
        cached = [p.cost_estimate for p in opt.trace_]
        assert all(b <= a + 1e-12 for a, b in zip(cached, cached[1:]))


def test_run_converges_single_qubit():
    cost = rx_cost()
    opt = NftOptimizer(max_steps=16).fit(cost, [2.2])
    assert opt.cost_ == pytest.approx(-1.0, abs=1e-9)


def test_budget_never_exceeded(rng):
    for budget in (1, 2, 3, 10, 11):
        cost = rx_cost()
        opt = NftOptimizer(max_steps=budget).fit(cost, [0.4])
        assert cost.steps <= budget
        if budget == 1:
            assert len(opt.trace_) == 1  # only the seeding estimation


def test_period_two_pi_invariance(rng):
    cost = random_cost(rng)
    x = rng.uniform(0, 2 * np.pi, cost.num_params)
    for j in range(cost.num_params):
        shifted = x.copy()
        shifted[j] += 2 * np.pi
        assert cost.exact(shifted) == pytest.approx(cost.exact(x), abs=1e-12)


def test_random_sweep_runs_and_is_seeded(rng):
    results = []
    for _ in range(2):
        local = np.random.default_rng(7)
        cost = random_cost(local)
        x0 = local.uniform(0, 2 * np.pi, cost.num_params)
        opt = NftOptimizer(sweep="random", seed=5, max_updates=10, max_steps=10**6)
        opt.fit(cost, x0)
        results.append(opt.params_)
    np.testing.assert_array_equal(results[0], results[1])


def test_reestimation_refreshes_cache_with_sampling(rng):
    # after a re-estimation update the cache is a fresh estimate, so in
    # exact mode it must equal the exact cost exactly
    cost = random_cost(rng)
    opt = NftOptimizer(reestimate_every=2, max_updates=8, max_steps=10**6)
    opt.fit(cost, rng.uniform(0, 2 * np.pi, cost.num_params))
    points = opt.trace_.points[1:]  # skip the seed point
    for n, point in enumerate(points, start=1):
        if n % 2 == 0:
            assert point.cost_estimate == pytest.approx(
                cost.exact(point.params), abs=1e-12
            )


def test_sampled_run_trace_and_accounting(rng):
    circuit = random_circuit(rng, 2, 6)
    theta = rng.uniform(0, 2 * np.pi, 6)
    spec = FidelityCostSpec(circuit.bind(theta))
    cost = CircuitCost(circuit, spec, shots=128, rng=np.random.default_rng(3))
    opt = NftOptimizer(reestimate_every=4, max_updates=10, max_steps=10**6)
    opt.fit(cost, rng.uniform(0, 2 * np.pi, 6))
    # 1 seed + 10*2 + re-estimations at updates 4 and 8
    assert cost.steps == 1 + 20 + 2
    steps = [p.step for p in opt.trace_]
    assert steps == sorted(set(steps))


def test_restriction_laws_small(rng):
    from nftopt import fit_sine_three_points, fit_trig_tensor

    for _ in range(10):
        cost = random_cost(rng, num_qubits=2, num_rotations=3)
        x = rng.uniform(-np.pi, np.pi, cost.num_params)
        j = int(rng.integers(cost.num_params))

        def restricted(value, idx=j):
            y = x.copy()
            y[idx] = value
            return cost.exact(y)

        model = fit_sine_three_points(
            x[j], restricted(x[j]), restricted(x[j] + np.pi / 2),
            restricted(x[j] - np.pi / 2)
        )
        for theta in rng.uniform(-np.pi, np.pi, 7):
            assert model(theta) == pytest.approx(restricted(theta), abs=1e-9)
