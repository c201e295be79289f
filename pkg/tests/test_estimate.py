"""Monte-Carlo estimators: budgets, determinism, statistical contracts."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moransim import (
    Configuration,
    Explicit,
    InvalidEpsilon,
    InvalidFitness,
    T1,
    UniformSingle,
    complete_graph,
    cycle_graph,
    estimate_extinction_t1,
    estimate_extinction_t2,
    estimate_fixation_t1,
    estimate_generalized,
    fixation_time_stats,
    line_graph,
    monte_carlo_estimate,
    solve_chain,
    spawn_rng,
    star_graph,
    step_budget,
    step_distribution,
)


class TestStepBudget:
    def test_middle_branch_value(self):
        # 30 * 10 * 3 / 1 * log2(1920) rounded up
        assert step_budget(1920, 3.0, 10, 3, 0.5) == 9817

    def test_high_fitness_branch(self):
        assert step_budget(1024, 10.0, 10, 3, 0.5) == 3000

    def test_near_neutral_branch(self):
        assert step_budget(4, 1.01, 4, 3, 0.5) == 5760

    def test_requires_supercritical_r(self):
        with pytest.raises(InvalidFitness):
            step_budget(100, 1.0, 5, 2, 0.3)

    @given(
        st.integers(2, 10_000),
        st.floats(1.001, 50.0),
        st.integers(2, 50),
        st.integers(1, 10),
        st.floats(0.01, 0.49),
    )
    @settings(max_examples=120, deadline=None)
    def test_monotone_in_z_and_precision(self, z, r, n, delta, eps):
        base = step_budget(z, r, n, delta, eps)
        assert step_budget(z + z // 2 + 1, r, n, delta, eps) >= base
        assert step_budget(z, r, n, delta, eps / 2) >= base
        assert base >= 1


class TestMonteCarloEstimate:
    def test_already_fixated_start(self):
        g = complete_graph(4)
        dist = Explicit(Configuration.from_values([1, 1, 1, 1]))
        est = monte_carlo_estimate(g, 2.0, T1, 50, 10, dist, seed=1)
        assert est.value == 1.0
        assert est.steps_total == 0
        assert not est.took_too_long

    def test_zero_budget_on_active_start(self):
        g = complete_graph(4)
        dist = UniformSingle(T1)
        est = monte_carlo_estimate(g, 2.0, T1, 10, 0, dist, seed=1)
        assert est.took_too_long
        assert est.value is None

    def test_matches_closed_form_within_ci(self):
        g = complete_graph(4)
        z = 10_000
        est = monte_carlo_estimate(g, 2.0, T1, z, 10_000, UniformSingle(T1), seed=99)
        p = 8 / 15
        assert abs(est.value - p) <= 4 * math.sqrt(p * (1 - p) / z)

    def test_determinism(self):
        g = star_graph(5)
        a = monte_carlo_estimate(g, 2.0, T1, 200, 5000, UniformSingle(T1), seed=7)
        b = monte_carlo_estimate(g, 2.0, T1, 200, 5000, UniformSingle(T1), seed=7)
        assert a == b
        c = monte_carlo_estimate(g, 2.0, T1, 200, 5000, UniformSingle(T1), seed=8)
        assert c.value != a.value or c.per_replicate_seeds != a.per_replicate_seeds

    def test_threads_do_not_change_result(self):
        g = complete_graph(5)
        kwargs = dict(z=64, budget=5000, dist=UniformSingle(T1), seed=13)
        seq = monte_carlo_estimate(g, 2.0, T1, **kwargs, threads=1)
        par = monte_carlo_estimate(g, 2.0, T1, **kwargs, threads=3)
        assert seq == par

    def test_threads_do_not_change_took_too_long(self):
        g = complete_graph(5)
        kwargs = dict(z=64, budget=2, dist=UniformSingle(T1), seed=13)
        seq = monte_carlo_estimate(g, 2.0, T1, **kwargs, threads=1)
        par = monte_carlo_estimate(g, 2.0, T1, **kwargs, threads=3)
        assert seq.took_too_long and par.took_too_long
        assert seq == par

    def test_seed_list_is_per_replicate(self):
        g = complete_graph(3)
        est = monte_carlo_estimate(g, 2.0, T1, 17, 100, UniformSingle(T1), seed=3)
        assert len(est.per_replicate_seeds) == 17
        assert len(set(est.per_replicate_seeds)) == 17

    def test_value_is_conditional_on_fixation_within_budget(self):
        # with a tight budget, accepted calls estimate P(t1 fixates | the
        # run fixates within the budget); check against the truncated chain
        g = line_graph(4)
        r = 2.0
        start = Configuration.from_values([1, 0, 0, 0])
        budget = 5

        # exact truncated-chain probabilities by stepping the mask law
        n = g.n
        full = (1 << n) - 1
        law = {start.to_mask(): 1.0}
        absorbed_full = 0.0
        absorbed_zero = 0.0
        for _ in range(budget):
            nxt: dict[int, float] = {}
            for mask, p in law.items():
                cfg = Configuration.from_mask(mask, n)
                for (v, u), q in step_distribution(g, cfg, r).entries.items():
                    child = mask ^ (1 << u)
                    w = p * q
                    if child == full:
                        absorbed_full += w
                    elif child == 0:
                        absorbed_zero += w
                    else:
                        nxt[child] = nxt.get(child, 0.0) + w
            law = nxt
        conditional = absorbed_full / (absorbed_full + absorbed_zero)

        wins = 0
        accepted = 0
        for i in range(4000):
            est = monte_carlo_estimate(
                g, r, T1, 1, budget, Explicit(start), seed=1000 + i
            )
            if not est.took_too_long:
                accepted += 1
                wins += est.value == 1.0
        observed = wins / accepted
        sigma = math.sqrt(conditional * (1 - conditional) / accepted)
        assert abs(observed - conditional) <= 4 * sigma


class TestEstimators:
    def test_fixation_default_replicates(self):
        g = complete_graph(5)
        est = estimate_fixation_t1(g, 2.0, 0.3, seed=5)
        assert est.z_used == math.ceil(48 * 5 / 0.09)
        p = (1 - 0.5) / (1 - 2.0**-5)
        assert abs(est.value - p) <= 0.3 * p  # well inside the guarantee

    def test_extinction_t1_default_replicates(self):
        g = complete_graph(5)
        est = estimate_extinction_t1(g, 2.0, 0.3, seed=5)
        assert est.z_used == math.ceil(24 / 0.09)
        assert est.value >= 1 - 1 / g.n - 0.15

    def test_generalized_additive(self):
        g = complete_graph(3)
        cfg = Configuration.from_values([1, 1, 0])
        oracle = float(solve_chain(g, 2.0).fixation_prob[0b011])
        est = estimate_generalized(g, 2.0, cfg, T1, 0.2, seed=5)
        assert est.z_used == math.ceil(6 / 0.04)
        assert abs(est.value - oracle) <= 0.2

    def test_generalized_trivial_start(self):
        g = complete_graph(3)
        cfg = Configuration.from_values([1, 1, 1])
        est = estimate_generalized(g, 2.0, cfg, T1, 0.3, seed=5)
        assert est.value == 1.0 and est.steps_total == 0

    def test_extinction_t2_shortcut(self):
        g = complete_graph(4)  # max(9, 4)/0.25 = 36
        est = estimate_extinction_t2(g, 1000.0, 0.25, seed=5)
        assert est.value == 1e-3
        assert est.steps_total == 0 and est.z_used == 0

    def test_extinction_t2_simulation_path(self):
        from moransim import averaged_problem

        g = complete_graph(4)
        est = estimate_extinction_t2(g, 2.0, 0.3, seed=5)
        assert est.z_used == math.ceil(24 * (4 + 2.0) ** 2 / 0.09)
        oracle = averaged_problem(g, 2.0, "extinction_t2")
        assert abs(est.value - oracle) <= 0.3 * oracle

    def test_rejects_neutral_and_subcritical_r(self):
        g = complete_graph(4)
        for r in (1.0, 0.5):
            with pytest.raises(InvalidFitness):
                estimate_fixation_t1(g, r, 0.3, seed=1)

    def test_rejects_bad_epsilon(self):
        g = complete_graph(4)
        for eps in (0.0, 0.5, 0.7):
            with pytest.raises(InvalidEpsilon):
                estimate_fixation_t1(g, 2.0, eps, seed=1)

    def test_overrides(self):
        g = complete_graph(4)
        est = estimate_fixation_t1(g, 2.0, 0.3, seed=1, z=10, budget=50)
        assert est.z_used == 10 and est.u_used == 50


class TestFixationTimeStats:
    def test_single_trial_on_fixated_start(self):
        g = complete_graph(4)
        dist = Explicit(Configuration.from_values([1, 1, 1, 1]))
        stats = fixation_time_stats(g, 2.0, dist, 1, spawn_rng(1, 0))
        assert stats.samples == [0]
        assert stats.mean == 0.0

    def test_tail_counts_monotone(self):
        g = cycle_graph(8)
        stats = fixation_time_stats(
            g, 2.0, UniformSingle(T1), 300, spawn_rng(2, 0),
            tail_thresholds=(10, 50, 200),
        )
        counts = [stats.tail_counts[t] for t in (10, 50, 200)]
        assert counts == sorted(counts, reverse=True)
        assert stats.mean == pytest.approx(sum(stats.samples) / 300)

    def test_mean_respects_drift_bound(self):
        # single mutant on a star: expected effective steps stay below
        # 3 * k * max_degree for r = 2
        g = star_graph(12)
        stats = fixation_time_stats(g, 2.0, UniformSingle(T1), 400, spawn_rng(3, 0))
        bound = 3 * (g.n - 1) * g.max_degree
        stderr = (
            math.sqrt(sum((s - stats.mean) ** 2 for s in stats.samples) / 399) / 20
        )
        assert stats.mean <= bound + 3 * stderr
