import math

import numpy as np
import pytest

from airsel import (
    all_antenna,
    brute_force_oracle,
    fixed_selection_ao,
    greedy_selection,
    make_rng,
    random_selection,
)
from airsel.baselines import solve_fixed_policy
from conftest import random_instance


class TestRandomSelection:
    def test_full_budget(self):
        assert np.all(random_selection(5, 5, seed=0).s == 1.0)

    def test_deterministic_per_seed(self):
        a = random_selection(30, 5, seed=99)
        b = random_selection(30, 5, seed=99)
        assert np.array_equal(a.s, b.s)

    def test_inclusion_frequencies_uniform(self):
        n, l_budget, draws = 30, 5, 100_000
        counts = np.zeros(n)
        for i in range(draws):
            counts += random_selection(n, l_budget, seed=i).s
        freq = counts / draws
        assert np.allclose(freq, l_budget / n, rtol=0.02)


class TestGreedySelection:
    def test_single_device_gains(self):
        h = np.array([[1.0], [3.0], [2.0]], complex)
        sel = greedy_selection(h, 2)
        assert np.array_equal(sel.s, [0.0, 1.0, 1.0])

    def test_scale_invariance(self):
        rng = make_rng(5)
        h = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        a = greedy_selection(h, 2).s
        b = greedy_selection(3.7 * h, 2).s
        assert np.array_equal(a, b)

    def test_matches_sort_oracle(self):
        rng = make_rng(6)
        for _ in range(20):
            h = rng.standard_normal((8, 4)) + 1j * rng.standard_normal((8, 4))
            gains = (np.abs(h) ** 2).sum(axis=1)
            expected = set(np.argsort(-gains, kind="stable")[:3])
            got = set(np.flatnonzero(greedy_selection(h, 3).s))
            assert got == expected


class TestAllAntenna:
    def test_all_ones(self):
        sel = all_antenna(3)
        assert np.array_equal(sel.s, [1.0, 1.0, 1.0])
        assert sel.n_selected == 3

    def test_dominates_smaller_policies(self):
        for seed in range(5):
            inst = random_instance(6, 3, 2, seed=seed)
            _, _, err_all, _ = fixed_selection_ao(inst, all_antenna(6))
            _, _, err_rand, _ = fixed_selection_ao(
                inst, random_selection(6, 2, seed=seed)
            )
            _, _, err_greedy, _ = fixed_selection_ao(
                inst, greedy_selection(inst.channel.entries, 2)
            )
            assert err_all <= err_rand + 1e-9
            assert err_all <= err_greedy + 1e-9


class TestBruteForceOracle:
    def test_two_case(self):
        inst = random_instance(2, 1, 1, seed=0)
        h = np.array([[3.0], [1.0]], complex)
        from airsel import ChannelMatrix, ProblemInstance

        inst = ProblemInstance(
            dims=inst.dims,
            channel=ChannelMatrix(h),
            weights=inst.weights,
            noise=inst.noise,
        )
        report = brute_force_oracle(inst, 1)
        assert np.array_equal(report.best_selection.s, [1.0, 0.0])

    def test_full_budget_single_subset(self):
        inst = random_instance(4, 2, 4, seed=1)
        report = brute_force_oracle(inst, 4)
        assert len(report.per_selection_errors) == 1
        _, _, err, _ = fixed_selection_ao(inst, np.ones(4))
        assert report.best_error == pytest.approx(err)

    def test_enumeration_count_and_order(self):
        inst = random_instance(8, 3, 2, seed=2)
        report = brute_force_oracle(inst, 2)
        assert len(report.per_selection_errors) == math.comb(8, 2)
        subsets = [s for s, _ in report.per_selection_errors]
        assert subsets == sorted(subsets)
        best = min(err for _, err in report.per_selection_errors)
        assert report.best_error == pytest.approx(best)

    def test_guard(self):
        inst = random_instance(30, 2, 15, seed=3)
        with pytest.raises(ValueError, match="20000"):
            brute_force_oracle(inst, 15)

    def test_l_saturation_when_zero_forcing_residual_positive(self):
        # Consequence of the saturation theorem: if the best L-subset design
        # cannot zero-force, no smaller subset can do better.
        checked = 0
        for seed in range(6):
            inst = random_instance(6, 3, 3, seed=100 + seed)
            best_at = {
                l: brute_force_oracle(inst, l).best_error for l in (1, 2, 3)
            }
            report = brute_force_oracle(inst, 3)
            m, b, _, _ = fixed_selection_ao(inst, report.best_selection)
            resid = np.max(
                np.abs(
                    (np.conj(m) * report.best_selection.s)
                    @ inst.channel.entries
                    * b
                    - inst.weights.phi
                )
            )
            if resid > 1e-6:
                checked += 1
                assert best_at[3] <= min(best_at[1], best_at[2]) + 1e-9
        assert checked > 0


class TestSolveFixedPolicy:
    def test_reports(self):
        inst = random_instance(6, 3, 2, seed=7)
        for policy in ("random", "greedy", "all"):
            report = solve_fixed_policy(inst, 2, policy, seed=11)
            assert report.algorithm == policy
            expected = 6 if policy == "all" else 2
            assert report.selection.n_selected == expected

    def test_unknown_policy(self):
        inst = random_instance(4, 2, 2, seed=8)
        with pytest.raises(ValueError):
            solve_fixed_policy(inst, 2, "best")
