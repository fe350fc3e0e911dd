from fractions import Fraction as F

import pytest

from padic_hua.experiments import (
    ExperimentReport,
    Histogram,
    enumerate_oracle,
    gate,
    label_key,
    run_chain_checks,
    run_corners_consistency,
    run_ergodic_convergence,
    run_ergodic_decomposition,
    run_identities,
    run_nu_limit,
    run_oracle_equality,
    run_suite,
    scaled_gate,
    tv_distance,
    tv_on_support,
)
from padic_hua.laws import ExactLaw, HuaParams
from padic_hua.partitions import Partition

HP2 = HuaParams(2, F(1))


class TestEnumerationOracle:
    def test_size_one_shells(self):
        hist = enumerate_oracle(2, 1, 3)
        assert hist.counts == {(0,): 4, (-1,): 2, (-2,): 1, (None,): 1}
        assert hist.total == 8

    def test_invertible_count(self):
        hist = enumerate_oracle(2, 2, 1)
        assert hist.counts[(0, 0)] == 6

    def test_gl_class_at_three_digits(self):
        hist = enumerate_oracle(2, 2, 3)
        assert hist.counts[(0, 0)] == 1536
        assert hist.total == 4096

    def test_size_guard(self):
        with pytest.raises(ValueError):
            enumerate_oracle(2, 3, 3)


class TestOracleEquality:
    @pytest.mark.parametrize("cfg", [(2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 2, 2)])
    def test_acceptance_configs(self, cfg):
        report = run_oracle_equality(*cfg)
        assert report.passed

    @pytest.mark.parametrize("cfg", [(3, 1, 3), (3, 2, 3)])
    def test_three_digit_window_for_p_three(self, cfg):
        # the module invariant asks for E = 3 at p in {2, 3}, N <= 2
        assert run_oracle_equality(*cfg).passed


class TestTvDistance:
    def law(self, masses, tail=F(0)):
        return ExactLaw(dict(masses), "test", tail)

    def test_empirical_proportional_to_law_gives_tail(self):
        law = self.law({"a": F(3, 8), "b": F(4, 8)}, tail=F(1, 8))
        hist = Histogram({"a": 3, "b": 4, "other": 1}, 8, "test")
        assert tv_distance(hist, law) == F(1, 8)
        assert tv_on_support(hist, law) == 0

    def test_disjoint_supports(self):
        law = self.law({"a": F(1)})
        hist = Histogram({"b": 5}, 5, "test")
        assert tv_distance(hist, law) == 1

    def test_on_support_is_lower_bound(self):
        law = self.law({"a": F(1, 2), "b": F(1, 4)}, tail=F(1, 4))
        hist = Histogram({"a": 2, "b": 1, "c": 1}, 4, "test")
        assert tv_on_support(hist, law) <= tv_distance(hist, law)

    def test_scaled_gate(self):
        assert scaled_gate(0.01, 100_000, 100_000) == 0.01
        assert scaled_gate(0.01, 100_000, 400_000) == 0.01
        assert abs(scaled_gate(0.01, 100_000, 25_000) - 0.02) < 1e-12


class TestReports:
    def test_json_deterministic_and_runtime_free(self):
        report = ExperimentReport(
            name="x", params={"b": 2, "a": 1}, seed=7,
            gates=[gate("g", 0.5, 1.0, True)], runtime_seconds=123.4)
        text = report.to_json()
        assert text == report.to_json()
        assert "runtime" not in text
        assert '"passed": true' in text

    def test_failed_gate_propagates(self):
        report = ExperimentReport(name="x", params={}, seed=None,
                                  gates=[gate("g", 2, 1, False)])
        assert not report.passed


class TestMonteCarloExperiments:
    def test_corners_small_and_deterministic(self):
        a = run_corners_consistency(HP2, 2, 3000, 42, workers=1)
        b = run_corners_consistency(HP2, 2, 3000, 42, workers=2)
        assert a.to_json() == b.to_json()
        assert a.passed

    def test_roundtrip_mode(self):
        report = run_corners_consistency(HP2, 2, 2000, 1, corner_to=2)
        assert report.name == "matrix-roundtrip"
        assert report.passed

    def test_ergodic_convergence_small(self):
        report = run_ergodic_convergence(2, Partition((1,)), (4, 8), 300, 24, 5)
        assert report.passed
        assert [row["n"] for row in report.table] == [4, 8]

    def test_ergodic_decomposition_small(self):
        report = run_ergodic_decomposition(HP2, (6, 10), 1500, 24, 9)
        assert any(g["name"] == "tv-final" for g in report.gates)
        assert report.errors == 0

    def test_nu_limit_small(self):
        # the 1e-6 exact gate belongs to size 40; loosen it for this
        # reduced n_list
        report = run_nu_limit(HP2, (5, 10), 4000, 11, tv_exact_gate=1e-3)
        names = [g["name"] for g in report.gates]
        assert any(n.startswith("tv-decreasing") for n in names)
        assert any(n == "rr-largest-part" for n in names)
        assert report.passed


def test_identity_suite_reduced():
    report = run_identities(3, primes=(2,), ts=(F(1), F(1, 2)), row_max=12,
                            completeness_max=8, rewrite_trials=300,
                            profile_trials=30, profile_n_max=4)
    assert report.passed


def test_chain_checks_reduced():
    report = run_chain_checks(primes=(2,), ts=(F(1),), max_parts=3, max_part=4,
                              x_values=(2,))
    assert report.passed


def test_suite_names_and_unknown():
    with pytest.raises(ValueError):
        run_suite("nope", 1)


def test_label_key_handles_markers():
    labels = [(0, -1), (2, None), "other", (0, 0)]
    ordered = sorted(labels, key=label_key)
    assert ordered[-1] == "other"
