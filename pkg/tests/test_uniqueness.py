import json
import csv
import io
from fractions import Fraction

import pytest
from flint import arb
from hypothesis import given, settings
from hypothesis import strategies as st

from indhard import (
    InvalidParameters,
    PrecisionExhausted,
    RecursionParams,
    classify,
    exp_sandwich_check,
    f_fn,
    find_fixed_points,
    find_roots,
    g_fn,
    h_fn,
    regime_scan,
    tree_map,
    verify_analytic_lemma,
)
from indhard.uniqueness import (
    NON_UNIQUE,
    UNIQUE,
    f_star_lower_bound,
    rows_to_csv,
    rows_to_json,
    search_interval,
    working_precision,
)

from conftest import ball_contains_fraction, ball_to_fraction_bounds

F = Fraction


def exact_T(z: Fraction, k: int, b: int, d: int) -> Fraction:
    gamma = 1 - F(1, 2 ** (k - 2 * b))
    return (2**b - 1) * ((z + 1) / (z + gamma)) ** d


def exact_g(z, k, b, d):
    return exact_T(z, k, b, d) - z


def exact_f(z, k, b, d):
    return exact_T(exact_T(z, k, b, d), k, b, d) - z


def exact_point(x: arb) -> Fraction:
    lo, hi = ball_to_fraction_bounds(x)
    assert lo == hi
    return lo


class TestTreeMap:
    def test_d_zero(self):
        p = RecursionParams(F(1), F(1, 2), F(3), 0)
        assert tree_map(7, p) == 3

    def test_small_example(self):
        p = RecursionParams.for_gadget(2, 1, 10)
        val = tree_map(10, p)
        assert ball_contains_fraction(val, F(11, 10) ** 10)
        assert abs(float(val) - 2.5937424601) < 1e-9

    @pytest.mark.parametrize("lam,z", [(F(1), 3), (F(5, 2), F(1, 7)), (F(9), 1000)])
    def test_boundary_is_constant(self, lam, z):
        p = RecursionParams(F(1), F(1), lam, 13)
        assert ball_contains_fraction(tree_map(z, p), lam)

    def test_rel_bits(self):
        p = RecursionParams.for_gadget(3, 1, 20)
        v = tree_map(F(1, 3), p, prec=64, min_rel_bits=150)
        assert v.rel_accuracy_bits() >= 150

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidParameters):
            tree_map(0, RecursionParams.for_gadget(2, 1, 3))

    def test_rejects_ferromagnetic(self):
        with pytest.raises(InvalidParameters):
            RecursionParams(F(2), F(1), F(1), 3)


class TestGF:
    def test_g_example(self):
        val = g_fn(10, 2, 1, 10)
        assert val < 0
        assert ball_contains_fraction(val, F(11, 10) ** 10 - 10)
        assert abs(float(val) + 7.406) < 1e-3

    @pytest.mark.parametrize("kb", [(2, 1), (3, 1), (6, 2), (8, 4)])
    def test_g_limits(self, kb):
        k, b = kb
        d = 5 * 2 ** (k - b)
        assert g_fn("1e-30", k, b, d) > 0
        assert g_fn("1e30", k, b, d) < -1e29

    def test_f_example(self):
        val = f_fn(10, 2, 1, 10)
        assert val > 16
        assert ball_contains_fraction(val, exact_f(F(10), 2, 1, 10))

    def test_f_k3(self):
        val = f_fn(10, 3, 1, 20)
        assert val > arb("0.7")
        assert ball_contains_fraction(val, exact_f(F(10), 3, 1, 20))

    @pytest.mark.parametrize("kbd", [(2, 1, 10), (4, 2, 20), (5, 1, 7)])
    @pytest.mark.parametrize("z", [F(1, 3), F(5), F(123, 8), F(123, 7)])
    def test_against_exact_rationals(self, kbd, z):
        gv, fv = g_fn(z, *kbd), f_fn(z, *kbd)
        if z.denominator & (z.denominator - 1) == 0:
            assert ball_contains_fraction(gv, exact_g(z, *kbd))
            assert ball_contains_fraction(fv, exact_f(z, *kbd))
        assert abs(float(gv) - float(exact_g(z, *kbd))) <= 1e-12 * max(1, abs(float(gv)))
        assert abs(float(fv) - float(exact_f(z, *kbd))) <= 1e-12 * max(1, abs(float(fv)))

    @given(
        st.sampled_from([(2, 1, 10), (3, 1, 20), (4, 2, 20), (7, 2, 40), (6, 3, 3)]),
        st.floats(1e-3, 1e6),
    )
    @settings(max_examples=200)
    def test_composition_identity(self, kbd, z):
        p = RecursionParams.for_gadget(*kbd)
        zb = arb(z)
        with working_precision(256):
            composed_g = tree_map(zb, p) - zb
            composed_f = tree_map(tree_map(zb, p), p) - zb
        assert g_fn(zb, *kbd).overlaps(composed_g)
        assert f_fn(zb, *kbd).overlaps(composed_f)


class TestFindRoots:
    def test_g_single_root_certified(self):
        rep = find_roots("g", 2, 1, 10)
        assert len(rep.roots) == 1
        q = rep.roots[0]
        assert 1 < float(q) < 10
        lo, hi = exact_point(q.lo), exact_point(q.hi)
        assert exact_g(lo, 2, 1, 10) > 0 > exact_g(hi, 2, 1, 10)
        assert q.residual <= 1e-12
        assert abs(float(tree_map(q.mid, rep.params)) - float(q)) <= 1e-11

    @pytest.mark.parametrize("kbd", [(2, 1, 10), (3, 1, 20)])
    def test_f_three_roots_certified_exactly(self, kbd):
        rep = find_roots("f", *kbd)
        assert rep.regime == NON_UNIQUE
        assert len(rep.roots) == 3
        for r in rep.roots:
            lo, hi = exact_point(r.lo), exact_point(r.hi)
            assert exact_f(lo, *kbd) * exact_f(hi, *kbd) < 0
        g_root = find_roots("g", *kbd).roots[0]
        assert abs(float(rep.q_times) - float(g_root)) < 1e-12

    def test_golden_ratio(self):
        rep = find_roots("f", 2, 1, 1)
        assert rep.regime == UNIQUE
        assert len(rep.roots) == 1
        assert abs(float(rep.roots[0]) - (1 + 5**0.5) / 2) < 1e-12

    @pytest.mark.parametrize("kbd", [(2, 1, 10), (4, 1, 40), (4, 2, 20), (5, 2, 40)])
    def test_symmetry_and_ordering(self, kbd):
        rep = find_roots("f", *kbd)
        assert rep.regime == NON_UNIQUE
        vals = [float(r) for r in rep.roots]
        assert vals == sorted(vals)
        assert all(b - a > 1e-12 for a, b in zip(vals, vals[1:]))
        p = rep.params
        assert abs(float(tree_map(rep.q_plus.mid, p)) - float(rep.q_minus)) < 1e-9
        assert abs(float(tree_map(rep.q_minus.mid, p)) - float(rep.q_plus)) < 1e-9
        assert rep.slope < -1

    def test_g_roots_are_f_roots(self):
        for kbd in [(2, 1, 10), (2, 1, 2), (6, 2, 30)]:
            q = find_roots("g", *kbd).roots[0]
            assert abs(float(f_fn(q.mid, *kbd))) < 1e-9

    def test_search_interval_signs(self):
        for kbd in [(2, 1, 10), (3, 1, 20), (8, 3, 100)]:
            p = RecursionParams.for_gadget(*kbd)
            lo, hi = search_interval(p)
            assert f_fn(lo, *kbd) > 0 and g_fn(lo, *kbd) > 0
            assert f_fn(hi, *kbd) < 0 and g_fn(hi, *kbd) < 0

    def test_general_params_hardcore(self):
        # beta = 0, gamma = 1 is the hard-core model; lambda = 10, d = 4 is past uniqueness
        p = RecursionParams(F(0), F(1), F(10), 4)
        rep = find_fixed_points(p, "f")
        assert rep.regime == NON_UNIQUE
        lo_rep = find_fixed_points(RecursionParams(F(0), F(1), F(1), 4), "f")
        assert lo_rep.regime == UNIQUE

    def test_bad_inputs(self):
        with pytest.raises(InvalidParameters):
            find_roots("h", 2, 1, 3)
        with pytest.raises(InvalidParameters):
            find_roots("f", 2, 1, 3, tol=0)
        with pytest.raises(InvalidParameters):
            find_fixed_points(RecursionParams(F(1), F(1), F(1), 3))

    def test_precision_exhausted(self):
        rep = find_roots("g", 2, 1, 10, tol=1e-70, prec=512)
        q = rep.roots[0].mid
        with pytest.raises(PrecisionExhausted):
            g_fn(q, 2, 1, 10, prec=64, max_prec=128)


class TestClassify:
    @pytest.mark.parametrize("kbD", [(2, 1, 11), (4, 1, 41), (3, 1, 21)])
    def test_non_unique(self, kbD):
        assert classify(*kbD).regime == NON_UNIQUE

    def test_unique(self):
        rep = classify(2, 1, 3)
        assert rep.regime == UNIQUE
        assert len(rep.roots) == 1

    def test_delta_precondition(self):
        with pytest.raises(InvalidParameters):
            classify(2, 1, 2)


class TestAnalyticLemma:
    def test_k2(self):
        c = verify_analytic_lemma(2, 1)
        assert (c.d, c.z_star) == (10, 10)
        assert c.passed and c.f_value > 16

    def test_k4_b2(self):
        c = verify_analytic_lemma(4, 2)
        assert (c.d, c.z_star) == (20, 20)
        assert c.passed
        assert h_fn(2) > 1.5
        assert c.f_value > h_fn(2)

    def test_k3(self):
        c = verify_analytic_lemma(3, 1)
        assert (c.d, c.z_star) == (20, 10)
        assert c.passed
        assert c.lower_bound > arb("0.7")
        assert c.bound_respected

    @pytest.mark.parametrize("k", range(2, 17))
    def test_all_rows(self, k):
        for b in range(1, k // 2 + 1):
            c = verify_analytic_lemma(k, b)
            assert c.passed
            if k >= 3:
                assert c.bound_respected

    def test_bound_monotone_in_k(self):
        for b in (1, 2, 3):
            vals = [float(f_star_lower_bound(k, b)) for k in range(max(3, 2 * b), 17)]
            assert vals == sorted(vals)


class TestH:
    def test_h2(self):
        assert h_fn(2) > 1.5

    def test_h3(self):
        bound = arb("1.29") * 8 - arb("6.29")
        assert bound > 0
        assert h_fn(3) > bound

    def test_positive_sweep(self):
        assert all(h_fn(b) > 0 for b in range(2, 21))

    def test_domain(self):
        with pytest.raises(InvalidParameters):
            h_fn(1)


class TestSandwich:
    def test_unit(self):
        assert exp_sandwich_check(1, 1)

    def test_large_y(self):
        assert exp_sandwich_check(1, 10**6)

    @given(st.floats(1e-6, 100), st.floats(1e-6, 100))
    @settings(max_examples=300)
    def test_random(self, x, y):
        assert exp_sandwich_check(x, y)

    def test_domain(self):
        with pytest.raises(InvalidParameters):
            exp_sandwich_check(0, 1)


class TestScan:
    def test_threshold_rows(self):
        rows = regime_scan(range(2, 7), 1, lambda k: [5 * 2 ** (k - 1) + 1])
        assert [r.k for r in rows] == [2, 3, 4, 5, 6]
        assert all(r.regime == NON_UNIQUE for r in rows)

    def test_reference_thresholds(self):
        (row,) = regime_scan([2], 1, [3])
        assert row.threshold_paper == 11
        assert row.threshold_hypertree == 1
        assert row.regime == UNIQUE

    def test_empty(self):
        assert regime_scan([2, 3], 1, []) == []

    def test_skips_invalid_b(self):
        assert [r.k for r in regime_scan([2, 3, 4], 2, [5])] == [4]

    def test_cap(self):
        with pytest.raises(InvalidParameters):
            regime_scan([17], 1, [3])

    def test_csv_and_json_round_trip(self):
        rows = regime_scan([2, 3], 1, [3, 21])
        parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
        assert list(parsed[0]) == [
            "k", "b", "delta", "d", "regime", "q_minus", "q_times", "q_plus",
            "threshold_paper", "threshold_hypertree", "precision_bits",
        ]
        data = json.loads(rows_to_json(rows))
        for row, p, j in zip(rows, parsed, data):
            assert j == row.as_dict()
            assert float(p["q_times"]) == row.q_times
            assert (p["q_plus"] == "") == (row.q_plus is None)


def hardcore_critical_fugacity(delta: int) -> Fraction:
    return F((delta - 1) ** (delta - 1), (delta - 2) ** delta)


@pytest.mark.parametrize("b", [1, 2, 3])
def test_k_equals_2b_matches_hardcore_threshold(b):
    # gamma = 0: the 1-spins form a hard-core configuration with fugacity 1/lambda
    fugacity = F(1, 2**b - 1)
    for delta in range(3, 30):
        expected = NON_UNIQUE if fugacity > hardcore_critical_fugacity(delta) else UNIQUE
        assert classify(2 * b, b, delta).regime == expected, delta
