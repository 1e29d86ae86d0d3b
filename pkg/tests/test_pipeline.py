"""Assembled series, registry checks, and cross-route consistency."""
from fractions import Fraction

import pytest

from qzeta.ring import MPoly, QSeries
from qzeta.zeta import eval_named, z_series
from qzeta.fock import SurfaceModel
from qzeta.pipeline import (CHECKS, FSeriesSpec, ch1ch1_reduced, equiv_ch1ch1,
                            f00_expected, f10_expected, f111_component_check,
                            f_series_reduced, h_component_closed_form,
                            run_checks, standard_surface)

F = Fraction


def swap_l1_l2(series):
    """Relabel the two auxiliary divisors in every coefficient."""
    ring = series.ring
    perm = []
    for s in ring.symbols:
        s2 = (s.replace("L1", "@").replace("L2", "L1").replace("@", "L2"))
        if s2 == "L2L1":
            s2 = "L1L2"
        perm.append(ring.symbols.index(s2))
    out = []
    for c in series.coeffs:
        terms = {}
        for exps, v in c.terms.items():
            new = tuple(exps[perm[i]] for i in range(len(perm)))
            terms[new] = v
        out.append(MPoly(ring, terms))
    return QSeries(out, order=series.order, ring=ring)


class TestFSeries:
    def test_empty_spec_is_one(self):
        surf = standard_surface()
        got = f_series_reduced(FSeriesSpec((), surf, 10))
        assert got.agrees_with(QSeries.one(10, surf.ring))

    def test_f00_lemma_order_15(self):
        surf = standard_surface()
        spec = FSeriesSpec(((0, surf.divisor("L1")), (0, surf.divisor("L2"))),
                           surf, 15)
        assert f_series_reduced(spec).agrees_with(f00_expected(surf, 15))

    def test_f10_lemma_order_15(self):
        surf = standard_surface()
        spec = FSeriesSpec(((1, surf.one()), (0, surf.divisor("L1"))), surf, 15)
        assert f_series_reduced(spec).agrees_with(f10_expected(surf, "L1", 15))

    def test_f10_touches_only_k_pairings(self):
        # every symbol monomial is K^2*<K,L1> or <K,L1>
        surf = standard_surface()
        spec = FSeriesSpec(((1, surf.one()), (0, surf.divisor("L1"))), surf, 12)
        series = f_series_reduced(spec)
        ring = surf.ring
        k2 = ring.symbols.index("K2")
        kl1 = ring.symbols.index("KL1")
        allowed = set()
        for c in series.coeffs:
            allowed.update(c.terms)
        for exps in allowed:
            assert exps[kl1] == 1
            assert all(e == 0 for i, e in enumerate(exps) if i not in (k2, kl1))

    def test_rejects_higher_index(self):
        surf = standard_surface()
        with pytest.raises(ValueError):
            FSeriesSpec(((2, surf.one()),), surf, 5)

    def test_f00_l1l2_slice_three_routes(self):
        # engine slice == direct Lambert sum == q d/dq of the weight-2 series
        from qzeta.ring import lambert_term
        N = 20
        surf = standard_surface()
        spec = FSeriesSpec(((0, surf.divisor("L1")), (0, surf.divisor("L2"))),
                           surf, N)
        series = f_series_reduced(spec)
        ring = surf.ring
        idx = ring.symbols.index("L1L2")
        exps = tuple(1 if i == idx else 0 for i in range(ring.arity))
        slice_ = QSeries([c.terms.get(exps, F(0)) for c in series.coeffs],
                         order=N)
        direct = QSeries.zero(N)
        for n in range(1, N + 1):
            direct = direct + (lambert_term(n, n, 3, order=N)
                               + lambert_term(2 * n, n, 3, order=N)).scale(n)
        assert slice_.agrees_with(direct)
        assert slice_.agrees_with(z_series((2,), N).q_derivative())


class TestCh1Ch1:
    def test_symmetric_under_divisor_swap(self):
        surf = standard_surface()
        series = ch1ch1_reduced(surf, 10)
        assert series.agrees_with(swap_l1_l2(series))

    def test_trivial_divisors_leave_chi_part(self):
        # with K trivial and all L-pairings zero only the chi-slice remains
        surf = SurfaceModel(K_trivial=True)
        series = ch1ch1_reduced(surf, 12)
        ring = surf.ring
        chi_idx = ring.symbols.index("chi")
        h2 = h_component_closed_form(2, 12)
        for n, c in enumerate(series.coeffs):
            chi_exps = tuple(1 if i == chi_idx else 0 for i in range(ring.arity))
            assert c.terms.get(chi_exps, F(0)) == h2.coeffs[n]

    def test_k_trivial_l1l2_coefficient(self):
        surf = standard_surface(K_trivial=True)
        series = ch1ch1_reduced(surf, 14)
        ring = surf.ring
        idx = ring.symbols.index("L1L2")
        exps = tuple(1 if i == idx else 0 for i in range(ring.arity))
        slice_ = QSeries([c.terms.get(exps, F(0)) for c in series.coeffs],
                         order=series.order)
        assert slice_.agrees_with(z_series((2,), 14).q_derivative())


class TestEquivPipeline:
    def test_matches_h_polynomial(self):
        N = 10
        h0 = eval_named("h11_0", N)
        h2 = eval_named("h11_2", N)
        h4 = eval_named("h11_4", N)
        for m in (0, 1, 2):
            got = equiv_ch1ch1(m, N)
            want = h4.scale(F(m ** 4)) + h2.scale(F(m ** 2)) + h0
            assert got.agrees_with(want), m

    def test_even_in_m(self):
        for m in (1, 2, 3):
            assert equiv_ch1ch1(m, 8).agrees_with(equiv_ch1ch1(-m, 8))

    def test_vanishes_at_m_one_and_two(self):
        # the components satisfy h0(m^2-1)(m^2-4)/4, so these vanish exactly
        assert equiv_ch1ch1(1, 10).is_zero()
        assert equiv_ch1ch1(2, 10).is_zero()

    def test_components_by_interpolation_in_m_squared(self):
        # the m = 0, 1, 2 values determine all three components exactly
        N = 10
        v0 = equiv_ch1ch1(0, N)
        v1 = equiv_ch1ch1(1, N)
        v4 = equiv_ch1ch1(2, N)
        twelfth = F(1, 12)
        h4 = (v4 - v1.scale(4) + v0.scale(3)).scale(twelfth)
        h2 = (v1.scale(16) - v4 - v0.scale(15)).scale(twelfth)
        h0 = v0
        assert h0.agrees_with(eval_named("h11_0", N))
        assert h2.agrees_with(eval_named("h11_2", N))
        assert h4.agrees_with(eval_named("h11_4", N))


class TestRegistry:
    def test_all_names_present(self):
        assert set(CHECKS) == {
            "euler_partition_oracle", "bracket_defs", "okounkov_defs",
            "bk3_2_6", "eisenstein_conversion", "dz3", "bra1cor4", "qiqj",
            "trala_suite", "tracei1Xj1X", "trij1Xij1X", "gamma_comm",
            "str_gk_k1", "equiv_kodd_vanishing", "h11_direct_vs_decomp",
            "prop_h11024", "corollary_h11024_discrepancy", "lemma_f00",
            "lemma_f101", "lemma_f111", "theorem_main", "theorem_K_trivial"}

    def test_unknown_name_raises(self):
        with pytest.raises(KeyError):
            run_checks(["not_a_check"])

    def test_fast_subset_passes(self):
        names = ["bk3_2_6", "dz3", "qiqj", "str_gk_k1"]
        results = run_checks(names, order=None)
        assert all(r.passed for r in results)
        assert [r.name for r in results] == names

    def test_order_override(self):
        r = run_checks(["bk3_2_6"], order=12)[0]
        assert r.order == 12 and r.passed

    def test_discrepancy_report(self):
        r = run_checks(["corollary_h11024_discrepancy"], order=20)[0]
        assert r.passed
        assert "true chain: h0 = -(4/5) h2 = 4 h4" in r.detail
        assert "holds: False" in r.detail

    def test_f111_component_check(self):
        r = f111_component_check(10)
        assert r.passed

    def test_check_result_json(self):
        r = run_checks(["qiqj"], order=15)[0]
        d = r.to_json_dict()
        assert d["name"] == "qiqj" and d["status"] == "pass" and d["order"] == 15
