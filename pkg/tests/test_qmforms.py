"""Quasi-modular basis construction and exact decomposition."""
import random
from fractions import Fraction

import pytest

from qzeta.ring import QSeries
from qzeta.zeta import bracket, eval_named, z_series
from qzeta.qmforms import (NotInSpan, QMDecomposition, basis_monomials,
                           decompose, decompose_mpoly, monomial_name,
                           monomial_weight, qm_basis)
from qzeta.fock import SurfaceModel

F = Fraction

H0_COEFFS = {(2, 0, 0): F(1), (0, 1, 0): F(1), (3, 0, 0): F(-8, 3),
             (1, 1, 0): F(4), (0, 0, 1): F(14, 3)}


class TestBasis:
    def test_weight6_has_seven_monomials(self):
        monos = basis_monomials(6)
        assert len(monos) == 7
        assert set(monos) == {(0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 1, 0),
                              (3, 0, 0), (1, 1, 0), (0, 0, 1)}

    def test_weight0(self):
        assert basis_monomials(0) == [(0, 0, 0)]

    def test_weight4(self):
        assert set(basis_monomials(4)) == {(0, 0, 0), (1, 0, 0),
                                           (2, 0, 0), (0, 1, 0)}

    def test_order_precondition(self):
        with pytest.raises(ValueError):
            qm_basis(6, 10)  # needs >= 7 + margin

    def test_rejects_odd_weight(self):
        with pytest.raises(ValueError):
            basis_monomials(3)


class TestDecompose:
    def test_h11_0(self):
        N = 30
        dec = decompose(eval_named("h11_0", N), 6, N)
        assert isinstance(dec, QMDecomposition)
        assert dec.coeffs == H0_COEFFS
        assert dec.weight == 6

    def test_zero_series(self):
        dec = decompose(QSeries.zero(30), 6, 30)
        assert dec.coeffs == {}
        assert dec.weight == 0

    def test_bracket_one_not_in_span(self):
        res = decompose(bracket((1,), 30), 6, 30)
        assert isinstance(res, NotInSpan)
        assert not res
        assert res.first_failing_degree <= 30

    def test_basis_delta_recovery(self):
        N = 30
        basis = qm_basis(6, N)
        for mono, series in zip(basis.monomials, basis.series):
            dec = decompose(series, 6, N)
            assert dec.coeffs == {mono: F(1)} or (mono == (0, 0, 0)
                                                  and dec.coeffs == {(0, 0, 0): F(1)})

    def test_linearity(self):
        N = 30
        rng = random.Random(11)
        f = eval_named("h11_0", N)
        g = (z_series((2,), N) * z_series((4,), N)).scale(3) + z_series((2,), N)
        for _ in range(5):
            a = F(rng.randint(-6, 6), rng.randint(1, 5))
            b = F(rng.randint(-6, 6), rng.randint(1, 5))
            dec = decompose(f.scale(a) + g.scale(b), 6, N)
            df, dg = decompose(f, 6, N), decompose(g, 6, N)
            want = {}
            for m, c in df.coeffs.items():
                want[m] = want.get(m, F(0)) + a * c
            for m, c in dg.coeffs.items():
                want[m] = want.get(m, F(0)) + b * c
            want = {m: c for m, c in want.items() if c}
            assert dec.coeffs == want

    def test_reconstruction(self):
        N = 30
        f = eval_named("h11_2", N)
        dec = decompose(f, 6, N)
        assert dec.reconstruct(N).agrees_with(f)

    def test_monomial_names(self):
        assert monomial_name((0, 0, 0)) == "1"
        assert monomial_name((2, 1, 0)) == "Z(2)^2*Z(4)"
        assert monomial_weight((1, 1, 1)) == 12

    def test_order_above_series_rejected(self):
        f = z_series((2,), 20)
        with pytest.raises(ValueError):
            decompose(f, 6, 25)

    def test_mpoly_series_rejected_by_decompose(self):
        surf = SurfaceModel()
        f = QSeries([surf.ring.one], order=30, ring=surf.ring)
        with pytest.raises(ValueError):
            decompose(f, 6, 30)


class TestDecomposeMPoly:
    def test_constant_slice(self):
        surf = SurfaceModel()
        R = surf.ring
        c = R.const(F(5, 3))
        f = QSeries([c], order=30, ring=R)
        out = decompose_mpoly(f, 6, 30)
        zero_exps = (0,) * R.arity
        assert set(out) == {zero_exps}
        assert out[zero_exps].coeffs == {(0, 0, 0): F(5, 3)}

    def test_two_point_slices_k_trivial(self):
        # chi-slice and <L1,L2>-slice of the K-trivial two-point series
        from qzeta.pipeline import ch1ch1_reduced, standard_surface
        N = 20
        surf = standard_surface(K_trivial=True)
        series = ch1ch1_reduced(surf, N)
        out = decompose_mpoly(series, 6, N)
        R = surf.ring
        chi_exps = tuple(1 if s == "chi" else 0 for s in R.symbols)
        l1l2_exps = tuple(1 if s == "L1L2" else 0 for s in R.symbols)
        assert set(out) == {chi_exps, l1l2_exps}
        # <L1,L2>-slice: q d/dq Z(2) = Z(2) + 5 Z(4) - 2 Z(2)^2
        assert out[l1l2_exps].coeffs == {(1, 0, 0): F(1), (0, 1, 0): F(5),
                                         (2, 0, 0): F(-2)}
        # chi-slice: h2 = -(5/4) h0 combination
        want = {m: c * F(-5, 4) for m, c in H0_COEFFS.items()}
        assert out[chi_exps].coeffs == want
