"""Assembly of the two-point generating series and the verification registry.

Every check reproduces a named identity at a stated truncation order with
exact arithmetic.  Where a printed display disagrees with the value forced by
its own derivation (three cases: the closed form of the degree-0 two-point
lemma, the sign of the weight-6 component formulas, and the proportionality
chain between the equivariant components), the check verifies the derived
truth and its detail string reports the deviation of the printed display.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .ring import QSeries, euler_pow, lambert_term
from .zeta import bracket, eisenstein, eval_named, z_series
from .fock import (DecoratedOp, GenPartition, SurfaceModel, chern_op,
                   equiv_chern_coefficient, equiv_chern_op, equiv_trace,
                   fock_trace_bruteforce, gamma_commutation_check, gamma_trace,
                   trace_product, vertex_trace, _zero_weight_partitions)


class CheckResult:
    """Outcome of one named verification."""

    def __init__(self, name, passed, order, detail="", mismatch=None):
        self.name = name
        self.passed = bool(passed)
        self.order = order
        self.detail = detail
        self.mismatch = mismatch  # (degree, got, expected) when failing

    def to_json_dict(self):
        out = {"name": self.name, "status": "pass" if self.passed else "fail",
               "order": self.order, "detail": self.detail}
        if self.mismatch is not None:
            d, got, want = self.mismatch
            out["mismatch"] = {"degree": d, "got": str(got), "expected": str(want)}
        return out

    def __repr__(self):
        tag = "pass" if self.passed else "FAIL"
        return f"[{tag}] {self.name} (order {self.order}){': ' + self.detail if self.detail else ''}"


def _series_check(name, order, got, want, detail=""):
    mm = got.first_mismatch(want, order)
    if mm is None:
        return CheckResult(name, True, order, detail)
    return CheckResult(name, False, order, detail, mismatch=mm)


# -- surfaces and F-series ------------------------------------------------------


@lru_cache(maxsize=None)
def standard_surface(K_trivial=False, chi=None):
    return SurfaceModel(chi=chi, K_trivial=K_trivial)


class FSeriesSpec:
    """Product of Chern character operators to trace against the vertex."""

    def __init__(self, entries, surface, order):
        self.entries = tuple(entries)  # (k, CohClass) pairs, k in {0, 1}
        if any(k not in (0, 1) for k, _ in self.entries):
            raise ValueError("only operator indices 0 and 1 are available")
        self.surface = surface
        self.order = order

    def key(self):
        return (tuple((k, a.key()) for k, a in self.entries), self.order)


def f_series_reduced(spec):
    """Reduced generating series for a product of Chern character operators."""
    cache = getattr(spec.surface, "_fseries_cache", None)
    if cache is None:
        cache = spec.surface._fseries_cache = {}
    got = cache.get(spec.key())
    if got is not None:
        return got
    surface, order = spec.surface, spec.order
    expansions = [chern_op(k, a, surface, order) for k, a in spec.entries]
    acc = QSeries.zero(order, surface.ring)

    def walk(i, coeff, word):
        nonlocal acc
        if i == len(expansions):
            t = vertex_trace(word, surface, order)
            if not t.is_zero():
                acc = acc + t.scale(coeff)
            return
        for c, op in expansions[i]:
            walk(i + 1, coeff * c, word + [op])

    walk(0, Fraction(1), [])
    cache[spec.key()] = acc
    return acc


def ch1ch1_reduced(surface, order):
    """Reduced two-point series of first Chern characters of L1^[n], L2^[n].

    The first Chern character splits as the index-1 operator on the
    fundamental class plus the index-0 operator on the divisor (the remaining
    term of the general splitting vanishes), so the product expands into four
    F-series.
    """
    one = surface.one()
    l1, l2 = surface.divisor("L1"), surface.divisor("L2")
    total = QSeries.zero(order, surface.ring)
    for entries in (((1, one), (1, one)), ((1, one), (0, l1)),
                    ((1, one), (0, l2)), ((0, l1), (0, l2))):
        total = total + f_series_reduced(FSeriesSpec(entries, surface, order))
    return total


def equiv_ch1ch1(m, order):
    """Equivariant reduced two-point series at vertex level m."""
    ops = equiv_chern_op(1, order)
    acc = QSeries.zero(order)
    for c1, p1 in ops:
        for c2, p2 in ops:
            t = gamma_trace(m, (p1, p2), order)
            if not t.is_zero():
                acc = acc + t.scale(c1 * c2)
    return acc


# -- expected right-hand sides ---------------------------------------------------


def _h_component(tag, order):
    return eval_named(f"h11_{tag}", order)


def h_component_closed_form(tag, order):
    """Verified quasi-modular closed forms of the h components.

    h0 = Z2^2 + Z4 - (8/3)Z2^3 + 4 Z2 Z4 + (14/3)Z6, h2 = -(5/4) h0,
    h4 = (1/4) h0; the printed component formulas for h2/h4 carry the
    opposite sign (see the discrepancy check).
    """
    z2, z4, z6 = (z_series((s,), order) for s in (2, 4, 6))
    h0 = (z2 * z2) + z4 - (z2 ** 3).scale(Fraction(8, 3)) \
        + (z2 * z4).scale(4) + z6.scale(Fraction(14, 3))
    if tag == 0:
        return h0
    if tag == 2:
        return h0.scale(Fraction(-5, 4))
    if tag == 4:
        return h0.scale(Fraction(1, 4))
    raise ValueError(tag)


def f00_expected(surface, order):
    """Degree-0 two-point lemma with the corrected L1L2-coefficient q d/dq Z(2)."""
    R = surface.ring
    K, l1, l2 = surface.canonical(), surface.divisor("L1"), surface.divisor("L2")
    z2 = z_series((2,), order)
    return (z2 * z2).lift(R).scale(K.pair(l1) * K.pair(l2)) + \
        z2.q_derivative().lift(R).scale(l1.pair(l2))


def f10_expected(surface, divisor_name, order):
    R = surface.ring
    K, l = surface.canonical(), surface.divisor(divisor_name)
    z2, z3 = z_series((2,), order), z_series((3,), order)
    half = Fraction(1, 2)
    return ((z3 - z2) * z2).lift(R).scale(half * K.pair(K) * K.pair(l)) + \
        (z3 - z2).q_derivative().lift(R).scale(half * K.pair(l))


def f11_expected(surface, order):
    R = surface.ring
    K = surface.canonical()
    k2 = K.pair(K)
    z2, z3 = z_series((2,), order), z_series((3,), order)
    sums = (eval_named("thm_sum1", order) + eval_named("thm_sum2", order)
            + eval_named("thm_sum3", order))
    return ((z3 - z2) ** 2).lift(R).scale(Fraction(1, 4) * k2 * k2) + \
        _h_component(2, order).lift(R).scale(surface.chi) + \
        (sums - _h_component(4, order)).lift(R).scale(k2)


def ch1ch1_expected(surface, order):
    return (f11_expected(surface, order)
            + f10_expected(surface, "L1", order)
            + f10_expected(surface, "L2", order)
            + f00_expected(surface, order))


# -- the registry -----------------------------------------------------------------


def _partition_numbers(n):
    """Dynamic-programming partition counter (independent of euler_pow)."""
    p = [1] + [0] * n
    for part in range(1, n + 1):
        for s in range(part, n + 1):
            p[s] += p[s - part]
    return p


def check_euler_partition_oracle(order=50):
    got = euler_pow(-1, order)
    table = _partition_numbers(order)
    want = QSeries(table, order=order)
    inv = euler_pow(1, order) * got
    res = _series_check("euler_partition_oracle", order, got, want,
                        "Euler product inverse vs partition-count recursion")
    if res.passed and not (inv - QSeries.one(order)).is_zero():
        return CheckResult("euler_partition_oracle", False, order,
                           "inverse pair product differs from 1")
    return res


def check_bracket_defs(order=40):
    # [1], [2], [3] closed forms, then the general single-index formula
    d1 = QSeries.zero(order)
    d2 = QSeries.zero(order)
    d3 = QSeries.zero(order)
    for n in range(1, order + 1):
        d1 = d1 + lambert_term(n, n, 1, order=order)
        d2 = d2 + lambert_term(n, n, 1, order=order).scale(n)
        d3 = d3 + lambert_term(n, n, 1, order=order).scale(Fraction(n * n, 2))
    for name, idx, want in (("[1]", (1,), d1), ("[2]", (2,), d2), ("[3]", (3,), d3)):
        mm = bracket(idx, order).first_mismatch(want)
        if mm:
            return CheckResult("bracket_defs", False, order, f"{name} failed", mm)
    import math
    for s in range(1, 7):
        want = QSeries.zero(order)
        for d in range(1, order + 1):
            want = want + lambert_term(d, d, 1, order=order).scale(
                Fraction(d ** (s - 1), math.factorial(s - 1)))
        mm = bracket((s,), order).first_mismatch(want)
        if mm:
            return CheckResult("bracket_defs", False, order, f"[{s}] divisor form", mm)
    return CheckResult("bracket_defs", True, order,
                       "bracket closed forms and divisor-power forms, s <= 6")


def check_okounkov_defs(order=40):
    cases = []
    z2want = QSeries.zero(order)
    z3want = QSeries.zero(order)
    z4want = QSeries.zero(order)
    z6want = QSeries.zero(order)
    for n in range(1, order + 1):
        z2want = z2want + lambert_term(n, n, 2, order=order)
        z3want = z3want + lambert_term(2 * n, n, 3, order=order) \
            + lambert_term(n, n, 3, order=order)
        z4want = z4want + lambert_term(2 * n, n, 4, order=order)
        z6want = z6want + lambert_term(3 * n, n, 6, order=order)
    cases = (("Z(2)", (2,), z2want), ("Z(3)", (3,), z3want),
             ("Z(4)", (4,), z4want), ("Z(6)", (6,), z6want))
    for name, idx, want in cases:
        mm = z_series(idx, order).first_mismatch(want)
        if mm:
            return CheckResult("okounkov_defs", False, order, f"{name}", mm)
    return CheckResult("okounkov_defs", True, order, "single-index Lambert closed forms")


def check_bk3_2_6(order=40):
    z2, z3, z4 = (z_series((s,), order) for s in (2, 3, 4))
    pairs = (("Z(2) = [2]", z2, bracket((2,), order)),
             ("Z(3) = 2[3]", z3, bracket((3,), order).scale(2)),
             ("Z(4) = [4] - (1/6)[2]", z4,
              bracket((4,), order) - bracket((2,), order).scale(Fraction(1, 6))))
    for name, lhs, rhs in pairs:
        mm = lhs.first_mismatch(rhs)
        if mm:
            return CheckResult("bk3_2_6", False, order, name, mm)
    return CheckResult("bk3_2_6", True, order, "bracket-to-Z conversions")


def check_eisenstein_conversion(order=40):
    z2, z4, z6 = (z_series((s,), order) for s in (2, 4, 6))
    g2, g4, g6 = (eisenstein(w, order) for w in (2, 4, 6))
    cases = (
        ("G2 = -1/24 + Z(2)", g2, z2 + Fraction(-1, 24)),
        ("G4 = 1/1440 + (1/6)Z(2) + Z(4)", g4,
         z2.scale(Fraction(1, 6)) + z4 + Fraction(1, 1440)),
        ("G6 = -1/60480 + (1/120)Z(2) + (1/4)Z(4) + Z(6)", g6,
         z2.scale(Fraction(1, 120)) + z4.scale(Fraction(1, 4)) + z6
         + Fraction(-1, 60480)),
    )
    for name, lhs, rhs in cases:
        mm = lhs.first_mismatch(rhs)
        if mm:
            return CheckResult("eisenstein_conversion", False, order, name, mm)
    display = z2 + z4.scale(Fraction(1, 6)) + Fraction(1, 1440)
    note = ""
    if g4.first_mismatch(display):
        note = ("; note: the printed G4 display swaps the Z(2)/Z(4) "
                "coefficients (true: 1/1440 + (1/6)Z(2) + Z(4))")
    return CheckResult("eisenstein_conversion", True, order,
                       "G2/G4/G6 conversions incl. constant terms" + note)


def check_dz3(order=40):
    lhs = z_series((3,), order).q_derivative()
    rhs = z_series((5,), order).scale(5) - z_series((3, 2), order).scale(4) \
        - z_series((2, 3), order).scale(6) + z_series((3,), order)
    return _series_check("dz3", order, lhs, rhs,
                         "q d/dq Z(3) = 5Z(5) - 4Z(3,2) - 6Z(2,3) + Z(3)")


def check_bra1cor4(order=50):
    lhs = QSeries.zero(order)
    for n1 in range(2, order + 1):
        inner = QSeries.zero(order)
        for n2 in range(1, n1):
            inner = inner + lambert_term(0, n2, 1, order=order)
        lhs = lhs + lambert_term(n1, n1, 2, order=order) * inner
    rhs = QSeries.zero(order)
    for n in range(1, order + 1):
        if 2 * n > order:
            break
        rhs = rhs + lambert_term(2 * n, n, 3, order=order)
    return _series_check("bra1cor4", order, lhs, rhs,
                         "chain double sum vs single cubic-pole sum")


def check_qiqj(order=40):
    for i in range(1, 7):
        for j in range(1, 7):
            lhs = lambert_term(0, i, 1, order=order) * lambert_term(0, j, 1, order=order)
            rhs = (lambert_term(0, i, 1, order=order)
                   + lambert_term(j, j, 1, order=order)) \
                * lambert_term(0, i + j, 1, order=order)
            mm = lhs.first_mismatch(rhs)
            if mm:
                return CheckResult("qiqj", False, order, f"i={i} j={j}", mm)
    return CheckResult("qiqj", True, order, "partial-fraction split, i,j <= 6")


def _trala_cases(i, j, order):
    lam = lambda a, m, p: lambert_term(a, m, p, order=order)
    d = 1 if i == j else 0
    return (
        ((-i, i), lam(i, i, 1).scale(i)),
        ((i, -i), lam(0, i, 1).scale(i)),
        ((i, j, -i, -j), (lam(0, i, 1) * lam(0, j, 1)).scale((1 + d) * i * j)),
        ((-i, -j, i, j), (lam(i, i, 1) * lam(j, j, 1)).scale((1 + d) * i * j)),
        ((-i, j, -j, i),
         (lam(i, i, 1) * lam(0, j, 1)).scale(i * j)
         + (lam(i, i, 1) * lam(j, j, 1)).scale(d * i * j)),
        ((-i, -j, i + j, -i - j, i, j),
         (lam(i, i, 1) * lam(j, j, 1) * lam(0, i + j, 1)).scale((1 + d) * i * j * (i + j))),
        ((-i - j, i, j, -i, -j, i + j),
         (lam(i, i, 1) * lam(j, j, 1) * lam(0, i + j, 1)).scale((1 + d) * i * j * (i + j))),
    )


def check_trala_suite(order=20):
    reducer = euler_pow(1, order)
    # the empty word: Tr q^n is the inverse Euler product, reduced to 1
    if equiv_trace((), order).first_mismatch(QSeries.one(order)):
        return CheckResult("trala_suite", False, order, "empty word, recursive")
    if fock_trace_bruteforce((), order).first_mismatch(euler_pow(-1, order)):
        return CheckResult("trala_suite", False, order, "empty word, brute force")
    for i in range(1, 5):
        for j in range(1, 5):
            for parts, want in _trala_cases(i, j, order):
                rec = equiv_trace(parts, order)
                mm = rec.first_mismatch(want)
                if mm:
                    return CheckResult("trala_suite", False, order,
                                       f"recursive engine, word {parts}", mm)
                brute = fock_trace_bruteforce(parts, order) * reducer
                mm = brute.first_mismatch(want)
                if mm:
                    return CheckResult("trala_suite", False, order,
                                       f"brute-force engine, word {parts}", mm)
    return CheckResult("trala_suite", True, order,
                       "eight scalar closed forms, both engines, i,j <= 4")


def check_tracei1Xj1X(order=20):
    surf = standard_surface()
    R = surf.ring
    one, l1, l2 = surf.one(), surf.divisor("L1"), surf.divisor("L2")
    chi = surf.chi
    lam = lambda a, m, p: lambert_term(a, m, p, order=order).lift(R)
    for i in range(1, 5):
        cases = (
            ([DecoratedOp((-i,), l1), DecoratedOp((i,), l2)],
             lam(i, i, 1).scale(l1.pair(l2) * Fraction(-i))),
            ([DecoratedOp((i,), l1), DecoratedOp((-i,), l2)],
             lam(0, i, 1).scale(l1.pair(l2) * Fraction(-i))),
            ([DecoratedOp((-i, i), one)], lam(i, i, 1).scale(chi * Fraction(-i))),
            ([DecoratedOp((i, -i), one)], lam(0, i, 1).scale(chi * Fraction(-i))),
        )
        for word, want in cases:
            got = trace_product(word, surf, order)
            mm = got.first_mismatch(want)
            if mm:
                return CheckResult("tracei1Xj1X", False, order, f"i={i}", mm)
    return CheckResult("tracei1Xj1X", True, order,
                       "two-operator and grouped diagonal traces, i <= 4")


def check_trij1Xij1X(order=20):
    surf = standard_surface()
    R = surf.ring
    one = surf.one()
    chi = surf.chi
    lam = lambda a, m, p: lambert_term(a, m, p, order=order).lift(R)
    for i in range(1, 4):
        for j in range(1, 4):
            d = 1 if i == j else 0
            cases = (
                ([DecoratedOp((-i, i + j), one), DecoratedOp((-i - j, i), one)],
                 (lam(i, i, 1) * lam(0, i + j, 1)).scale(chi * Fraction(i * (i + j)))),
                ([DecoratedOp((-i - j, i), one), DecoratedOp((-i, i + j), one)],
                 (lam(i + j, i, 1) * lam(0, i + j, 1)).scale(chi * Fraction(i * (i + j)))),
                ([DecoratedOp((i, j), one), DecoratedOp((-j, -i), one)],
                 (lam(0, i, 1) * lam(0, j, 1)).scale(chi * Fraction((1 + d) * i * j))),
                ([DecoratedOp((-j, -i), one), DecoratedOp((i, j), one)],
                 (lam(i, i, 1) * lam(j, j, 1)).scale(chi * Fraction((1 + d) * i * j))),
            )
            for word, want in cases:
                got = trace_product(word, surf, order)
                mm = got.first_mismatch(want)
                if mm:
                    return CheckResult("trij1Xij1X", False, order, f"i={i} j={j}", mm)
    return CheckResult("trij1Xij1X", True, order, "four-operator grouped traces")


def check_gamma_comm(order=8):
    for pairing in (0, 1, 2, -1):
        if not gamma_commutation_check(pairing, order, window=6):
            return CheckResult("gamma_comm", False, order, f"pairing {pairing}")
    return CheckResult("gamma_comm", True, order,
                       "half-vertex commutation, pairings {0, 1, 2, -1}, window 6")


def check_str_gk_k1(order=8):
    ops = dict()
    for c, parts in equiv_chern_op(1, order):
        ops[parts] = c
    for parts in _zero_weight_partitions(3, order):
        c = ops.get(parts, Fraction(0))
        if len(parts) == 3:
            want = Fraction(1, GenPartition(parts).symmetry_factorial)
            if c != want:
                return CheckResult("str_gk_k1", False, order,
                                   f"{parts}: got {c}, want {want}")
        elif c:
            return CheckResult("str_gk_k1", False, order,
                               f"unexpected term at {parts}: {c}")
    if equiv_chern_coefficient((-1, 1), 0) != 1:
        return CheckResult("str_gk_k1", False, order, "k=0 pair coefficient")
    return CheckResult("str_gk_k1", True, order,
                       "index-1 operator = normalized length-3 sum")


def check_equiv_kodd_vanishing(order=20):
    ops = equiv_chern_op(1, order)
    for m in (0, 1, 2):
        acc = QSeries.zero(order)
        for c, parts in ops:
            t = gamma_trace(m, (parts,), order)
            if not t.is_zero():
                acc = acc + t.scale(c)
        if not acc.is_zero():
            return CheckResult("equiv_kodd_vanishing", False, order, f"m={m}")
    return CheckResult("equiv_kodd_vanishing", True, order,
                       "single odd-index operator traces vanish, m in {0,1,2}")


_H_GOLDEN_Q7 = [0, 0, 2, 16, 60, 160, 360, 672]


def check_h11_direct_vs_decomp(order=30):
    from .qmforms import decompose
    h0 = _h_component(0, order)
    for n, c in enumerate(_H_GOLDEN_Q7):
        if h0.coeffs[n] != c:
            return CheckResult("h11_direct_vs_decomp", False, order,
                               "h0 golden coefficients", (n, h0.coeffs[n], c))
    for tag in (0, 2, 4):
        h = _h_component(tag, order)
        dec = decompose(h, 6, order)
        if not dec:
            return CheckResult("h11_direct_vs_decomp", False, order,
                               f"h{tag} not quasi-modular of weight <= 6: {dec}")
        closed = h_component_closed_form(tag, order)
        mm = h.first_mismatch(closed)
        if mm:
            return CheckResult("h11_direct_vs_decomp", False, order,
                               f"h{tag} closed form", mm)
    return CheckResult("h11_direct_vs_decomp", True, order,
                       "components decompose at weight 6 and match closed forms")


# exponent triples (a, b, c) of Z(2)^a Z(4)^b Z(6)^c
_PROP_H0 = {(2, 0, 0): Fraction(1), (0, 1, 0): Fraction(1),
            (3, 0, 0): Fraction(-8, 3), (1, 1, 0): Fraction(4),
            (0, 0, 1): Fraction(14, 3)}


def check_prop_h11024(order=30):
    from .qmforms import decompose
    h0 = decompose(_h_component(0, order), 6, order)
    if not h0 or h0.coeffs != _PROP_H0:
        return CheckResult("prop_h11024", False, order,
                           f"h0 decomposition: {h0}")
    h2 = decompose(_h_component(2, order), 6, order)
    h4 = decompose(_h_component(4, order), 6, order)
    want2 = {m: c * Fraction(-5, 4) for m, c in _PROP_H0.items()}
    want4 = {m: c * Fraction(1, 4) for m, c in _PROP_H0.items()}
    if not h2 or h2.coeffs != want2:
        return CheckResult("prop_h11024", False, order, f"h2 decomposition: {h2}")
    if not h4 or h4.coeffs != want4:
        return CheckResult("prop_h11024", False, order, f"h4 decomposition: {h4}")
    return CheckResult(
        "prop_h11024", True, order,
        "h0 matches the printed coefficients exactly; h2 and h4 equal the "
        "NEGATIVES of the printed component formulas (printed signs are "
        "inconsistent with the defining sums, confirmed by brute-force traces)")


def check_corollary_h11024_discrepancy(order=30):
    h0 = _h_component(0, order)
    h2 = _h_component(2, order)
    h4 = _h_component(4, order)
    rel_true = ((h0 - h2.scale(Fraction(-4, 5))).is_zero()
                and (h0 - h4.scale(4)).is_zero())
    printed = ((h0 - h4.scale(Fraction(4, 5))).is_zero()
               and (h0 - h2.scale(-4)).is_zero())
    swapped = ((h0 - h2.scale(Fraction(4, 5))).is_zero()
               and (h0 - h4.scale(-4)).is_zero())
    detail = ("true chain: h0 = -(4/5) h2 = 4 h4; "
              f"printed corollary chain (h0 = (4/5)h4 = -4h2) holds: {printed}; "
              f"proposition-implied chain (h0 = (4/5)h2 = -4h4) holds: {swapped}")
    return CheckResult("corollary_h11024_discrepancy", rel_true, order, detail)


def check_lemma_f00(order=25):
    surf = standard_surface()
    got = f_series_reduced(FSeriesSpec(
        ((0, surf.divisor("L1")), (0, surf.divisor("L2"))), surf, order))
    want = f00_expected(surf, order)
    res = _series_check(
        "lemma_f00", order, got, want,
        "L1L2-coefficient is q d/dq Z(2) = Z(2) + 5Z(4) - 2Z(2)^2; the printed "
        "closed form (7/2)Z(4) - (1/2)Z(2)^2 + Z(2) differs from the lemma's "
        "own derived sum starting at q^3")
    return res


def check_lemma_f101(order=20):
    surf = standard_surface()
    got = f_series_reduced(FSeriesSpec(
        ((1, surf.one()), (0, surf.divisor("L1"))), surf, order))
    want = f10_expected(surf, "L1", order)
    return _series_check("lemma_f101", order, got, want,
                         "index-(1,0) two-point lemma as printed")


def f111_component_check(order=12):
    surf = standard_surface()
    got = f_series_reduced(FSeriesSpec(((1, surf.one()), (1, surf.one())),
                                       surf, order))
    want = f11_expected(surf, order)
    return _series_check(
        "lemma_f111", order, got, want,
        "index-(1,1) two-point lemma with components from the defining sums")


def check_theorem_main(order=12):
    surf = standard_surface()
    got = ch1ch1_reduced(surf, order)
    want = ch1ch1_expected(surf, order)
    return _series_check(
        "theorem_main", order, got, want,
        "full surface two-point theorem assembled from the verified lemmas; "
        "the printed display's chi-coefficient and quasi-modular K^2-tail "
        "carry the sign-flipped component values and its L1L2-coefficient "
        "is the typo'd closed form (see lemma_f00)")


def check_theorem_K_trivial(order=20):
    surf = standard_surface(K_trivial=True)
    got = ch1ch1_reduced(surf, order)
    R = surf.ring
    z2 = z_series((2,), order)
    l1l2 = surf.divisor("L1").pair(surf.divisor("L2"))
    want = z2.q_derivative().lift(R).scale(l1l2) \
        + _h_component(2, order).lift(R).scale(surf.chi)
    res = _series_check(
        "theorem_K_trivial", order, got, want,
        "numerically trivial K: (Z(2) + 5Z(4) - 2Z(2)^2) <L1,L2> + h2 chi, "
        "both quasi-modular of weight <= 6, verifying the conjecture")
    return res


CHECKS = {
    "euler_partition_oracle": (check_euler_partition_oracle, 50),
    "bracket_defs": (check_bracket_defs, 40),
    "okounkov_defs": (check_okounkov_defs, 40),
    "bk3_2_6": (check_bk3_2_6, 40),
    "eisenstein_conversion": (check_eisenstein_conversion, 40),
    "dz3": (check_dz3, 40),
    "bra1cor4": (check_bra1cor4, 50),
    "qiqj": (check_qiqj, 40),
    "trala_suite": (check_trala_suite, 20),
    "tracei1Xj1X": (check_tracei1Xj1X, 20),
    "trij1Xij1X": (check_trij1Xij1X, 20),
    "gamma_comm": (check_gamma_comm, 8),
    "str_gk_k1": (check_str_gk_k1, 8),
    "equiv_kodd_vanishing": (check_equiv_kodd_vanishing, 20),
    "h11_direct_vs_decomp": (check_h11_direct_vs_decomp, 30),
    "prop_h11024": (check_prop_h11024, 30),
    "corollary_h11024_discrepancy": (check_corollary_h11024_discrepancy, 30),
    "lemma_f00": (check_lemma_f00, 25),
    "lemma_f101": (check_lemma_f101, 20),
    "lemma_f111": (f111_component_check, 12),
    "theorem_main": (check_theorem_main, 12),
    "theorem_K_trivial": (check_theorem_K_trivial, 20),
}


def run_checks(names="all", order=None):
    """Run registry checks by name; order overrides each check's default."""
    if names == "all" or names == ["all"]:
        selected = list(CHECKS)
    else:
        if isinstance(names, str):
            names = [names]
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise KeyError(f"unknown checks: {unknown}; known: {sorted(CHECKS)}")
        selected = list(names)
    results = []
    for name in selected:
        fn, default_order = CHECKS[name]
        results.append(fn(order if order is not None else default_order))
    return results
