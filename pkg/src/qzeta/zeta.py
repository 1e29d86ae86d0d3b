"""q-zeta series families and a generic evaluator for nested Lambert-type sums.

Two series families are generated from one chain evaluator: divisor-sum
brackets [s1,...,sl] (numerator polynomials t*P_{s-1}(t)/(s-1)! built from
Eulerian polynomials) and the multiple q-zeta values Z(s1,...,sl) (half-power
numerators t^(s/2), resp. t^((s-1)/2)(t+1) for odd s).  The nested-sum
evaluator services every displayed multi-sum: free indices, strict chains,
and an equal-sum constraint between two index groups.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .ring import ONE, ZERO, QSeries, as_fraction, lambert_term

# -- Eulerian polynomials and numerator families ---------------------------


@lru_cache(maxsize=None)
def eulerian(s):
    """Coefficients of t*P_{s-1}(t), solved from its generating identity.

    t*P_{s-1}(t) = (1-t)^s * sum_{d>=1} d^(s-1) t^d, truncated at degree s;
    the product is exactly polynomial, so the truncation is lossless.
    """
    if s < 1:
        raise ValueError("index must be a positive integer")
    # (1-t)^s mod t^(s+1)
    binom = [Fraction((-1) ** k * comb(s, k)) for k in range(s + 1)]
    rhs = [ZERO] + [Fraction(d ** (s - 1)) for d in range(1, s + 1)]
    out = [ZERO] * (s + 1)
    for i, b in enumerate(binom):
        if not b:
            continue
        for j in range(s + 1 - i):
            out[i + j] += b * rhs[j]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


@lru_cache(maxsize=None)
def _bracket_numerator(s):
    """t*P_{s-1}(t)/(s-1)!; starts at t^1."""
    f = Fraction(1, factorial(s - 1))
    return tuple(c * f for c in eulerian(s))


@lru_cache(maxsize=None)
def _zeta_numerator(s):
    """t^(s/2) for even s, t^((s-1)/2)*(t+1) for odd s >= 3."""
    if s < 2:
        raise ValueError("multiple q-zeta indices must be >= 2")
    if s % 2 == 0:
        return (ZERO,) * (s // 2) + (ONE,)
    h = (s - 1) // 2
    return (ZERO,) * h + (ONE, ONE)


def _poly_valuation(poly):
    for v, c in enumerate(poly):
        if c:
            return v
    raise ValueError("zero numerator polynomial")


@lru_cache(maxsize=None)
def _chain_factor(poly, s, n, order):
    """Series of P(q^n)/(1-q^n)^s for a numerator polynomial P."""
    total = QSeries.zero(order)
    for j, c in enumerate(poly):
        if c and n * j <= order:
            total = total + lambert_term(n * j, n, s, scale=c, order=order)
    return total


def _zq_series(numerators, indices, order):
    """sum over chains n_1 > ... > n_l >= 1 of prod numerator_i(q^{n_i})/(1-q^{n_i})^{s_i}."""
    ell = len(indices)
    if ell == 0:
        return QSeries.one(order)
    polys = [numerators(s) for s in indices]
    vals = [_poly_valuation(p) for p in polys]

    # minimal chain-tail degree when positions i.. are still free and the
    # next value must be < bound: tail takes the smallest admissible chain
    def tail_min(i, bound):
        need = ell - i
        if bound - 1 < need:
            return None
        # smallest strictly decreasing tail below bound is need, need-1, ..., 1
        total = 0
        v = need
        for j in range(i, ell):
            total += vals[j] * v
            v -= 1
        return total

    out = QSeries.zero(order)

    def walk(i, bound, spent, prefix):
        nonlocal out
        if i == ell:
            out = out + prefix
            return
        n = min(bound - 1, (order - spent) // vals[i] if vals[i] else bound - 1)
        while n >= ell - i:
            cost = vals[i] * n
            rest = tail_min(i + 1, n)
            if rest is None or spent + cost + rest > order:
                n -= 1
                continue
            walk(i + 1, n, spent + cost,
                 prefix * _chain_factor(polys[i], indices[i], n, order))
            n -= 1

    walk(0, order + 2 + ell, 0, QSeries.one(order))
    return out


def bracket(indices, order):
    """The divisor-sum bracket [s1,...,sl] to the given order; all s_i >= 1."""
    indices = tuple(indices)
    if any((not isinstance(s, int)) or s < 1 for s in indices):
        raise ValueError("bracket indices must be integers >= 1")
    return _zq_series(_bracket_numerator, indices, order)


def z_series(indices, order):
    """The multiple q-zeta value Z(s1,...,sl) to the given order; all s_i >= 2."""
    indices = tuple(indices)
    if any((not isinstance(s, int)) or s < 2 for s in indices):
        raise ValueError("multiple q-zeta indices must be >= 2")
    return _zq_series(_zeta_numerator, indices, order)


# -- Bernoulli numbers and Eisenstein series --------------------------------


@lru_cache(maxsize=None)
def _bernoulli_list(n):
    """B_0..B_n from inverting the exponential generating series of (e^t-1)/t."""
    # f = (e^t - 1)/t has coefficients 1/(k+1)!; g = 1/f gives B_k = k! g_k
    f = [Fraction(1, factorial(k + 1)) for k in range(n + 1)]
    g = [ONE] + [ZERO] * n
    for k in range(1, n + 1):
        g[k] = -sum(f[j] * g[k - j] for j in range(1, k + 1))
    return tuple(factorial(k) * g[k] for k in range(n + 1))


def bernoulli(i):
    """B_i with the t/(e^t - 1) convention: B_0 = 1, B_1 = -1/2."""
    if i < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    return _bernoulli_list(i)[i]


def eisenstein(weight, order):
    """Weight-2k Eisenstein series G_2k(q) with exact rational normalization.

    Constant term -B_2k/(4k*(2k-1)!); the q^n coefficient is
    sigma_{2k-1}(n)/(2k-1)!.
    """
    if weight < 2 or weight % 2:
        raise ValueError("Eisenstein weight must be a positive even integer")
    k2 = weight  # 2k
    fact = Fraction(1, factorial(k2 - 1))
    coeffs = [-bernoulli(k2) / (2 * k2) * fact]
    sigma = [ZERO] * (order + 1)
    for d in range(1, order + 1):
        dd = Fraction(d ** (k2 - 1))
        for n in range(d, order + 1, d):
            sigma[n] += dd
    coeffs += [sigma[n] * fact for n in range(1, order + 1)]
    return QSeries(coeffs, order=order)


# -- generic nested sums ----------------------------------------------------


class LinearForm:
    """Integer linear form c . n + const over the sum's index tuple."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs, const=0):
        self.coeffs = tuple(int(c) for c in coeffs)
        self.const = int(const)

    def __call__(self, values):
        return sum(c * v for c, v in zip(self.coeffs, values) if c) + self.const

    def partial(self, values, upto):
        """Value of the fixed part, indices < upto."""
        return sum(self.coeffs[i] * values[i] for i in range(upto) if self.coeffs[i]) + self.const

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if c]

    def __repr__(self):
        return f"LinearForm({self.coeffs}, {self.const})"


class IndexPoly:
    """Polynomial in the summation indices with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        # terms: iterable of (coeff, exponent tuple)
        self.terms = tuple((as_fraction(c), tuple(e)) for c, e in terms)

    @staticmethod
    def const(c, nindices):
        return IndexPoly([(c, (0,) * nindices)])

    def __call__(self, values):
        total = ZERO
        for c, exps in self.terms:
            v = c
            for x, e in zip(values, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    def support(self):
        out = set()
        for _, exps in self.terms:
            out.update(i for i, e in enumerate(exps) if e)
        return sorted(out)


class SumFactor:
    """One Lambert-type factor: poly(n) * q^num(n) / (1 - q^den(n))^power."""

    __slots__ = ("poly", "num", "den", "power")

    def __init__(self, num, den, power=1, poly=None):
        self.num = num
        self.den = den
        self.power = int(power)
        self.poly = poly
        if self.power < 1:
            raise ValueError("denominator power must be positive")

    def support(self):
        out = set(self.num.support()) | set(self.den.support())
        if self.poly is not None:
            out.update(self.poly.support())
        return out


class SumTerm:
    """A scaled product of factors; a named sum may combine several."""

    __slots__ = ("scale", "factors")

    def __init__(self, factors, scale=ONE):
        self.factors = tuple(factors)
        self.scale = as_fraction(scale)


class NestedSumSpec:
    """A multi-index Lambert-type sum.

    constraint is one of:
      "free"                      -- all indices independent, >= 1
      "chain"                     -- n_0 > n_1 > ... > n_{k-1} >= 1
      ("equal_sum", A, B)         -- indices >= 1 with sum over A == sum over B
    """

    def __init__(self, nindices, constraint, terms, scale=ONE):
        self.nindices = int(nindices)
        self.constraint = constraint
        self.terms = tuple(terms)
        self.scale = as_fraction(scale)
        self._check_termination()

    def _total_exponent(self, term):
        coeffs = [0] * self.nindices
        const = 0
        for f in term.factors:
            for i, c in enumerate(f.num.coeffs):
                coeffs[i] += c
            const += f.num.const
        return LinearForm(coeffs, const)

    def _check_termination(self):
        for term in self.terms:
            total = self._total_exponent(term)
            if any(c < 0 for c in total.coeffs):
                raise ValueError("total numerator exponent must have nonnegative coefficients")
            bounded = [False] * self.nindices
            if self.constraint == "free":
                order = range(self.nindices)
                for i in order:
                    if total.coeffs[i] > 0:
                        bounded[i] = True
            elif self.constraint == "chain":
                seen_bounded = False
                for i in range(self.nindices):
                    if total.coeffs[i] > 0 or seen_bounded:
                        bounded[i] = True
                        seen_bounded = True
            else:
                mode, group_a, group_b = self.constraint
                if mode != "equal_sum":
                    raise ValueError(f"unknown constraint {self.constraint!r}")
                for i in group_a:
                    if total.coeffs[i] > 0:
                        bounded[i] = True
                if all(bounded[i] for i in group_a):
                    for i in group_b:
                        bounded[i] = True
            for i in range(self.nindices):
                if not bounded[i]:
                    raise ValueError(
                        f"nested sum does not terminate: index {i} is unbounded")


@lru_cache(maxsize=None)
def _cached_lambert(num, den, power, order):
    return lambert_term(num, den, power, order=order)


def _factor_series(factor, values, order):
    num = factor.num(values)
    den = factor.den(values)
    if den <= 0:
        raise ValueError("denominator form must be positive on the index cone")
    if num > order:
        return None
    s = _cached_lambert(num, den, factor.power, order)
    if factor.poly is not None:
        c = factor.poly(values)
        if not c:
            return QSeries.zero(order)
        s = s.scale(c)
    return s


def _eval_term(spec, term, order):
    """Enumerate admissible index tuples for one term, with subtree memoization.

    Levels fix indices left to right; a subtree's value only depends on the
    fixed values that remaining factors or constraints actually reference,
    so equal-sum splittings collapse to one evaluation per shared sum.
    """
    k = spec.nindices
    total = spec._total_exponent(term)
    mode = spec.constraint
    if isinstance(mode, tuple):
        _, group_a, group_b = mode
        group_a, group_b = list(group_a), list(group_b)
        level_order = group_a + group_b
        if sorted(level_order) != list(range(k)):
            raise ValueError("equal_sum groups must partition the index set")
    else:
        level_order = list(range(k))

    # factors become "complete" at the level where their last index is fixed
    level_of = {idx: d for d, idx in enumerate(level_order)}
    completes = [[] for _ in range(k)]
    for f in term.factors:
        sup = f.support()
        d = max(level_of[i] for i in sup) if sup else 0
        completes[d].append(f)

    # which earlier indices each level's subtree still references
    relevant = [set() for _ in range(k + 1)]
    for d in range(k - 1, -1, -1):
        rel = set(relevant[d + 1])
        for f in completes[d]:
            rel.update(f.support())
        rel.discard(level_order[d])
        relevant[d] = rel

    memo = {}
    values = [0] * k

    def min_future(d):
        # remaining indices each >= 1 (chain handled by pruning at assignment)
        return sum(total.coeffs[level_order[e]] for e in range(d, k))

    def subtree(d, spent):
        if d == k:
            return QSeries.one(order)
        idx = level_order[d]
        key_vals = tuple(values[i] for i in sorted(relevant[d]))
        if isinstance(mode, tuple) and idx in group_b:
            key_extra = (sum(values[i] for i in group_a)
                         - sum(values[level_order[e]] for e in range(len(group_a), d)))
        elif mode == "chain":
            key_extra = values[level_order[d - 1]] if d > 0 else None
        else:
            key_extra = None
        key = (d, spent, key_vals, key_extra)
        hit = memo.get(key)
        if hit is not None:
            return hit

        acc = QSeries.zero(order)
        c_idx = total.coeffs[idx]

        if isinstance(mode, tuple) and idx in group_b:
            remaining = key_extra
            later_b = [i for i in group_b if level_of[i] > d]
            if later_b:
                lo, hi = 1, remaining - len(later_b)
            else:
                lo = hi = remaining  # forced
            candidates = range(lo, hi + 1)
        else:
            if mode == "chain":
                upper = values[level_order[d - 1]] - 1 if d > 0 else None
            else:
                upper = None
            if c_idx > 0:
                room = order - spent - min_future(d + 1)
                bound = room // c_idx
                if upper is not None:
                    bound = min(bound, upper)
            else:
                if upper is None:
                    raise AssertionError("termination check should have rejected this")
                bound = upper
            lo = 1
            if mode == "chain":
                lo = k - d  # leave room for the strictly smaller tail
            candidates = range(lo, bound + 1)

        for n in candidates:
            if n < 1:
                continue
            values[idx] = n
            cost = c_idx * n
            if spent + cost + min_future(d + 1) > order:
                if c_idx > 0:
                    break
                continue
            prefix = None
            dead = False
            for f in completes[d]:
                s = _factor_series(f, values, order)
                if s is None:
                    dead = True
                    break
                prefix = s if prefix is None else prefix * s
            if dead:
                continue
            sub = subtree(d + 1, spent + cost)
            acc = acc + (sub if prefix is None else prefix * sub)
        values[idx] = 0
        memo[key] = acc
        return acc

    return subtree(0, 0).scale(term.scale)


def eval_nested_sum(spec, order):
    """Exact truncated value of the sum over all admissible index tuples."""
    out = QSeries.zero(order)
    for term in spec.terms:
        out = out + _eval_term(spec, term, order)
    return out.scale(spec.scale)


# -- named catalog ----------------------------------------------------------


def _lf(coeffs, const=0):
    return LinearForm(coeffs, const)


def builtin_sums():
    """Named NestedSumSpec catalog for the displayed multi-sums.

    h11_0 / h11_2 / h11_4 are the three components of the equivariant
    two-point function; thm_sum1..3 are the explicit sums multiplying the
    canonical-divisor square in the surface two-point theorem.
    """
    catalog = {}

    # h11_0 = sum_{i,j>0} ij(i+j) q^(i+j) / ((1-q^i)(1-q^j)(1-q^(i+j)))
    catalog["h11_0"] = NestedSumSpec(
        2, "free",
        [SumTerm([
            SumFactor(_lf([1, 1]), _lf([1, 0]),
                      poly=IndexPoly([(1, (2, 1)), (1, (1, 2))])),
            SumFactor(_lf([0, 0]), _lf([0, 1])),
            SumFactor(_lf([0, 0]), _lf([1, 1])),
        ])])

    # h11_2 = -sum j(i+j)(q^(i+j)+q^(2i+j)) / ((1-q^i)^2 (1-q^j)(1-q^(i+j)))
    #         - (1/2) sum ij (q^(i+j)+q^(2i+2j)) / ((1-q^i)(1-q^j)(1-q^(i+j))^2)
    poly_j_ipj = IndexPoly([(1, (1, 1)), (1, (0, 2))])
    poly_ij = IndexPoly([(1, (1, 1))])
    catalog["h11_2"] = NestedSumSpec(
        2, "free",
        [
            SumTerm([SumFactor(_lf([1, 1]), _lf([1, 0]), 2, poly=poly_j_ipj),
                     SumFactor(_lf([0, 0]), _lf([0, 1])),
                     SumFactor(_lf([0, 0]), _lf([1, 1]))], scale=-1),
            SumTerm([SumFactor(_lf([2, 1]), _lf([1, 0]), 2, poly=poly_j_ipj),
                     SumFactor(_lf([0, 0]), _lf([0, 1])),
                     SumFactor(_lf([0, 0]), _lf([1, 1]))], scale=-1),
            SumTerm([SumFactor(_lf([1, 1]), _lf([1, 0]), poly=poly_ij),
                     SumFactor(_lf([0, 0]), _lf([0, 1])),
                     SumFactor(_lf([0, 0]), _lf([1, 1]), 2)], scale=Fraction(-1, 2)),
            SumTerm([SumFactor(_lf([2, 2]), _lf([1, 0]), poly=poly_ij),
                     SumFactor(_lf([0, 0]), _lf([0, 1])),
                     SumFactor(_lf([0, 0]), _lf([1, 1]), 2)], scale=Fraction(-1, 2)),
        ])

    # h11_4: (1/4) sum_{i+j=k+l} (i+j) q^(i+j)(1+q^(i+j)) / (...)
    #        - sum_{i,j,k} (i+j) q^(i+j+k)(1+q^(i+j)) / (...)
    #        + sum_{i,j,k} k q^(i+j+k)(1+q^k) / (...)
    poly_ipj4 = IndexPoly([(1, (1, 0, 0, 0)), (1, (0, 1, 0, 0))])
    poly_ipj3 = IndexPoly([(1, (1, 0, 0)), (1, (0, 1, 0))])
    poly_k3 = IndexPoly([(1, (0, 0, 1))])

    def quad(numshift):
        return SumTerm([
            SumFactor(_lf([1, 1, 0, 0], numshift), _lf([1, 1, 0, 0]), poly=poly_ipj4),
            SumFactor(_lf([0, 0, 0, 0]), _lf([1, 0, 0, 0])),
            SumFactor(_lf([0, 0, 0, 0]), _lf([0, 1, 0, 0])),
            SumFactor(_lf([0, 0, 0, 0]), _lf([0, 0, 1, 0])),
            SumFactor(_lf([0, 0, 0, 0]), _lf([0, 0, 0, 1])),
        ], scale=Fraction(1, 4))

    h4_terms = [
        NestedSumSpec(4, ("equal_sum", (0, 1), (2, 3)), [
            SumTerm([SumFactor(_lf([1, 1, 0, 0]), _lf([1, 1, 0, 0]), poly=poly_ipj4),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([1, 0, 0, 0])),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([0, 1, 0, 0])),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([0, 0, 1, 0])),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([0, 0, 0, 1]))],
                    scale=Fraction(1, 4)),
            SumTerm([SumFactor(_lf([2, 2, 0, 0]), _lf([1, 1, 0, 0]), poly=poly_ipj4),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([1, 0, 0, 0])),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([0, 1, 0, 0])),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([0, 0, 1, 0])),
                     SumFactor(_lf([0, 0, 0, 0]), _lf([0, 0, 0, 1]))],
                    scale=Fraction(1, 4)),
        ]),
        NestedSumSpec(3, "free", [
            SumTerm([SumFactor(_lf([1, 1, 1]), _lf([1, 1, 0]), poly=poly_ipj3),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 0, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 0, 1])),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 1, 1]))], scale=-1),
            SumTerm([SumFactor(_lf([2, 2, 1]), _lf([1, 1, 0]), poly=poly_ipj3),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 0, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 0, 1])),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 1, 1]))], scale=-1),
        ]),
        NestedSumSpec(3, "free", [
            SumTerm([SumFactor(_lf([1, 1, 1]), _lf([0, 0, 1]), poly=poly_k3),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 0, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 0, 1])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 1]))]),
            SumTerm([SumFactor(_lf([1, 1, 2]), _lf([0, 0, 1]), poly=poly_k3),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 0, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([1, 0, 1])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 1]))]),
        ]),
    ]
    catalog["h11_4"] = h4_terms  # combined below; see eval_named

    # thm_sum1 = sum_{n>m>0} q^n(1+q^n)/(1-q^n)^3 * (n - nm + m^2)/(1-q^m)
    poly_nm = IndexPoly([(1, (1, 0)), (-1, (1, 1)), (1, (0, 2))])
    catalog["thm_sum1"] = NestedSumSpec(
        2, "chain",
        [
            SumTerm([SumFactor(_lf([1, 0]), _lf([1, 0]), 3, poly=poly_nm),
                     SumFactor(_lf([0, 0]), _lf([0, 1]))]),
            SumTerm([SumFactor(_lf([2, 0]), _lf([1, 0]), 3, poly=poly_nm),
                     SumFactor(_lf([0, 0]), _lf([0, 1]))]),
        ])

    # thm_sum2 = 2 sum_{n>m>l>0} n q^n(1+q^n)/(1-q^n)^3 / ((1-q^m)(1-q^l))
    poly_n = IndexPoly([(1, (1, 0, 0))])
    catalog["thm_sum2"] = NestedSumSpec(
        3, "chain",
        [
            SumTerm([SumFactor(_lf([1, 0, 0]), _lf([1, 0, 0]), 3, poly=poly_n),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 0, 1]))], scale=2),
            SumTerm([SumFactor(_lf([2, 0, 0]), _lf([1, 0, 0]), 3, poly=poly_n),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 1, 0])),
                     SumFactor(_lf([0, 0, 0]), _lf([0, 0, 1]))], scale=2),
        ])

    # thm_sum3 = 2 sum_{n>m>l>0} q^n/(1-q^n)^2 * m q^m/(1-q^m)^2 / (1-q^l)
    poly_m = IndexPoly([(1, (0, 1, 0))])
    catalog["thm_sum3"] = NestedSumSpec(
        3, "chain",
        [SumTerm([SumFactor(_lf([1, 0, 0]), _lf([1, 0, 0]), 2),
                  SumFactor(_lf([0, 1, 0]), _lf([0, 1, 0]), 2, poly=poly_m),
                  SumFactor(_lf([0, 0, 0]), _lf([0, 0, 1]))], scale=2)])

    return catalog


def eval_named(name, order):
    """Evaluate a catalog sum by key."""
    catalog = builtin_sums()
    if name not in catalog:
        raise KeyError(f"unknown named sum {name!r}; known: {sorted(catalog)}")
    entry = catalog[name]
    if isinstance(entry, list):
        out = QSeries.zero(order)
        for spec in entry:
            out = out + eval_nested_sum(spec, order)
        return out
    return eval_nested_sum(entry, order)
