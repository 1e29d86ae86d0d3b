"""Heisenberg operators and exact trace engines over Hilbert-scheme Fock spaces.

Two settings share the recursion skeleton but are kept distinct because their
commutation conventions differ by a sign:

* surface setting: grouped operators a_lambda(alpha) decorated by classes in a
  symbolic surface cohomology model, [a_m(x), a_n(y)] = -m delta_{m,-n} <x,y>;
* equivariant scalar setting: undecorated operators on the partition Fock
  space, [a_m, a_n] = +m delta_{m,-n}.

All trace values are REDUCED: the global Euler-product factor is divided out,
so the empty word traces to 1.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb, factorial

from .ring import MPolyRing, ONE, QSeries, ZERO, lambert_term


# -- generalized partitions --------------------------------------------------


class GenPartition:
    """Multiset of nonzero integer parts with multiplicities."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(sorted(parts))
        if any(p == 0 for p in parts):
            raise ValueError("parts must be nonzero integers")
        self.parts = parts

    def multiplicities(self):
        return Counter(self.parts)

    @property
    def length(self):
        return len(self.parts)

    @property
    def weight(self):
        """Signed size: sum of the parts."""
        return sum(self.parts)

    @property
    def square_sum(self):
        return sum(p * p for p in self.parts)

    @property
    def symmetry_factorial(self):
        """Product of the multiplicity factorials."""
        out = 1
        for m in self.multiplicities().values():
            out *= factorial(m)
        return out

    def __le__(self, other):
        mine, theirs = self.multiplicities(), other.multiplicities()
        return all(theirs.get(p, 0) >= m for p, m in mine.items())

    def __sub__(self, other):
        if not other <= self:
            raise ValueError("subtraction needs componentwise containment")
        mults = self.multiplicities()
        for p, m in other.multiplicities().items():
            mults[p] -= m
        return GenPartition([p for p, m in mults.items() for _ in range(m)])

    def __eq__(self, other):
        return isinstance(other, GenPartition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"GenPartition{self.parts}"


# -- surface cohomology model -------------------------------------------------


def _pair_symbol(d1, d2):
    a, b = sorted((d1, d2))
    return "K2" if (a, b) == ("K", "K") else a + b


class SurfaceModel:
    """Symbolic even cohomology of a surface: 1, divisors, point class.

    Pairings between degree-2 basis classes are formal symbols; the Euler
    class integrates to chi (a symbol unless an integer value is fixed).
    With K numerically trivial every pairing involving K is zero.
    """

    def __init__(self, divisors=("K", "L1", "L2"), chi=None, K_trivial=False):
        self.divisors = tuple(divisors)
        if "K" not in self.divisors:
            raise ValueError("the surface model needs a canonical divisor K")
        symbols = ["chi"]
        for i, d1 in enumerate(self.divisors):
            for d2 in self.divisors[i:]:
                symbols.append(_pair_symbol(d1, d2))
        self.ring = MPolyRing(symbols)
        self.chi_value = chi
        self.K_trivial = bool(K_trivial)
        self.chi = self.ring.const(chi) if chi is not None else self.ring.gen("chi")
        self._engines = {}

    def pairing_symbol(self, d1, d2):
        if self.K_trivial and ("K" in (d1, d2)):
            return self.ring.zero
        return self.ring.gen(_pair_symbol(d1, d2))

    # -- classes ---------------------------------------------------------

    def zero_class(self):
        z = self.ring.zero
        return CohClass(self, z, {}, z)

    def one(self):
        return CohClass(self, self.ring.one, {}, self.ring.zero)

    def divisor(self, name):
        if name not in self.divisors:
            raise ValueError(f"unknown divisor {name!r}")
        return CohClass(self, self.ring.zero, {name: self.ring.one}, self.ring.zero)

    def canonical(self):
        return self.divisor("K")

    def point(self):
        return CohClass(self, self.ring.zero, {}, self.ring.one)

    def euler(self):
        """Euler class: chi times the point class."""
        return CohClass(self, self.ring.zero, {}, self.chi)

    def one_minus_K(self):
        return self.one() - self.canonical()

    def class_by_name(self, name):
        table = {"1X": self.one, "e": self.euler, "pt": self.point}
        if name in table:
            return table[name]()
        return self.divisor(name)

    def engine(self, order):
        eng = self._engines.get(order)
        if eng is None:
            eng = SurfaceTraceEngine(self, order)
            self._engines[order] = eng
        return eng


class CohClass:
    """Inhomogeneous even cohomology class on the surface model."""

    __slots__ = ("surface", "deg0", "deg2", "deg4")

    def __init__(self, surface, deg0, deg2, deg4):
        self.surface = surface
        self.deg0 = deg0
        self.deg2 = {d: c for d, c in deg2.items() if not c.is_zero()}
        self.deg4 = deg4

    def is_zero(self):
        return self.deg0.is_zero() and not self.deg2 and self.deg4.is_zero()

    def __add__(self, other):
        deg2 = dict(self.deg2)
        for d, c in other.deg2.items():
            deg2[d] = deg2.get(d, self.surface.ring.zero) + c
        return CohClass(self.surface, self.deg0 + other.deg0, deg2,
                        self.deg4 + other.deg4)

    def __neg__(self):
        return CohClass(self.surface, -self.deg0,
                        {d: -c for d, c in self.deg2.items()}, -self.deg4)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.surface.ring.coerce(c)
        return CohClass(self.surface, self.deg0 * c,
                        {d: v * c for d, v in self.deg2.items()}, self.deg4 * c)

    def __mul__(self, other):
        if not isinstance(other, CohClass):
            return self.scale(other)
        s = self.surface
        deg0 = self.deg0 * other.deg0
        deg2 = {}
        for d, c in other.deg2.items():
            deg2[d] = self.deg0 * c
        for d, c in self.deg2.items():
            deg2[d] = deg2.get(d, s.ring.zero) + other.deg0 * c
        deg4 = self.deg0 * other.deg4 + other.deg0 * self.deg4
        for d1, c1 in self.deg2.items():
            for d2, c2 in other.deg2.items():
                deg4 = deg4 + c1 * c2 * s.pairing_symbol(d1, d2)
        return CohClass(s, deg0, deg2, deg4)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("class powers must be nonnegative integers")
        out = self.surface.one()
        for _ in range(n):
            out = out * self
        return out

    def integral(self):
        """Pushforward to the point: the degree-4 coefficient."""
        return self.deg4

    def pair(self, other):
        return (self * other).integral()

    def homogeneous_parts(self):
        """Nonzero (degree, class) components."""
        s = self.surface
        out = []
        if not self.deg0.is_zero():
            out.append((0, CohClass(s, self.deg0, {}, s.ring.zero)))
        if self.deg2:
            out.append((2, CohClass(s, s.ring.zero, self.deg2, s.ring.zero)))
        if not self.deg4.is_zero():
            out.append((4, CohClass(s, s.ring.zero, {}, self.deg4)))
        return out

    def key(self):
        return (self.deg0.key(),
                tuple(sorted((d, c.key()) for d, c in self.deg2.items())),
                self.deg4.key())

    def __eq__(self, other):
        return isinstance(other, CohClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        bits = []
        if not self.deg0.is_zero():
            bits.append(f"({self.deg0})*1X")
        for d, c in sorted(self.deg2.items()):
            bits.append(f"({c})*{d}")
        if not self.deg4.is_zero():
            bits.append(f"({self.deg4})*pt")
        return " + ".join(bits) if bits else "0"


class DecoratedOp:
    """Grouped Heisenberg operator: an ordered tuple of parts with a class.

    The part order is operator order (leftmost acts last); the commutator
    formula produces merged groups whose order matters whenever a part and its
    negative both occur.
    """

    __slots__ = ("parts", "klass")

    def __init__(self, parts, klass):
        self.parts = tuple(parts)
        if any(p == 0 for p in self.parts):
            raise ValueError("the zero mode is not an operator")
        self.klass = klass

    @property
    def weight(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def partition(self):
        return GenPartition(self.parts)

    def key(self):
        return (self.parts, self.klass.key())

    def __repr__(self):
        return f"a{list(self.parts)}({self.klass!r})"


def commutator(left, right):
    """[a_{n...}(alpha), a_{m...}(beta)] as a list of (coeff, DecoratedOp).

    Each matching pair (n_t, m_j) with n_t = -m_j contributes -n_t times the
    merged group (m_1..m_{j-1}, n's without n_t, m_{j+1}..), decorated by the
    class product; the stated factor order is preserved.
    """
    out = []
    klass = None
    for t, nt in enumerate(left.parts):
        for j, mj in enumerate(right.parts):
            if nt == -mj:
                if klass is None:
                    klass = left.klass * right.klass
                    if klass.is_zero():
                        return []
                parts = (right.parts[:j]
                         + tuple(x for u, x in enumerate(left.parts) if u != t)
                         + right.parts[j + 1:])
                out.append((Fraction(-nt), DecoratedOp(parts, klass)))
    return out


@lru_cache(maxsize=None)
def _stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


class SurfaceTraceEngine:
    """Reduced trace of products of grouped operators against q^(number operator).

    The workhorse is the cyclicity recursion: a group of negative total weight
    is moved once around the trace, trading the word for shorter words built
    from commutators, with geometric-series prefactors.  Words in which every
    group has weight zero are diagonal in the Fock basis after degree
    filtering and are evaluated by exact number-operator moments.
    """

    def __init__(self, surface, order):
        self.surface = surface
        self.order = order
        self.ring = surface.ring
        self._memo = {}

    # cached small series ------------------------------------------------

    @lru_cache(maxsize=None)
    def _geom(self, n, shift):
        """q^shift / (1 - q^n), lifted to the surface coefficient ring."""
        return lambert_term(shift, n, 1, order=self.order).lift(self.ring)

    def _zero(self):
        return QSeries.zero(self.order, self.ring)

    def _one(self):
        return QSeries.one(self.order, self.ring)

    # main entry -----------------------------------------------------------

    def trace(self, word):
        """word: sequence of DecoratedOp; returns a reduced QSeries."""
        scalar = self.ring.one
        core = []
        for op in word:
            if op.length == 0:
                scalar = scalar * op.klass.integral()
                if scalar.is_zero():
                    return self._zero()
            else:
                core.append(op)
        return self._trace_core(tuple(core)).scale(scalar)

    def _trace_core(self, word):
        if not word:
            return self._one()
        key = tuple(op.key() for op in word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._evaluate(word)
        self._memo[key] = result
        return result

    def _evaluate(self, word):
        if sum(op.weight for op in word) != 0:
            return self._zero()
        counts = Counter()
        for op in word:
            counts.update(op.parts)
        if any(counts[n] != counts[-n] for n in counts):
            return self._zero()

        i0 = next((i for i, op in enumerate(word) if op.weight < 0), None)
        if i0 is None:
            return self._all_balanced(word)

        n0 = -word[i0].weight
        acc = self._zero()
        total_parts = sum(op.length for op in word)
        for r, op in enumerate(word):
            if r == i0:
                continue
            pre = self._geom(n0, n0) if r > i0 else self._geom(n0, 0)
            for c, merged in commutator(op, word[i0]):
                if r > i0:
                    sub = word[:i0] + word[i0 + 1:r] + (merged,) + word[r + 1:]
                else:
                    sub = word[:r] + (merged,) + word[r + 1:i0] + word[i0 + 1:]
                # termination is structural: every merge drops two parts
                if sum(o.length for o in sub) >= total_parts:
                    raise RuntimeError("trace recursion failed to shrink: "
                                       "malformed word")
                inner = self.trace(sub)
                if not inner.is_zero():
                    acc = acc + (pre * inner).scale(c)
        return acc

    # words whose groups all have weight zero ------------------------------

    def _all_balanced(self, word):
        """Distribute over homogeneous class components and degree-filter.

        A product of groups has nonzero trace only in operator bidegree
        (0, 0); with every group of weight zero and length >= 2 the second
        component 2(length-2) + |class| is a sum of nonnegative terms, so the
        survivors have every group of length 2 with a degree-0 decoration.
        Those act diagonally and are integrated out exactly.
        """
        choices = [op.klass.homogeneous_parts() for op in word]
        acc = self._zero()
        for combo in iproduct(*choices):
            bideg = sum(2 * (op.length - 2) + deg
                        for op, (deg, _) in zip(word, combo))
            if bideg != 0:
                continue
            diag = []
            for op, (deg, part) in zip(word, combo):
                if op.length != 2 or deg != 0 or op.parts[0] != -op.parts[1]:
                    raise AssertionError("unreachable: non-diagonal balanced word")
                diag.append((op.parts, part.deg0))
            acc = acc + self._diagonal(tuple(diag))
        return acc

    def _diagonal(self, diag):
        """Reduced trace of a product of (+-n, -+n) groups with scalar classes."""
        chi = self.surface.chi
        for i, (parts, c) in enumerate(diag):
            if parts[0] > 0:
                # (a_n a_-n)(c 1X) = (a_-n a_n)(c 1X) - n * integral(e * c 1X)
                n = parts[0]
                swapped = diag[:i] + (((-n, n), c),) + diag[i + 1:]
                rest = diag[:i] + diag[i + 1:]
                return (self._diagonal(swapped)
                        - self._diagonal(rest).scale(chi * c * n))
        # canonical groups: (a_-n a_n)(c 1X) = -n c N_n, modes independent
        by_mode = {}
        for (parts, c) in diag:
            n = parts[1]
            by_mode.setdefault(n, []).append(c)
        total = self._one()
        for n, cs in sorted(by_mode.items()):
            k = len(cs)
            scalar = self.ring.one
            for c in cs:
                scalar = scalar * c * Fraction(-n)
            # E[N_n^k] = sum_j S(k, j) chi (chi+1)...(chi+j-1) v^j,
            # v = q^n/(1-q^n)
            moment = self._zero()
            v = self._geom(n, n)
            vpow = self._one()
            rising = self.ring.one
            for j in range(k + 1):
                s = _stirling2(k, j)
                if s:
                    moment = moment + vpow.scale(rising * s)
                vpow = vpow * v
                rising = rising * (chi + Fraction(j))
            total = total * moment.scale(scalar)
        return total


def trace_product(word, surface, order):
    """Reduced Tr q^n of a product of grouped operators (no normalization)."""
    return surface.engine(order).trace(tuple(word))


# -- vertex-operator trace expansion ------------------------------------------


def _group_removals(op, order):
    """Sub-multiset removal options for one group.

    Yields (qcost, balance, removed_positive_count, comb_coeff, sign,
    weight_factors, remainder_parts) where weight_factors is a tuple of
    (n, p, p_tilde) mode removals.
    """
    mults = sorted(Counter(op.parts).items())
    ranges = [range(m + 1) for _, m in mults]
    for choice in iproduct(*ranges):
        qcost = 0
        balance = 0
        npos = 0
        ncount = 0
        coeff = 1
        factors = {}
        remainder = []
        for (part, m), k in zip(mults, choice):
            if k:
                coeff *= comb(m, k)
                ncount += k
                n = abs(part)
                p, pt = factors.get(n, (0, 0))
                if part > 0:
                    qcost += n * k
                    balance += n * k
                    npos += k
                    factors[n] = (p + k, pt)
                else:
                    balance -= n * k
                    factors[n] = (p, pt + k)
            if m - k:
                remainder.extend([part] * (m - k))
        if qcost > order:
            continue
        yield (qcost, balance, npos, ncount, Fraction(coeff),
               tuple(sorted(factors.items())), tuple(sorted(remainder)))


@lru_cache(maxsize=None)
def _removal_series_rational(factors, order):
    """Product over modes of q^(n p)/(1-q^n)^(p + p~), as a rational series."""
    s = QSeries.one(order)
    for n, (p, pt) in factors:
        s = s * lambert_term(n * p, n, p + pt, order=order)
    return s


def vertex_trace(word, surface, order):
    """Reduced trace of the Ext vertex operator against a grouped-operator word.

    Expands Tr q^n W(z) prod_i a_{lambda_i}(alpha_i) as a sum over sub-group
    removals: positive parts contracted into the vertex contribute
    (-1)^p C(m,p) q^(np)/(1-q^n)^p each, negative parts C(m~,p~)/(1-q^n)^p~,
    the class of group i picks up (1 - K)^(removed positives), and the
    leftover groups are traced by the recursion engine.  Words whose total
    weight is nonzero vanish after extracting the z^0 coefficient.

    Groups here are generalized partitions: parts are read as multisets and
    leftovers are kept in canonical (sorted) order.
    """
    word = tuple(word)
    if sum(op.weight for op in word) != 0:
        return QSeries.zero(order, surface.ring)
    engine = surface.engine(order)
    options = [list(_group_removals(op, order)) for op in word]
    one_minus_k = surface.one_minus_K()
    twist_cache = {}

    def twisted(op, npos):
        if npos == 0:
            return op.klass
        key = (op.klass.key(), npos)
        got = twist_cache.get(key)
        if got is None:
            got = (one_minus_k ** npos) * op.klass
            twist_cache[key] = got
        return got

    acc = QSeries.zero(order, surface.ring)

    def walk(i, qcost, balance, chosen):
        nonlocal acc
        if qcost > order:
            return
        if i == len(word):
            if balance != 0:
                return
            sign = 1
            coeff = Fraction(1)
            weight = QSeries.one(order)
            inner_word = []
            for op, (qc, bal, npos, ncount, cmb, factors, rem) in zip(word, chosen):
                sign *= (-1) ** npos
                coeff *= cmb
                if factors:
                    weight = weight * _removal_series_rational(factors, order)
                inner_word.append(DecoratedOp(rem, twisted(op, npos)))
            inner = engine.trace(inner_word)
            if inner.is_zero():
                return
            acc = acc + (weight.lift(surface.ring) * inner).scale(coeff * sign)
            return
        for opt in options[i]:
            walk(i + 1, qcost + opt[0], balance + opt[1], chosen + (opt,))

    walk(0, 0, 0, ())
    return acc


# -- Chern character operators (surface) ---------------------------------------


def _length3_zero_partitions(bound):
    """Canonical 3-part generalized partitions of 0 with parts bounded by size."""
    out = []
    for i in range(1, bound + 1):
        for j in range(i, bound + 1):
            if i + j > bound:
                break
            sym = 2 if i == j else 1
            out.append(((-i - j, i, j), sym))
            out.append(((-j, -i, i + j), sym))
    return out


def chern_op(k, klass, surface, order):
    """Formal Heisenberg expansion of the k-th Chern character operator.

    Returns a list of (rational coefficient, DecoratedOp); parts are bounded
    by the truncation order, which cannot affect coefficients up to q^order.
    Only k = 0 and k = 1 are available: the general expansion has universal
    constants that are not pinned down.
    """
    if k == 0:
        return [(Fraction(-1), DecoratedOp((-m, m), klass))
                for m in range(1, order + 1)]
    if k == 1:
        terms = [(Fraction(-1, sym), DecoratedOp(parts, klass))
                 for parts, sym in _length3_zero_partitions(order)]
        k_klass = surface.canonical() * klass
        if not k_klass.is_zero():
            terms += [(Fraction(1 - n, 2), DecoratedOp((-n, n), k_klass))
                      for n in range(1, order + 1)]
        return terms
    raise ValueError("only k in {0, 1} is supported on a general surface")


# -- equivariant scalar setting -----------------------------------------------


class EquivTraceEngine:
    """Reduced scalar traces; words are flat tuples of nonzero parts."""

    def __init__(self, order):
        self.order = order
        self._memo = {}

    @lru_cache(maxsize=None)
    def _geom(self, n, shift):
        return lambert_term(shift, n, 1, order=self.order)

    def trace(self, parts):
        parts = tuple(parts)
        if not parts:
            return QSeries.one(self.order)
        hit = self._memo.get(parts)
        if hit is not None:
            return hit
        result = self._evaluate(parts)
        self._memo[parts] = result
        return result

    def _evaluate(self, parts):
        if sum(parts) != 0:
            return QSeries.zero(self.order)
        counts = Counter(parts)
        if any(counts[n] != counts[-n] for n in counts):
            return QSeries.zero(self.order)
        i0 = next(i for i, p in enumerate(parts) if p < 0)
        n0 = -parts[i0]
        acc = QSeries.zero(self.order)
        for r, p in enumerate(parts):
            if r == i0 or p != n0:
                continue
            # [a_{n0}, a_{-n0}] = n0
            pre = self._geom(n0, n0) if r > i0 else self._geom(n0, 0)
            if r > i0:
                sub = parts[:i0] + parts[i0 + 1:r] + parts[r + 1:]
            else:
                sub = parts[:r] + parts[r + 1:i0] + parts[i0 + 1:]
            acc = acc + (pre * self.trace(sub)).scale(n0)
        return acc


@lru_cache(maxsize=None)
def _equiv_engine(order):
    return EquivTraceEngine(order)


def equiv_trace(parts, order):
    """Reduced Tr q^n of a product of scalar Heisenberg operators."""
    return _equiv_engine(order).trace(tuple(parts))


@lru_cache(maxsize=None)
def _partitions_of(n, maxpart):
    if n == 0:
        return ((),)
    out = []
    for p in range(min(n, maxpart), 0, -1):
        for rest in _partitions_of(n - p, p):
            out.append((p,) + rest)
    return tuple(out)


def all_partition_states(order):
    out = []
    for size in range(order + 1):
        out.extend(_partitions_of(size, size))
    return out


def fock_trace_bruteforce(parts, order):
    """Unreduced Tr q^n over the partition basis; the independent oracle.

    Basis states are ordinary partitions; a_{-m} appends a part m with
    coefficient 1 and a_m removes a part m with coefficient m times its
    multiplicity.  The word applies right to left, and a state contributes
    q^size exactly when the deterministic walk returns to it.
    """
    coeffs = [ZERO] * (order + 1)
    rev = tuple(reversed(parts))
    for state in all_partition_states(order):
        size = sum(state)
        current = list(state)
        factor = 1
        dead = False
        for p in rev:
            if p < 0:
                current.append(-p)
            else:
                mult = current.count(p)
                if not mult:
                    dead = True
                    break
                factor *= p * mult
                current.remove(p)
        if dead or len(current) != len(state) or sorted(current) != sorted(state):
            continue
        coeffs[size] += factor
    return QSeries(coeffs, order=order)


# -- equivariant Chern character operators -------------------------------------


def _zseries_mul(a, b, order):
    out = [ZERO] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(order + 1 - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _zseries_inv(a, order):
    if a[0] == 0:
        raise ZeroDivisionError("unit constant term required")
    inv0 = 1 / a[0]
    out = [inv0] + [ZERO] * order
    for n in range(1, order + 1):
        s = ZERO
        for k in range(1, n + 1):
            if a[k]:
                s += a[k] * out[n - k]
        out[n] = -s * inv0
    return out


def _g_series(n, order):
    """(e^(n z) - 1)/(n z) expanded to the given z-order."""
    return [Fraction(n ** j, factorial(j + 1)) for j in range(order + 1)]


@lru_cache(maxsize=None)
def equiv_chern_coefficient(parts, k):
    """z^k coefficient attached to a_lambda in the equivariant expansion.

    For lambda with m_{-n} creations and m_n annihilations this is the
    z^(k - length + 2) coefficient of
    prod g(nz)^{m_{-n}} * prod g(-nz)^{m_n} / (g(z) g(-z)),
    with g(w) = (e^w - 1)/w; the prefactor z^(length - 2) comes from each
    factor contributing one power of z against the double pole.
    """
    parts = tuple(sorted(parts))
    d = k - len(parts) + 2
    if d < 0:
        return ZERO
    num = [ONE] + [ZERO] * d
    for p in parts:
        # creation part -n contributes g(nz), annihilation part n gives g(-nz)
        num = _zseries_mul(num, _g_series(-p, d), d)
    den = _zseries_mul(_g_series(1, d), _g_series(-1, d), d)
    return _zseries_mul(num, _zseries_inv(den, d), d)[d]


def _zero_weight_partitions(max_length, bound):
    """Canonical generalized partitions of 0 with length <= max_length, parts <= bound."""
    out = [()]

    def extend(prefix, length, weight):
        if length and weight == 0:
            out.append(tuple(prefix))
        if length == max_length:
            return
        start = prefix[-1] if prefix else -bound
        for p in range(start, bound + 1):
            if p == 0:
                continue
            # need the remaining parts (each <= bound) to cancel the weight
            remaining = max_length - length - 1
            if weight + p > remaining * bound or weight + p < -remaining * bound:
                continue
            prefix.append(p)
            extend(prefix, length + 1, weight + p)
            prefix.pop()

    extend([], 0, 0)
    return sorted(set(out), key=lambda t: (len(t), t))


def equiv_chern_op(k, order):
    """Equivariant Chern character operator as [(coefficient, parts)].

    Coefficients fold in 1/lambda^!; parts tuples are canonical (sorted).
    """
    if k < 0:
        raise ValueError("the operator index must be nonnegative")
    out = []
    for parts in _zero_weight_partitions(k + 2, order):
        c = equiv_chern_coefficient(parts, k)
        if c:
            sym = GenPartition(parts).symmetry_factorial if parts else 1
            out.append((c / sym, parts))
    return out


# -- Gamma-conjugated traces ----------------------------------------------------


def gamma_trace(m, word, order):
    """Reduced trace against the level-m pair of half vertex operators.

    word is a sequence of canonical part tuples (grouped, unnormalized).
    Expands Tr q^n Gamma_-(z)^m Gamma_+(z)^{-m} prod a_lambda by sub-group
    removals: positive parts removed into the Gammas weigh
    C(mult,p) q^(np)/(1-q^n)^p, negative parts (-1)^p~ C(mult~,p~)/(1-q^n)^p~,
    each removal carries a factor m, and the remainder traces are scalar.
    The result is divided by the empty-word value, so gamma_trace(m, ()) = 1.
    """
    word = tuple(tuple(p) for p in word)
    engine = _equiv_engine(order)
    options = [list(_group_removals(DecoratedOp(parts, None), order))
               for parts in word]
    acc = QSeries.zero(order)

    def walk(i, qcost, balance, chosen):
        nonlocal acc
        if qcost > order:
            return
        if i == len(word):
            if balance != 0:
                return
            coeff = Fraction(1)
            mpow = 0
            weight = QSeries.one(order)
            flat = []
            for (qc, bal, npos, ncount, cmb, factors, rem) in chosen:
                coeff *= cmb
                mpow += ncount
                nneg = ncount - npos
                coeff *= (-1) ** nneg
                if factors:
                    weight = weight * _removal_series_rational(factors, order)
                flat.extend(rem)
            if m == 0 and mpow:
                return
            inner = engine.trace(tuple(flat))
            if inner.is_zero():
                return
            acc = acc + (weight * inner).scale(coeff * Fraction(m) ** mpow)
            return
        for opt in options[i]:
            walk(i + 1, qcost + opt[0], balance + opt[1], chosen + (opt,))

    walk(0, 0, 0, ())
    return acc


# -- half vertex operator commutation, checked on the Fock basis ----------------


def _mat_apply(vec, op):
    """vec: {state: {(a, b): coeff}} with monomials y^a x^(-b); op maps a state
    to [(state', (da, db), coeff)]."""
    out = {}
    for state, poly in vec.items():
        for state2, (da, db), c in op(state):
            tgt = out.setdefault(state2, {})
            for (a, b), v in poly.items():
                key = (a + da, b + db)
                tgt[key] = tgt.get(key, ZERO) + v * c
    for state, poly in list(out.items()):
        for key, v in list(poly.items()):
            if not v:
                del poly[key]
        if not poly:
            del out[state]
    return out


def _gamma_minus_op(scale, order):
    """Gamma_-(scale, y): add a multiset of parts, coefficient prod scale^k y^(n k)/(n^k k!)."""
    def op(state):
        out = []
        budget = order - sum(state)

        def rec(minpart, left, mult, added):
            out.append((tuple(sorted(state + tuple(added))), (sum(added), 0), mult))
            for n in range(minpart, left + 1):
                c = mult
                for k in range(1, left // n + 1):
                    c = c * Fraction(scale, n) / k
                    rec(n + 1, left - n * k, c, added + [n] * k)

        rec(1, budget, ONE, [])
        return out

    return op


def _gamma_plus_op(scale, order, sign=-1):
    """Gamma_+(scale, x): remove multisets; a_n removes a part with factor sign*n*mult."""
    def op(state):
        mults = sorted(Counter(state).items())
        out = []

        def rec(idx, mult, removed, newmults):
            if idx == len(mults):
                if removed:
                    parts = []
                    for p, k in newmults:
                        parts.extend([p] * k)
                    out.append((tuple(sorted(parts)), (0, removed), mult))
                else:
                    out.append((state, (0, 0), mult))
                return
            p, m = mults[idx]
            for k in range(m + 1):
                # (scale/p)^k / k! * (sign*p)^k * m!/(m-k)! = scale^k sign^k C(m,k)
                c = mult * Fraction(scale * sign) ** k * comb(m, k)
                rec(idx + 1, c, removed + p * k, newmults + [(p, m - k)])

        rec(0, ONE, 0, [])
        return out

    return op


def gamma_commutation_check(pairing, order, window=6):
    """Verify the half-vertex commutation relations on the truncated Fock basis.

    Checks [Gamma_-(x), Gamma_-(y)] = 0 and
    Gamma_+(c, x) Gamma_-(c', y) = (1 - y/x)^(c c') Gamma_-(c', y) Gamma_+(c, x)
    entrywise, with the pairing c*c' = `pairing` realized by scalar weights
    (c, c') = (pairing, 1); monomials y^a x^(-b) are compared for a, b <= window.
    Uses the surface sign convention, under which the exponent is +pairing.
    The operators run on states graded up to order + window so that every path
    contributing to a compared monomial is complete.
    """
    c, cp = pairing, 1
    cap = order + window
    gp = _gamma_plus_op(c, cap)
    gm = _gamma_minus_op(cp, cap)

    states = all_partition_states(order)

    # [Gamma_-(x), Gamma_-(y)] = 0: compare both compositions with the
    # x-additions recorded in a separate monomial slot.
    def gm_mono(scale, slot, cap):
        base = _gamma_minus_op(scale, cap)

        def op(state):
            out = []
            for (s2, (d, _), cc) in base(state):
                mono = (d, 0) if slot == 0 else (0, -d)  # y^d vs x^{+d} via b=-d
                out.append((s2, mono, cc))
            return out

        return op

    ok = True
    gy = gm_mono(cp, 0, cap)
    gx = gm_mono(cp, 1, cap)
    for state in states:
        v1 = _mat_apply(_mat_apply({state: {(0, 0): ONE}}, gy), gx)
        v2 = _mat_apply(_mat_apply({state: {(0, 0): ONE}}, gx), gy)
        if v1 != v2:
            ok = False
            break
    if not ok:
        return False

    # prefactor (1 - y/x)^(c c') truncated in powers of y/x
    e = c * cp
    pref = {}
    if e >= 0:
        for j in range(e + 1):
            pref[j] = Fraction((-1) ** j * comb(e, j))
    else:
        for j in range(window + 1):
            pref[j] = Fraction(comb(-e + j - 1, j))  # (1-u)^e = sum C(-e+j-1, j) u^j

    def clip(poly):
        return {(a, b): v for (a, b), v in poly.items()
                if a <= window and b <= window and v}

    for state in states:
        start = {state: {(0, 0): ONE}}
        # operator product Gamma_+(x) Gamma_-(y) applies Gamma_- first
        lhs = _mat_apply(_mat_apply(start, gm), gp)
        rhs = _mat_apply(_mat_apply(start, gp), gm)
        # multiply rhs by prefactor
        rhs2 = {}
        for st, poly in rhs.items():
            tgt = rhs2.setdefault(st, {})
            for (a, b), v in poly.items():
                for j, pc in pref.items():
                    key = (a + j, b + j)
                    tgt[key] = tgt.get(key, ZERO) + v * pc
        lhs_c = {st: clip(p) for st, p in lhs.items()}
        rhs_c = {st: clip(p) for st, p in rhs2.items()}
        lhs_c = {st: p for st, p in lhs_c.items() if p}
        rhs_c = {st: p for st, p in rhs_c.items() if p}
        if lhs_c != rhs_c:
            return False
    return True
