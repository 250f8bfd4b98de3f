"""Nil affine Hecke relations and the two-color crossing calculus.

Everything here acts on a faithful polynomial model: a word of colors
(i_1, ..., i_m) carries the ring Z[x_1, ..., x_m], dots act as multiplication
by a variable, and the crossing of two equal colors acts as the divided
difference (Demazure) operator.  Crossings of distinct colors swap the two
variables and the two colors; when the colors are joined by a graph edge one
crossing direction additionally multiplies by Q(u, v) = u + v, so that the
round trip on a joined pair is multiplication by x_k + x_{k+1}.

Each variable carries internal degree 2, a dot raises degree by 2, and a
same-color crossing lowers it by 2.  All arithmetic is exact over Z, and the
checkers run over every monomial up to a degree bound (the operators are
linear, so a monomial basis is a complete test set) plus a seeded batch of
random polynomials.
"""

from __future__ import annotations

import random
import time

from .cartan import path_graph
from .report import VerificationReport

# ---------------------------------------------------------------------------
# multivariate polynomials: {exponent tuple: int}, zero coefficients dropped

def mp_norm(f):
    return {e: c for e, c in f.items() if c}


def mp_one(m):
    return {(0,) * m: 1}


def mp_var(m, k):
    """x_k as a polynomial in m variables, 1-indexed."""
    e = [0] * m
    e[k - 1] = 1
    return {tuple(e): 1}


def mp_add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        elif e in out:
            del out[e]
    return out


def mp_neg(f):
    return {e: -c for e, c in f.items()}


def mp_sub(a, b):
    return mp_add(a, mp_neg(b))


def mp_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def mp_swap(f, k):
    """Exchange x_k and x_{k+1} in every monomial."""
    out = {}
    for e, c in f.items():
        le = list(e)
        le[k - 1], le[k] = le[k], le[k - 1]
        out[tuple(le)] = c
    return out


def mp_degree(f):
    """Total degree in the variables, or None for the zero polynomial."""
    if not f:
        return None
    return max(sum(e) for e in f)


def internal_degree(f):
    """Degree with each variable counted as 2, or None for zero."""
    d = mp_degree(f)
    return None if d is None else 2 * d


def mp_text(f):
    if not f:
        return "0"
    bits = []
    for e, c in sorted(f.items(), reverse=True):
        var = "*".join("x%d" % (k + 1) + ("^%d" % p if p > 1 else "")
                       for k, p in enumerate(e) if p)
        bits.append("%d*%s" % (c, var) if var else "%d" % c)
    return " + ".join(bits)


def monomials(m, bound):
    """All exponent tuples in m variables with total degree <= bound, lex order."""
    out = []

    def rec(prefix, left):
        if len(prefix) == m - 1:
            for e in range(left + 1):
                out.append(tuple(prefix) + (e,))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e)

    if m == 0:
        return [()]
    rec([], bound)
    return out


def _random_poly(rng, m, bound):
    f = {}
    for _ in range(rng.randint(1, 4)):
        e = [0] * m
        for _ in range(rng.randint(0, bound)):
            e[rng.randrange(m)] += 1
        c = rng.choice([c for c in range(-9, 10) if c])
        f = mp_add(f, {tuple(e): c})
    return f


# ---------------------------------------------------------------------------
# the Demazure operator

def demazure(k, f):
    """Divided difference at position k: (f - s_k f)/(x_k - x_{k+1}).

    The numerator is antisymmetric in x_k, x_{k+1}, so the division is always
    exact; it is performed monomial by monomial via the geometric-sum
    factorization of x^a y^b - x^b y^a.
    """
    out = {}
    for e, c in f.items():
        a, b = e[k - 1], e[k]
        if a == b:
            continue
        sign = 1
        if a < b:
            a, b = b, a
            sign = -1
        # x^a y^b - x^b y^a = (x - y) * x^b y^b * sum_s x^(a-b-1-s) y^s
        for s in range(a - b):
            le = list(e)
            le[k - 1] = b + (a - b - 1 - s)
            le[k] = b + s
            te = tuple(le)
            v = out.get(te, 0) + sign * c
            if v:
                out[te] = v
            elif te in out:
                del out[te]
    return out


def check_nilhecke(m, degree_bound=10, samples=50, seed=11):
    """Verify the nil affine Hecke relations on the polynomial model.

    For every monomial in m variables up to degree_bound, and for `samples`
    additional random polynomials, checks exactly:
      (a) the same-color crossing squares to zero,
      (b) adjacent crossings satisfy the braid relation,
      (c) the two dot-crossing straightening identities both equal the
          identity operator,
    plus the degree bookkeeping: a crossing lowers internal degree by 2.
    """
    if m < 2:
        raise ValueError("need at least two strands")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    params = {"m": m, "degree_bound": degree_bound, "samples": samples}

    def finish(status, counterexample=None):
        return VerificationReport(
            check="nilhecke_relations", params=params, status=status,
            counterexample=counterexample, seed=seed,
            millis=(time.perf_counter() - t0) * 1000.0)

    basis = [({e: 1}, True) for e in monomials(m, degree_bound)]
    extra = [(_random_poly(rng, m, degree_bound), False) for _ in range(samples)]
    for f, homogeneous in basis + extra:
        for k in range(1, m):
            g = demazure(k, f)
            if demazure(k, g):
                return finish("fail", {
                    "weight": None,
                    "detail": "square of crossing %d nonzero on %s" % (k, mp_text(f))})
            if homogeneous and g and f:
                if internal_degree(g) != internal_degree(f) - 2:
                    return finish("fail", {
                        "weight": None,
                        "detail": "degree drop != 2 at crossing %d on %s" % (k, mp_text(f))})
            xk, xk1 = mp_var(m, k), mp_var(m, k + 1)
            left = mp_sub(mp_mul(xk, g), demazure(k, mp_mul(xk1, f)))
            right = mp_add(mp_neg(mp_mul(xk1, g)), demazure(k, mp_mul(xk, f)))
            if left != mp_norm(f) or right != mp_norm(f):
                return finish("fail", {
                    "weight": None,
                    "detail": "dot straightening at %d fails on %s" % (k, mp_text(f))})
        for k in range(1, m - 1):
            lhs = demazure(k, demazure(k + 1, demazure(k, f)))
            rhs = demazure(k + 1, demazure(k, demazure(k + 1, f)))
            if lhs != rhs:
                return finish("fail", {
                    "weight": None,
                    "detail": "braid relation at %d fails on %s" % (k, mp_text(f))})
    return finish("pass")


# ---------------------------------------------------------------------------
# colored words and the crossing calculus

class KLRElement:
    """Finite formal sum of colored words, each weighted by a polynomial."""

    __slots__ = ("m", "comps")

    def __init__(self, m, comps=None):
        self.m = m
        self.comps = {}
        for w, f in (comps or {}).items():
            if len(w) != m:
                raise ValueError("word length %d != strand count %d" % (len(w), m))
            g = mp_norm(f)
            if g:
                self.comps[w] = g

    def __add__(self, other):
        if self.m != other.m:
            raise ValueError("strand counts differ")
        out = dict(self.comps)
        for w, f in other.comps.items():
            s = mp_add(out.get(w, {}), f)
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        res = KLRElement(self.m)
        res.comps = out
        return res

    def times_poly(self, f):
        return KLRElement(self.m, {w: mp_mul(f, g) for w, g in self.comps.items()})

    def component(self, w):
        return self.comps.get(tuple(w), {})

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        return (isinstance(other, KLRElement) and self.m == other.m
                and self.comps == other.comps)

    def text(self):
        if not self.comps:
            return "0"
        bits = []
        for w in sorted(self.comps):
            bits.append("(%s) @ (%s)" % (mp_text(self.comps[w]),
                                         ",".join(map(str, w))))
        return " + ".join(bits)


def klr_crossing(graph, w, k, f):
    """Apply the crossing at position k to the single component f on word w.

    Equal colors act by the Demazure operator and keep the word.  Distinct
    colors swap the word entries and the variables x_k, x_{k+1}; if the colors
    are joined in the graph, the higher-to-lower direction also multiplies by
    x_k + x_{k+1} while the lower-to-higher direction is free.
    """
    w = tuple(w)
    m = len(w)
    if not 1 <= k < m:
        raise ValueError("crossing position %d out of range 1..%d" % (k, m - 1))
    for col in (w[k - 1], w[k]):
        if not 1 <= col <= graph.n:
            raise ValueError("color %d not a vertex of the graph" % col)
    a, b = w[k - 1], w[k]
    if a == b:
        return KLRElement(m, {w: demazure(k, f)})
    swapped = w[:k - 1] + (b, a) + w[k + 1:]
    g = mp_swap(f, k)
    if graph.adjacent(a, b) and a > b:
        g = mp_mul(mp_add(mp_var(m, k), mp_var(m, k + 1)), g)
    return KLRElement(m, {swapped: g})


def klr_cross(graph, elem, k):
    out = KLRElement(elem.m)
    for w, f in elem.comps.items():
        out = out + klr_crossing(graph, w, k, f)
    return out


def klr_dot(elem, k):
    return elem.times_poly(mp_var(elem.m, k))


def check_klr_edge_relation(graph, i, j, degree_bound=10, samples=50, seed=12):
    """Verify the two-strand crossing relations for the joined pair (i, j).

    On the word (i, j) the double crossing must equal multiplication by
    x_1 + x_2, and symmetrically on (j, i).  As contrast checks, the double
    crossing on a non-joined pair (when the graph has one) must be the
    identity, and on an equal-color word it must be zero.
    """
    if i == j or not graph.adjacent(i, j):
        raise ValueError("colors %d, %d are not a joined pair" % (i, j))
    t0 = time.perf_counter()
    rng = random.Random(seed)
    free_pair = None
    for u in graph.vertices:
        for v in graph.vertices:
            if u != v and not graph.adjacent(u, v):
                free_pair = (u, v)
                break
        if free_pair:
            break
    params = {"i": i, "j": j, "degree_bound": degree_bound, "samples": samples,
              "contrast_pair": free_pair}

    def finish(status, counterexample=None):
        return VerificationReport(
            check="klr_edge", params=params, status=status,
            counterexample=counterexample, seed=seed,
            millis=(time.perf_counter() - t0) * 1000.0)

    qpoly = mp_add(mp_var(2, 1), mp_var(2, 2))
    polys = [{e: 1} for e in monomials(2, degree_bound)]
    polys += [_random_poly(rng, 2, degree_bound) for _ in range(samples)]
    for f in polys:
        for w in ((i, j), (j, i)):
            start = KLRElement(2, {w: f})
            twice = klr_cross(graph, klr_cross(graph, start, 1), 1)
            if twice != start.times_poly(qpoly):
                return finish("fail", {
                    "weight": None,
                    "detail": "double crossing on (%d,%d) != (x1+x2)* on %s"
                              % (w[0], w[1], mp_text(f))})
        same = KLRElement(2, {(i, i): f})
        if not klr_cross(graph, klr_cross(graph, same, 1), 1).is_zero():
            return finish("fail", {
                "weight": None,
                "detail": "equal-color double crossing nonzero on %s" % mp_text(f)})
        if free_pair:
            far = KLRElement(2, {free_pair: f})
            if klr_cross(graph, klr_cross(graph, far, 1), 1) != far:
                return finish("fail", {
                    "weight": None,
                    "detail": "non-joined double crossing not identity on %s" % mp_text(f)})
    return finish("pass")


def check_theorem6_computation(graph=None, degree_bound=6, samples=50, seed=13):
    """Verify the three-strand composite identity behind the braiding proof.

    On the word (j, i, i) with i, j joined, write D for the crossing of the
    last two strands (equal colors, a Demazure operator) and C for the pair of
    crossings that carries the first strand across and back.  The claim checked
    exactly on every monomial up to the bound, for both numeric orientations of
    the joined pair:

        D after C after D  =  D,

    together with its step-by-step derivation: C is multiplication by
    x_1 + x_2, splitting that product re-expresses the left side as
    x_1*D^2 + D^2*x_3 + D, and both squared terms vanish.  A perturbed
    composite with one factor dropped must differ from D (negative control).
    """
    if graph is None:
        graph = path_graph(2)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    pairs = [(i, j) for i in graph.vertices for j in graph.vertices
             if i < j and graph.adjacent(i, j)]
    if not pairs:
        raise ValueError("graph has no joined pair")
    lo, hi = pairs[0]
    params = {"pair": (lo, hi), "degree_bound": degree_bound, "samples": samples}

    def finish(status, counterexample=None):
        return VerificationReport(
            check="klr_composite", params=params, status=status,
            counterexample=counterexample, seed=seed,
            millis=(time.perf_counter() - t0) * 1000.0)

    x1 = mp_var(3, 1)
    x3 = mp_var(3, 3)
    q12 = mp_add(mp_var(3, 1), mp_var(3, 2))
    polys = [{e: 1} for e in monomials(3, degree_bound)]
    polys += [_random_poly(rng, 3, degree_bound) for _ in range(samples)]
    for (i, j) in ((lo, hi), (hi, lo)):
        w0 = (j, i, i)
        for f in polys:
            start = KLRElement(3, {w0: f})
            e1 = klr_cross(graph, start, 2)
            e2 = klr_cross(graph, e1, 1)
            if set(e2.comps) - {(i, j, i)}:
                return finish("fail", {
                    "weight": None,
                    "detail": "middle word wrong for pair (%d,%d)" % (i, j)})
            e3 = klr_cross(graph, e2, 1)
            e4 = klr_cross(graph, e3, 2)
            if e4 != e1:
                return finish("fail", {
                    "weight": None,
                    "detail": "composite != crossing on %s at (%d,%d)"
                              % (mp_text(f), i, j)})
            # step 1: the out-and-back pair is multiplication by x_1 + x_2
            mid = klr_cross(graph, klr_cross(graph, start, 1), 1)
            if mid != start.times_poly(q12):
                return finish("fail", {
                    "weight": None,
                    "detail": "out-and-back != (x1+x2)* on %s" % mp_text(f)})
            # step 2: split the product and straighten the x_2 factor
            df = demazure(2, f)
            term_sq1 = mp_mul(x1, demazure(2, demazure(2, f)))
            term_sq2 = demazure(2, demazure(2, mp_mul(x3, f)))
            regrouped = mp_add(mp_add(term_sq1, term_sq2), df)
            if e4.component(w0) != regrouped:
                return finish("fail", {
                    "weight": None,
                    "detail": "regrouped form differs on %s" % mp_text(f)})
            # step 3: both squared terms vanish, leaving D alone
            if term_sq1 or term_sq2:
                return finish("fail", {
                    "weight": None,
                    "detail": "squared crossing term nonzero on %s" % mp_text(f)})
        # negative controls: drop one outer factor, equality must break
        probe = KLRElement(3, {w0: mp_one(3)})
        dropped_right = klr_cross(graph, klr_cross(graph, klr_cross(graph, probe, 1), 1), 2)
        if dropped_right == klr_cross(graph, probe, 2):
            return finish("fail", {
                "weight": None,
                "detail": "negative control passed: right factor dropped"})
        probe2 = KLRElement(3, {w0: mp_var(3, 2)})
        dropped_left = klr_cross(graph, klr_cross(graph, klr_cross(graph, probe2, 2), 1), 1)
        if dropped_left == klr_cross(graph, probe2, 2):
            return finish("fail", {
                "weight": None,
                "detail": "negative control passed: left factor dropped"})
    return finish("pass")
