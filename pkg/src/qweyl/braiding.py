"""Braid operators on weight modules, built from divided powers.

Per weight lam with pairing m = <lam, alpha_i>, the operator for vertex i
is the alternating block

    sum_s (-1)^s q^(gamma(s)) F^(m+s) E^(s)

for every m, mapping the lam space to the reflected space; terms with a
negative divided power vanish, so for m < 0 the sum effectively starts at
s = -m.  Reindexing that tail gives the alternative lowering-first kernel
sum_s (-1)^s q^(gamma(s)) E^(-m+s) F^(s) up to the blockwise unit
(-1)^m q^(-c1*m) (verify_branch_agreement checks this, and that the unit
is 1 at m = 0, where the two presentations coincide).

The exponent function gamma(s) = c1*s + c2*s^2 is not chosen by hand:
derive_grading_convention searches a small box of (c1, c2) and keeps those
making every block invertible and the braid relations hold exactly.  The
unit (eps, c) of the root operator r_ij = E_j E_i + eps q^c E_i E_j is
found the same way, by requiring r_ij T_i = T_i E_j.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import factorial

from .qalg import RationalFunction, pdiv_exact, pmono, pmul, pq1, qfact_d
from .report import VerificationReport
from .tensor_rep import WeightModule


@dataclass(frozen=True)
class GradingConvention:
    c1: int = 0
    c2: int = 0
    eps: int = 1
    c: int = 0

    def gamma(self, s):
        return self.c1 * s + self.c2 * s * s

    def coeff(self, s):
        """(-1)^s q^gamma(s) as a raw Laurent dict."""
        return {self.gamma(s): -1 if s % 2 else 1}

    def as_dict(self):
        return {"c1": self.c1, "c2": self.c2, "eps": self.eps, "c": self.c}


def content_reflect(lam, i):
    c = list(lam)
    c[i - 1], c[i] = c[i], c[i - 1]
    return tuple(c)


def rickard_block(mod, conv, i, lam, q_one=False):
    """The braid operator block out of weight lam.

    With q_one=True every q power collapses (gamma irrelevant), giving the
    classical reflection operator.
    """
    m = mod.pairing(lam, i)
    dst = content_reflect(lam, i)
    total = mod.zero_op(lam, dst)
    for s in range(max(0, -m), mod.N + 1):
        first = mod.divided("E", i, s, lam)
        if first.is_zero() and s > max(0, -m):
            break
        second = mod.divided("F", i, m + s, first.dst)
        coeff = {0: -1 if s % 2 else 1} if q_one else conv.coeff(s)
        total = total + (second @ first).scale(coeff)
    return total


def lowering_first_block(mod, conv, i, lam, q_one=False):
    """The alternative presentation sum_s (-1)^s q^(gamma(s)) E^(-m+s) F^(s),
    kept for the branch-agreement check."""
    m = mod.pairing(lam, i)
    dst = content_reflect(lam, i)
    total = mod.zero_op(lam, dst)
    for s in range(max(0, m), mod.N + 1):
        first = mod.divided("F", i, s, lam)
        if first.is_zero() and s > max(0, m):
            break
        second = mod.divided("E", i, -m + s, first.dst)
        coeff = {0: -1 if s % 2 else 1} if q_one else conv.coeff(s)
        total = total + (second @ first).scale(coeff)
    return total


def verify_branch_agreement(mod, conv, i):
    """The raising-first and lowering-first presentations agree at m = 0
    exactly, and differ by the unit (-1)^m q^(-c1*m) at every other weight.

    A blockwise unit only exists for linear exponent functions; the derived
    conventions are linear, so c2 != 0 is rejected rather than fudged.
    """
    if conv.c2 != 0:
        raise ValueError("branch agreement needs a linear exponent function")
    t0 = time.perf_counter()
    failures = []
    for lam in mod.contents():
        m = mod.pairing(lam, i)
        got = rickard_block(mod, conv, i, lam)
        alt = lowering_first_block(mod, conv, i, lam)
        unit = pmono(-1 if m % 2 else 1, -conv.c1 * m)
        if got != alt.scale(unit):
            failures.append({"weight": list(lam),
                             "detail": "m=%d presentations disagree" % m})
    rep = _report("rickard_block", {"n": mod.n, "N": mod.N, "i": i},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


class BraidOperator:
    """All blocks of one braid generator, built lazily."""

    def __init__(self, mod, conv, i, q_one=False):
        self.mod = mod
        self.conv = conv
        self.i = i
        self.q_one = q_one
        self._blocks = {}

    def block(self, lam):
        got = self._blocks.get(lam)
        if got is None:
            got = rickard_block(self.mod, self.conv, self.i, lam, self.q_one)
            self._blocks[lam] = got
        return got


def braid_operator(mod, conv, i, q_one=False):
    return BraidOperator(mod, conv, i, q_one)


def chain_apply(ops, lam):
    """Compose operator blocks right-to-left: ops[-1] acts first."""
    mat = None
    cur = lam
    for op in reversed(ops):
        b = op.block(cur)
        mat = b if mat is None else b @ mat
        cur = b.dst
    return mat


# ---------------------------------------------------------------------------
# determinants and inverses


def _dense_int(block):
    n = block.nrows
    rows = [[0] * block.ncols for _ in range(n)]
    for c, col in enumerate(block.cols):
        for r, v in col.items():
            rows[r][c] = pq1(v)
    return rows


def int_det(rows):
    """Fraction-free Bareiss determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [r[:] for r in rows]
    sign = 1
    denom = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = a[k][k]
        for r in range(k + 1, n):
            ark = a[r][k]
            row_r = a[r]
            row_k = a[k]
            for cc in range(k + 1, n):
                row_r[cc] = (row_r[cc] * pk - ark * row_k[cc]) // denom
            row_r[k] = 0
        denom = pk
    return sign * a[n - 1][n - 1]


def laurent_det(block):
    """Bareiss determinant over Z[q, q^-1]; divisions are exact."""
    n = block.nrows
    if block.ncols != n:
        raise ValueError("determinant of a non-square block")
    if n == 0:
        return dict(pmono(1))
    a = [[dict(block.cols[c].get(r, {})) for c in range(n)] for r in range(n)]
    sign = 1
    denom = pmono(1)
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return {}
        pk = a[k][k]
        for r in range(k + 1, n):
            ark = a[r][k]
            for cc in range(k + 1, n):
                num = pmul(a[r][cc], pk)
                if ark:
                    sub = pmul(ark, a[k][cc])
                    num = {e: cnum - sub.get(e, 0) for e, cnum in num.items()}
                    for e, cs in sub.items():
                        if e not in num:
                            num[e] = -cs
                    num = {e: cv for e, cv in num.items() if cv}
                a[r][cc] = pdiv_exact(num, denom)
            a[r][k] = {}
        denom = pk
    d = a[n - 1][n - 1]
    return d if sign == 1 else {e: -cv for e, cv in d.items()}


class RatBlock:
    """A block with RationalFunction entries (column-major like OperatorMatrix)."""

    __slots__ = ("src", "dst", "nrows", "cols")

    def __init__(self, src, dst, nrows, cols):
        self.src = src
        self.dst = dst
        self.nrows = nrows
        self.cols = cols

    @classmethod
    def lift(cls, block):
        cols = [{r: RationalFunction(v) for r, v in col.items()}
                for col in block.cols]
        return cls(block.src, block.dst, block.nrows, cols)

    @classmethod
    def identity(cls, lam, n):
        return cls(lam, lam, n, [{i: RationalFunction(pmono(1))} for i in range(n)])

    def __matmul__(self, other):
        if other.dst != self.src:
            raise ValueError("composition mismatch")
        cols = []
        for bcol in other.cols:
            acc = {}
            for k, bval in bcol.items():
                for r, aval in self.cols[k].items():
                    t = aval * bval
                    if r in acc:
                        acc[r] = acc[r] + t
                    else:
                        acc[r] = t
            cols.append({r: v for r, v in acc.items() if v})
        return RatBlock(other.src, self.dst, self.nrows, cols)

    def __eq__(self, other):
        if not isinstance(other, RatBlock):
            return NotImplemented
        if self.src != other.src or self.dst != other.dst:
            return False
        if len(self.cols) != len(other.cols):
            return False
        for ca, cb in zip(self.cols, other.cols):
            if set(ca) != set(cb):
                return False
            for r in ca:
                if not (ca[r] == cb[r]):
                    return False
        return True

    def at_q1(self):
        return [{r: v.at_one() for r, v in col.items()} for col in self.cols]


def invert_block(block):
    """Inverse of a square OperatorMatrix block over the fraction field.

    Gauss-Jordan with exact rational arithmetic.  Raises ArithmeticError on
    a singular block.
    """
    n = block.nrows
    if block.ncols != n:
        raise ValueError("cannot invert a non-square block")
    zero = RationalFunction({})
    a = [[RationalFunction(block.cols[c].get(r, {})) for c in range(n)]
         for r in range(n)]
    inv = [[RationalFunction(pmono(1)) if r == c else zero for c in range(n)]
           for r in range(n)]
    for k in range(n):
        piv = None
        for r in range(k, n):
            if a[r][k]:
                piv = r
                break
        if piv is None:
            raise ArithmeticError("singular block at weight %s" % (block.src,))
        a[k], a[piv] = a[piv], a[k]
        inv[k], inv[piv] = inv[piv], inv[k]
        p = a[k][k]
        a[k] = [v / p for v in a[k]]
        inv[k] = [v / p for v in inv[k]]
        for r in range(n):
            if r == k:
                continue
            f = a[r][k]
            if not f:
                continue
            a[r] = [vr - f * vk for vr, vk in zip(a[r], a[k])]
            inv[r] = [vr - f * vk for vr, vk in zip(inv[r], inv[k])]
    cols = [{r: inv[r][c] for r in range(n) if inv[r][c]} for c in range(n)]
    # the inverse runs backwards: dst -> src
    return RatBlock(block.dst, block.src, n, cols)


class InverseBraidOperator:
    """Blocks of T_i^{-1}: the lam block is the inverse of T_i at reflect(lam)."""

    def __init__(self, op):
        self.op = op
        self.i = op.i
        self._blocks = {}

    def block(self, lam):
        got = self._blocks.get(lam)
        if got is None:
            src = content_reflect(lam, self.op.i)
            got = invert_block(self.op.block(src))
            self._blocks[lam] = got
        return got


class LiftedOperator:
    """Wraps a polynomial-block operator so chains mix with RatBlocks."""

    def __init__(self, op):
        self.op = op

    def block(self, lam):
        return RatBlock.lift(self.op.block(lam))


# ---------------------------------------------------------------------------
# checks


def verify_weyl_compatibility(mod, conv, i):
    """Every block maps lam to reflect(lam, i) and is invertible; at q = 1
    the block determinant is +-1."""
    t0 = time.perf_counter()
    failures = []
    op = braid_operator(mod, conv, i)
    for lam in mod.contents():
        b = op.block(lam)
        if b.dst != content_reflect(lam, i):
            failures.append({"weight": list(lam), "detail": "wrong target %s" % (b.dst,)})
            continue
        if b.nrows != b.ncols:
            failures.append({"weight": list(lam), "detail": "non-square block"})
            continue
        d1 = int_det(_dense_int(b))
        if d1 in (1, -1):
            continue
        # the q=1 certificate failed; decide invertibility exactly
        if not laurent_det(b):
            failures.append({"weight": list(lam), "detail": "singular block"})
        else:
            failures.append({"weight": list(lam),
                             "detail": "q=1 determinant %d not a unit" % d1})
    rep = _report("weyl_compatibility", {"n": mod.n, "N": mod.N, "i": i},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


def verify_braid_relation(mod, conv, i, j, q_one=False):
    """T_i T_j T_i = T_j T_i T_j for joined i, j; commutation otherwise."""
    if i == j:
        raise ValueError("braid relation needs distinct vertices")
    t0 = time.perf_counter()
    failures = []
    ti = braid_operator(mod, conv, i, q_one)
    tj = braid_operator(mod, conv, j, q_one)
    joined = mod.cartan.adjacent(i, j)
    for lam in mod.contents():
        if joined:
            lhs = chain_apply([ti, tj, ti], lam)
            rhs = chain_apply([tj, ti, tj], lam)
        else:
            lhs = chain_apply([ti, tj], lam)
            rhs = chain_apply([tj, ti], lam)
        if q_one:
            # the q = 1 statement lives over the integers
            equal = FracBlock.from_op(lhs) == FracBlock.from_op(rhs)
        else:
            equal = lhs == rhs
        if not equal:
            failures.append({"weight": list(lam),
                             "detail": "braid mismatch (joined=%s)" % joined})
    rep = _report("braid_relation",
                  {"n": mod.n, "N": mod.N, "i": i, "j": j, "q_one": q_one},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


def _report(check, params, t0, failures):
    rep = VerificationReport(check=check, params=params)
    rep.millis = (time.perf_counter() - t0) * 1000.0
    if failures:
        rep.status = "fail"
        rep.counterexample = failures[0]
    return rep


def root_vector(mod, conv, i, j, lam):
    """r_ij = E_j E_i + eps q^c E_i E_j as a block out of lam."""
    ei = mod.divided("E", i, 1, lam)
    t1 = mod.divided("E", j, 1, ei.dst) @ ei
    ej = mod.divided("E", j, 1, lam)
    t2 = (mod.divided("E", i, 1, ej.dst) @ ej).scale(pmono(conv.eps, conv.c))
    return t1 + t2


def root_vector_f(mod, conv, i, j, lam):
    """The F counterpart F_i F_j + eps q^-c F_j F_i (bar-dual unit)."""
    fj = mod.divided("F", j, 1, lam)
    t1 = mod.divided("F", i, 1, fj.dst) @ fj
    fi = mod.divided("F", i, 1, lam)
    t2 = (mod.divided("F", j, 1, fi.dst) @ fi).scale(pmono(conv.eps, -conv.c))
    return t1 + t2


def _divided_root(mod, conv, i, j, r, lam, f_version=False):
    """r_ij^(r) by exact entrywise division of the r-fold product by [r]!."""
    cur = lam
    mat = None
    for _ in range(r):
        b = (root_vector_f if f_version else root_vector)(mod, conv, i, j, cur)
        mat = b if mat is None else b @ mat
        cur = b.dst
    if mat is None:
        return mod.identity(lam)
    return mat.exact_div(qfact_d(r))


def conjugation_check(mod, conv, i, j, max_r=2, q_one=False):
    """r_ij^(r) T_i = T_i E_j^(r) for r <= max_r (r = 1 is the unit check).

    With q_one=True both sides are evaluated over the integers instead.
    """
    if not mod.cartan.adjacent(i, j):
        raise ValueError("root conjugation needs joined vertices")
    t0 = time.perf_counter()
    failures = []
    ti = braid_operator(mod, conv, i)
    for r in range(1, max_r + 1):
        for lam in mod.contents():
            b1 = ti.block(lam)
            try:
                lhs = _divided_root(mod, conv, i, j, r, b1.dst) @ b1
            except ArithmeticError:
                failures.append({"weight": list(lam),
                                 "detail": "r_ij^(%d) not exactly divisible" % r})
                continue
            ejr = mod.divided("E", j, r, lam)
            rhs = ti.block(ejr.dst) @ ejr
            if q_one:
                equal = FracBlock.from_op(lhs) == FracBlock.from_op(rhs)
            else:
                equal = lhs == rhs
            if not equal:
                failures.append({"weight": list(lam), "detail": "r=%d" % r})
    rep = _report("root_conjugation" if max_r == 1 else "root_conjugation_divided",
                  {"n": mod.n, "N": mod.N, "i": i, "j": j, "max_r": max_r,
                   "q_one": q_one},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


def verify_inverses(mod, conv, i):
    """Every block composes with its inverse to the identity, both ways,
    over the fraction field."""
    t0 = time.perf_counter()
    failures = []
    op = braid_operator(mod, conv, i)
    for lam in mod.contents():
        b = op.block(lam)
        try:
            binv = invert_block(b)
        except ArithmeticError:
            failures.append({"weight": list(lam), "detail": "singular block"})
            continue
        lb = RatBlock.lift(b)
        if (binv @ lb != RatBlock.identity(lam, mod.dim(lam))
                or lb @ binv != RatBlock.identity(b.dst, mod.dim(b.dst))):
            failures.append({"weight": list(lam), "detail": "inverse roundtrip"})
    rep = _report("block_invertible", {"n": mod.n, "N": mod.N, "i": i},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


def verify_q1_determinants(mod, conv, i):
    """At q = 1 every block determinant is a unit of Z, i.e. +-1."""
    t0 = time.perf_counter()
    failures = []
    op = braid_operator(mod, conv, i)
    for lam in mod.contents():
        b = op.block(lam)
        d = int_det(_dense_int(b)) if b.nrows == b.ncols else None
        if d not in (1, -1):
            failures.append({"weight": list(lam),
                             "detail": "q=1 determinant %s" % (d,)})
    rep = _report("q1_determinant", {"n": mod.n, "N": mod.N, "i": i},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


def conjugation_check_f(mod, conv, i, j):
    """T_i F_j T_i^{-1} equals the F root operator, checked multiplicatively."""
    if not mod.cartan.adjacent(i, j):
        raise ValueError("root conjugation needs joined vertices")
    t0 = time.perf_counter()
    failures = []
    ti = braid_operator(mod, conv, i)
    for lam in mod.contents():
        b1 = ti.block(lam)
        fij = root_vector_f(mod, conv, i, j, b1.dst)
        lhs = fij @ b1
        fj = mod.divided("F", j, 1, lam)
        rhs = ti.block(fj.dst) @ fj
        if lhs != rhs:
            failures.append({"weight": list(lam), "detail": "F conjugation"})
    rep = _report("root_conjugation", {"n": mod.n, "N": mod.N, "i": i, "j": j,
                                       "kind": "F"}, t0, failures)
    rep.convention = conv.as_dict()
    return rep


# ---------------------------------------------------------------------------
# q = 1 blocks with rational entries, for the factorization check


class FracBlock:
    __slots__ = ("src", "dst", "nrows", "cols")

    def __init__(self, src, dst, nrows, cols):
        self.src = src
        self.dst = dst
        self.nrows = nrows
        self.cols = cols

    @classmethod
    def from_op(cls, block):
        return cls(block.src, block.dst, block.nrows,
                   [{r: Fraction(pq1(v)) for r, v in col.items() if pq1(v)}
                    for col in block.cols])

    @classmethod
    def from_rat(cls, rb):
        return cls(rb.src, rb.dst, rb.nrows,
                   [{r: v.at_one() for r, v in col.items() if v.at_one()}
                    for col in rb.cols])

    def __matmul__(self, other):
        if other.dst != self.src:
            raise ValueError("composition mismatch")
        cols = []
        for bcol in other.cols:
            acc = {}
            for k, bval in bcol.items():
                for r, aval in self.cols[k].items():
                    acc[r] = acc.get(r, 0) + aval * bval
            cols.append({r: v for r, v in acc.items() if v})
        return FracBlock(other.src, self.dst, self.nrows, cols)

    def __add__(self, other):
        cols = []
        for ca, cb in zip(self.cols, other.cols):
            col = dict(ca)
            for r, v in cb.items():
                col[r] = col.get(r, 0) + v
            cols.append({r: v for r, v in col.items() if v})
        return FracBlock(self.src, self.dst, self.nrows, cols)

    def scale(self, k):
        return FracBlock(self.src, self.dst, self.nrows,
                         [{r: v * k for r, v in col.items()} for col in self.cols])

    def __eq__(self, other):
        return (self.src == other.src and self.dst == other.dst
                and all(ca == cb for ca, cb in zip(self.cols, other.cols)))


def check_tij_factorization(mod, conv, i, j):
    """t_ij := T_i T_j T_i^{-1} behaves like the braid operator of the
    composite reflection: t_ij T_i = T_i T_j and T_j t_ij = T_i T_j exactly,
    and at q = 1 it equals the alternating sum built from the root operator
    r_ij and the conjugated lowering operator T_i F_j T_i^{-1}.
    """
    if not mod.cartan.adjacent(i, j):
        raise ValueError("factorization check needs joined vertices")
    t0 = time.perf_counter()
    failures = []
    ti = braid_operator(mod, conv, i)
    tj = braid_operator(mod, conv, j)
    lti, ltj = LiftedOperator(ti), LiftedOperator(tj)
    tinv = InverseBraidOperator(ti)

    def tij_block(lam):
        b1 = tinv.block(lam)
        b2 = ltj.block(b1.dst)
        b3 = lti.block(b2.dst)
        return b3 @ (b2 @ b1)

    for lam in mod.contents():
        tb = tij_block(lam)
        # (a) t_ij T_i = T_i T_j
        b1 = lti.block(lam)
        lhs = tij_block(b1.dst) @ b1
        b2 = ltj.block(lam)
        rhs = lti.block(b2.dst) @ b2
        if not (lhs == rhs):
            failures.append({"weight": list(lam), "detail": "t_ij T_i != T_i T_j"})
            continue
        # (c) T_j t_ij = T_i T_j
        lhs2 = ltj.block(tb.dst) @ tb
        if not (lhs2 == rhs):
            failures.append({"weight": list(lam), "detail": "T_j t_ij != T_i T_j"})
            continue
        # (b) q = 1: t_ij equals the alternating sum in the root operators
        got = FracBlock.from_rat(tb)
        want = _tij_alternating_q1(mod, conv, i, j, lam, lti, tinv)
        if not (got == want):
            failures.append({"weight": list(lam), "detail": "q=1 alternating sum"})
    rep = _report("tij_factorization", {"n": mod.n, "N": mod.N, "i": i, "j": j},
                  t0, failures)
    rep.convention = conv.as_dict()
    return rep


def _raising_root_q1(mod, conv, i, j, r, lam):
    """r_ij^(r) at q = 1, from the intrinsic two-term formula."""
    cur = lam
    mat = None
    for _ in range(r):
        b = FracBlock.from_op(root_vector(mod, conv, i, j, cur))
        mat = b if mat is None else b @ mat
        cur = b.dst
    if mat is None:
        d = mod.dim(lam)
        return FracBlock(lam, lam, d, [{k: Fraction(1)} for k in range(d)])
    return mat.scale(Fraction(1, factorial(r)))


def _lowering_root_q1(mod, lti, tinv, j, r, lam):
    """(T_i F_j^(r) T_i^{-1}) at q = 1; the lowering operator is taken by
    conjugation rather than from a guessed formula."""
    b1 = tinv.block(lam)
    fjr = RatBlock.lift(mod.divided("F", j, r, b1.dst))
    b3 = lti.block(fjr.dst)
    return FracBlock.from_rat(b3 @ (fjr @ b1))


def _tij_alternating_q1(mod, conv, i, j, lam, lti, tinv):
    # single formula for every m, like rickard_block: negative powers vanish
    m = mod.pairing(lam, i) + mod.pairing(lam, j)
    dst = content_reflect(content_reflect(content_reflect(lam, i), j), i)
    total = FracBlock(lam, dst, mod.dim(dst), [{} for _ in range(mod.dim(lam))])
    for s in range(max(0, -m), mod.N + 1):
        first = _raising_root_q1(mod, conv, i, j, s, lam)
        second = _lowering_root_q1(mod, lti, tinv, j, m + s, first.dst)
        term = (second @ first).scale(Fraction(-1 if s % 2 else 1))
        if term.dst != dst:
            raise AssertionError("alternating sum target drifted")
        total = total + term
    return total


# ---------------------------------------------------------------------------
# convention derivation


def derive_grading_convention(search_bound=2, modules=((2, 2), (3, 2), (3, 3)),
                              size_cap=200_000, probe=(3, 5)):
    """Brute-force the exponent function and the root-operator unit.

    Returns (convention, passing_gammas, passing_units, reports).
    Candidates (c1, c2) are tried smallest first (by |c1|+|c2|, then
    lexicographically); one passes when, on every search module,
      (a) every block is invertible (q=1 determinant a unit),
      (b) braid relations hold exactly,
      (c) the q=1 specialization equals the gamma=0 classical operator.
    The search modules are small enough that several exponent functions
    tie there, so the accepted candidate must also pass the braid relation
    on the larger probe module; that filter is what pins the exponent
    uniquely up to the bar symmetry q -> 1/q.  Then (eps, c) is fixed by
    the conjugation identity on the rank-2 search modules.
    """
    t0 = time.perf_counter()
    mods = [WeightModule(n, N, size_cap=size_cap) for (n, N) in modules]
    box = [(c1, c2)
           for c1 in range(-search_bound, search_bound + 1)
           for c2 in range(-search_bound, search_bound + 1)]
    box.sort(key=lambda t: (abs(t[0]) + abs(t[1]), t))
    passing = [cand for cand in box if _gamma_passes(mods, GradingConvention(*cand))]
    reports = []
    if not passing:
        rep = VerificationReport(check="grading_convention",
                                 params={"search_bound": search_bound},
                                 status="fail",
                                 counterexample={"weight": None,
                                                 "detail": "no (c1,c2) passed"})
        rep.millis = (time.perf_counter() - t0) * 1000.0
        return None, [], [], [rep]
    probe_mod = WeightModule(*probe, size_cap=size_cap)
    confirmed = [cand for cand in passing
                 if all(verify_braid_relation(probe_mod, GradingConvention(*cand),
                                              i, i + 1).ok
                        for i in range(1, probe_mod.n - 1))]
    gammas = confirmed or passing
    c1, c2 = gammas[0]
    units = []
    rank2 = [m for m in mods if m.n >= 3]
    for eps, c in sorted(iproduct((-1, 1), range(-search_bound, search_bound + 1)),
                         key=lambda t: (abs(t[1]), t)):
        conv = GradingConvention(c1, c2, eps, c)
        ok = True
        for mod in rank2:
            for (a, b) in ((1, 2), (2, 1)):
                if not conjugation_check(mod, conv, a, b, max_r=1).ok:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            units.append((eps, c))
    conv = GradingConvention(c1, c2, *(units[0] if units else (1, 0)))
    rep = VerificationReport(check="grading_convention",
                             params={"search_bound": search_bound,
                                     "passing_gammas": passing,
                                     "probe_confirmed": confirmed,
                                     "passing_units": units},
                             status="pass" if units else "fail")
    rep.convention = conv.as_dict()
    rep.millis = (time.perf_counter() - t0) * 1000.0
    reports.append(rep)
    return conv, passing, units, reports


def _gamma_passes(mods, conv):
    for mod in mods:
        for i in range(1, mod.n):
            op = braid_operator(mod, conv, i)
            opc = braid_operator(mod, conv, i, q_one=True)
            for lam in mod.contents():
                b = op.block(lam)
                if b.nrows != b.ncols or int_det(_dense_int(b)) not in (1, -1):
                    return False
                # q=1 specialization must agree with the classical operator
                if FracBlock.from_op(b) != FracBlock.from_op(opc.block(lam)):
                    return False
        for i in range(1, mod.n):
            for j in range(i + 1, mod.n):
                if not verify_braid_relation(mod, conv, i, j).ok:
                    return False
    return True
