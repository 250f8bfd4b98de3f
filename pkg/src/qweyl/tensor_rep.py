"""The N-th tensor power of the vector representation, realized exactly.

Basis vectors of the weight space for a content (c_1, ..., c_n) are the
words in {1..n}^N using letter a exactly c_a times, ordered
lexicographically.  The Chevalley action is the iterated coproduct

    E |-> E (x) 1 + K (x) E,      F |-> F (x) K^{-1} + 1 (x) F,

so E_i turns one letter i into i+1 with a q-power prefix, F_i turns one
letter i+1 into i with a q-power suffix, and K_i is scalar on each weight
space.  All matrix entries are single monomials; divided powers divide
entrywise by the q-factorial and any inexactness aborts loudly.
"""

from __future__ import annotations

import time
from itertools import product
from math import factorial

from .cartan import CartanData, Weight, path_graph
from .qalg import (PONE, paddto, pdiv_exact, pmono, pmul, pq1, pscale,
                   ptext, qbinom_d, qfact_d)
from .report import VerificationReport

KINDS = ("E", "F")


def multinomial(content):
    total = sum(content)
    out = factorial(total)
    for c in content:
        out //= factorial(c)
    return out


def content_shift(content, kind, i, r=1):
    """Content after applying E_i^(r) (kind 'E') or F_i^(r) (kind 'F')."""
    c = list(content)
    if kind == "E":
        c[i - 1] -= r
        c[i] += r
    elif kind == "F":
        c[i - 1] += r
        c[i] -= r
    else:
        raise ValueError("kind must be 'E' or 'F', got %r" % (kind,))
    return tuple(c)


def content_valid(content):
    return all(c >= 0 for c in content)


class OperatorMatrix:
    """A sparse matrix between two weight spaces of one module.

    Column c holds the image of the c-th source basis word as a dict
    {row: raw Laurent dict}.  src and dst are content tuples; either may
    be invalid (a negative entry), in which case that side is 0-dim.
    """

    __slots__ = ("module", "src", "dst", "cols")

    def __init__(self, module, src, dst, cols):
        self.module = module
        self.src = src
        self.dst = dst
        self.cols = cols

    @property
    def ncols(self):
        return len(self.cols)

    @property
    def nrows(self):
        return self.module.dim(self.dst)

    def __matmul__(self, other):
        if other.dst != self.src:
            raise ValueError("composition mismatch: %s after %s" % (self.src, other.dst))
        mycols = self.cols
        cols = []
        for bcol in other.cols:
            acc = {}
            for k, bval in bcol.items():
                for r, aval in mycols[k].items():
                    cur = acc.get(r)
                    if cur is None:
                        acc[r] = pmul(aval, bval)
                    else:
                        paddto(cur, aval, bval)
            cols.append({r: v for r, v in acc.items() if v})
        return OperatorMatrix(self.module, other.src, self.dst, cols)

    def _check_shape(self, other):
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("shape mismatch: %s->%s vs %s->%s"
                             % (self.src, self.dst, other.src, other.dst))

    def __add__(self, other):
        self._check_shape(other)
        cols = []
        for ca, cb in zip(self.cols, other.cols):
            col = {r: dict(v) for r, v in ca.items()}
            for r, v in cb.items():
                cur = col.get(r)
                if cur is None:
                    col[r] = dict(v)
                else:
                    paddto(cur, v)
            cols.append({r: v for r, v in col.items() if v})
        return OperatorMatrix(self.module, self.src, self.dst, cols)

    def __sub__(self, other):
        return self + other.scale({0: -1})

    def scale(self, s):
        if isinstance(s, int):
            s = pmono(s)
        if not s:
            return OperatorMatrix(self.module, self.src, self.dst,
                                  [{} for _ in self.cols])
        cols = [{r: pmul(v, s) for r, v in col.items()} for col in self.cols]
        return OperatorMatrix(self.module, self.src, self.dst, cols)

    def exact_div(self, s):
        cols = [{r: pdiv_exact(v, s) for r, v in col.items()} for col in self.cols]
        return OperatorMatrix(self.module, self.src, self.dst, cols)

    def __eq__(self, other):
        return (isinstance(other, OperatorMatrix)
                and self.src == other.src and self.dst == other.dst
                and self.cols == other.cols)

    def is_zero(self):
        return all(not col for col in self.cols)

    def entries(self):
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                yield r, c, v

    def at_q1(self):
        """Columns with integer entries (q = 1)."""
        return [{r: pq1(v) for r, v in col.items() if pq1(v)} for col in self.cols]

    def transpose_entries_text(self, limit=6):
        parts = []
        for r, c, v in self.entries():
            parts.append("(%d,%d)=%s" % (r, c, ptext(v)))
            if len(parts) >= limit:
                parts.append("...")
                break
        return " ".join(parts)


class WeightModule:
    """All weight spaces of the N-fold tensor power for rank n."""

    def __init__(self, n, N, size_cap=200_000, disk_cache=None):
        if n < 2:
            raise ValueError("need n >= 2")
        if N < 1:
            raise ValueError("need N >= 1")
        if n ** N > size_cap:
            raise ValueError("module size %d^%d exceeds cap %d" % (n, N, size_cap))
        self.n = n
        self.N = N
        self.cartan = CartanData(path_graph(n - 1))
        self.disk_cache = disk_cache
        basis = {}
        for w in product(range(1, n + 1), repeat=N):
            c = [0] * n
            for a in w:
                c[a - 1] += 1
            basis.setdefault(tuple(c), []).append(w)
        self.basis = basis
        self.index = {lam: {w: i for i, w in enumerate(ws)} for lam, ws in basis.items()}
        self._ops = {}

    def contents(self):
        return sorted(self.basis)

    def dim(self, content):
        if len(content) != self.n or sum(content) != self.N:
            raise ValueError("content %r does not belong to this module" % (content,))
        if not content_valid(content):
            return 0
        return len(self.basis[content])

    def weight(self, content):
        return Weight.from_content(content)

    def pairing(self, content, i):
        return content[i] - content[i - 1]

    def identity(self, content):
        d = self.dim(content)
        return OperatorMatrix(self, content, content,
                              [{c: dict(PONE)} for c in range(d)])

    def zero_op(self, src, dst):
        return OperatorMatrix(self, src, dst, [{} for _ in range(self.dim(src))])

    def _generator(self, kind, i, lam):
        dst = content_shift(lam, kind, i)
        if self.dim(lam) == 0 or self.dim(dst) == 0:
            return self.zero_op(lam, dst)
        ridx = self.index[dst]
        cols = []
        if kind == "E":
            for w in self.basis[lam]:
                col = {}
                k = 0
                for p, a in enumerate(w):
                    if a == i:
                        w2 = w[:p] + (i + 1,) + w[p + 1:]
                        col[ridx[w2]] = pmono(1, k)
                        k -= 1
                    elif a == i + 1:
                        k += 1
                cols.append(col)
        else:
            for w in self.basis[lam]:
                col = {}
                suf = 0
                # suffix exponents, scanning right to left
                tmp = []
                for p in range(self.N - 1, -1, -1):
                    a = w[p]
                    if a == i + 1:
                        tmp.append((p, suf))
                        suf += 1
                    elif a == i:
                        suf -= 1
                for p, s in tmp:
                    w2 = w[:p] + (i,) + w[p + 1:]
                    col[ridx[w2]] = pmono(1, -s)
                cols.append(col)
        return OperatorMatrix(self, lam, dst, cols)

    def k_matrix(self, i, lam):
        m = self.pairing(lam, i)
        return self.identity(lam).scale(pmono(1, m))

    def divided(self, kind, i, r, lam):
        """The divided power E_i^(r) or F_i^(r) out of the weight `lam`."""
        if r < 0:
            return self.zero_op(lam, content_shift(lam, kind, i, r))
        key = (kind, i, r, lam)
        got = self._ops.get(key)
        if got is not None:
            return got
        if r == 0:
            out = self.identity(lam)
        elif self.disk_cache is not None and (out := self.disk_cache.load(self, kind, i, r, lam)) is not None:
            pass
        elif r == 1:
            out = self._generator(kind, i, lam)
        else:
            cur = lam
            mat = None
            for _ in range(r):
                g = self.divided(kind, i, 1, cur)
                mat = g if mat is None else g @ mat
                cur = content_shift(cur, kind, i)
            # entrywise exact division; inexactness here is an internal error
            out = mat.exact_div(qfact_d(r))
        self._ops[key] = out
        if self.disk_cache is not None and r >= 1:
            self.disk_cache.store(self, kind, i, r, lam, out)
        return out


# ---------------------------------------------------------------------------
# identity checks


def _timed_report(check, params, t0, failures, seed=None):
    rep = VerificationReport(check=check, params=params, seed=seed)
    rep.millis = (time.perf_counter() - t0) * 1000.0
    if failures:
        rep.status = "fail"
        rep.counterexample = failures[0]
    return rep


def verify_weight_dims(mod):
    """Weight space dimensions equal multinomial coefficients and sum to n^N."""
    t0 = time.perf_counter()
    failures = []
    total = 0
    for lam in mod.contents():
        d = mod.dim(lam)
        total += d
        if d != multinomial(lam):
            failures.append({"weight": list(lam),
                             "detail": "dim %d != multinomial %d" % (d, multinomial(lam))})
    if total != mod.n ** mod.N:
        failures.append({"weight": None,
                         "detail": "total %d != %d" % (total, mod.n ** mod.N)})
    return _timed_report("weight_dims", {"n": mod.n, "N": mod.N}, t0, failures)


def verify_divided_power(mod, i, r1, r2):
    """E^(r1) E^(r2) = [r1+r2 choose r1] E^(r1+r2), and the F version."""
    t0 = time.perf_counter()
    coeff = qbinom_d(r1 + r2, r1)
    failures = []
    for kind in KINDS:
        for lam in mod.contents():
            first = mod.divided(kind, i, r2, lam)
            second = mod.divided(kind, i, r1, first.dst)
            lhs = second @ first
            rhs = mod.divided(kind, i, r1 + r2, lam).scale(coeff)
            if lhs != rhs:
                failures.append({"weight": list(lam),
                                 "detail": "kind=%s lhs!=rhs" % kind})
    return _timed_report("divided_power",
                         {"n": mod.n, "N": mod.N, "i": i, "r1": r1, "r2": r2},
                         t0, failures)


def straightening_sides(mod, i, a, b, lam):
    """Both sides of the EF-straightening identity at one weight.

    With m the pairing at lam, the two one-sided forms are mirrors of each
    other under swapping E and F (which flips the sign of every pairing):

        m - a + b >= 0:   E^(b) F^(a)  =  sum_j [m-a+b; j] F^(a-j) E^(b-j)
        m - a + b <= 0:   F^(a) E^(b)  =  sum_j [a-b-m; j] E^(b-j) F^(a-j)

    Returns (branch, lhs, rhs).
    """
    m = mod.pairing(lam, i)
    if m - a + b >= 0:
        fa = mod.divided("F", i, a, lam)
        lhs = mod.divided("E", i, b, fa.dst) @ fa
        rhs = None
        for j in range(0, min(a, b) + 1):
            coeff = qbinom_d(m - a + b, j)
            if not coeff:
                continue
            ebj = mod.divided("E", i, b - j, lam)
            term = (mod.divided("F", i, a - j, ebj.dst) @ ebj).scale(coeff)
            rhs = term if rhs is None else rhs + term
        if rhs is None:
            rhs = lhs.scale(0)
        return "EF", lhs, rhs
    eb = mod.divided("E", i, b, lam)
    lhs = mod.divided("F", i, a, eb.dst) @ eb
    rhs = None
    for j in range(0, min(a, b) + 1):
        coeff = qbinom_d(a - b - m, j)
        if not coeff:
            continue
        faj = mod.divided("F", i, a - j, lam)
        term = (mod.divided("E", i, b - j, faj.dst) @ faj).scale(coeff)
        rhs = term if rhs is None else rhs + term
    if rhs is None:
        rhs = lhs.scale(0)
    return "FE", lhs, rhs


def verify_ef_straightening(mod, i, a, b):
    """Straightening of E/F words against the binomial-weighted sum."""
    t0 = time.perf_counter()
    failures = []
    for lam in mod.contents():
        branch, lhs, rhs = straightening_sides(mod, i, a, b, lam)
        if lhs != rhs:
            failures.append({"weight": list(lam), "detail": "branch=%s" % branch})
    return _timed_report("ef_straightening",
                         {"n": mod.n, "N": mod.N, "i": i, "a": a, "b": b},
                         t0, failures)


def verify_serre(mod, i, j):
    """X_i X_j X_i = X_i^(2) X_j + X_j X_i^(2) for joined i, j (X = E and F);
    plain commutation for unjoined distinct i, j."""
    if i == j:
        raise ValueError("serre check needs distinct vertices")
    t0 = time.perf_counter()
    failures = []
    adjacent = mod.cartan.adjacent(i, j)
    for kind in KINDS:
        for lam in mod.contents():
            xi = mod.divided(kind, i, 1, lam)
            xj_after = mod.divided(kind, j, 1, xi.dst)
            if adjacent:
                lhs = mod.divided(kind, i, 1, xj_after.dst) @ xj_after @ xi
                xi2 = mod.divided(kind, i, 2, lam)
                t1 = mod.divided(kind, j, 1, xi2.dst) @ xi2
                xj = mod.divided(kind, j, 1, lam)
                t2 = mod.divided(kind, i, 2, xj.dst) @ xj
                if lhs != t1 + t2:
                    failures.append({"weight": list(lam), "detail": "kind=%s" % kind})
            else:
                xj = mod.divided(kind, j, 1, lam)
                lhs = xj_after @ xi
                rhs = mod.divided(kind, i, 1, xj.dst) @ xj
                if lhs != rhs:
                    failures.append({"weight": list(lam), "detail": "kind=%s commute" % kind})
    return _timed_report("serre", {"n": mod.n, "N": mod.N, "i": i, "j": j},
                         t0, failures)


def verify_mixed_decomposition(mod, i, j, a, b):
    """E_i^(a) E_j E_i^(b) = [a+b-1; b] E_i^(a+b) E_j + [a+b-1; a] E_j E_i^(a+b)
    for joined i, j, and the F version."""
    if not mod.cartan.adjacent(i, j):
        raise ValueError("mixed decomposition needs joined vertices")
    t0 = time.perf_counter()
    c1 = qbinom_d(a + b - 1, b)
    c2 = qbinom_d(a + b - 1, a)
    failures = []
    for kind in KINDS:
        for lam in mod.contents():
            xb = mod.divided(kind, i, b, lam)
            xj = mod.divided(kind, j, 1, xb.dst)
            lhs = mod.divided(kind, i, a, xj.dst) @ xj @ xb
            # [a+b-1; b] goes with X_i^(a+b) after X_j, [a+b-1; a] with X_j last
            yj = mod.divided(kind, j, 1, lam)
            t1 = (mod.divided(kind, i, a + b, yj.dst) @ yj).scale(c1)
            xab = mod.divided(kind, i, a + b, lam)
            t2 = (mod.divided(kind, j, 1, xab.dst) @ xab).scale(c2)
            if lhs != t1 + t2:
                failures.append({"weight": list(lam), "detail": "kind=%s" % kind})
    return _timed_report("mixed_decomposition",
                         {"n": mod.n, "N": mod.N, "i": i, "j": j, "a": a, "b": b},
                         t0, failures)


def verify_commutations(mod, i, j):
    """F_j E_i = E_i F_j for i != j; E and F commute for unjoined pairs."""
    if i == j:
        raise ValueError("commutation check needs distinct vertices")
    t0 = time.perf_counter()
    failures = []
    adjacent = mod.cartan.adjacent(i, j)
    for lam in mod.contents():
        ei = mod.divided("E", i, 1, lam)
        lhs = mod.divided("F", j, 1, ei.dst) @ ei
        fj = mod.divided("F", j, 1, lam)
        rhs = mod.divided("E", i, 1, fj.dst) @ fj
        if lhs != rhs:
            failures.append({"weight": list(lam), "detail": "FE vs EF"})
        if not adjacent:
            for kind in KINDS:
                xi = mod.divided(kind, i, 1, lam)
                l2 = mod.divided(kind, j, 1, xi.dst) @ xi
                xj = mod.divided(kind, j, 1, lam)
                r2 = mod.divided(kind, i, 1, xj.dst) @ xj
                if l2 != r2:
                    failures.append({"weight": list(lam),
                                     "detail": "kind=%s distant commute" % kind})
    return _timed_report("commutation", {"n": mod.n, "N": mod.N, "i": i, "j": j},
                         t0, failures)
