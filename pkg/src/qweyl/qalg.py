"""Exact arithmetic in Z[q, q^-1] and its fraction field.

Everything downstream (weight modules, braid operators, the rewriting
oracle) reduces to identities between Laurent polynomials with integer
coefficients, so this module is deliberately dependency-free: coefficients
are Python ints, a polynomial is a dict {exponent: coefficient}, and all
divisions are exact or they raise.

The module-level functions (padd, pmul, ...) operate on plain dicts and are
the hot path for matrix arithmetic.  LaurentPoly is a thin wrapper giving
operators, parsing and printing.
"""

from __future__ import annotations

from fractions import Fraction
import re

# ---------------------------------------------------------------------------
# raw dict arithmetic (exponent -> nonzero int coefficient)

PZERO: dict = {}
PONE = {0: 1}


def pnorm(d):
    """Drop zero coefficients in place and return d."""
    for e in [e for e, c in d.items() if c == 0]:
        del d[e]
    return d


def pmono(coeff, exp=0):
    return {exp: coeff} if coeff else {}


def padd(a, b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def paddto(acc, b, scale=None):
    """acc += b * scale, mutating acc (a plain dict)."""
    if not b:
        return acc
    if scale is None:
        for e, c in b.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return acc
    for eb, cb in b.items():
        for es, cs in scale.items():
            e = eb + es
            s = acc.get(e, 0) + cb * cs
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
    return acc


def psub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def pneg(a):
    return {e: -c for e, c in a.items()}


def pmul(a, b):
    if not a or not b:
        return {}
    if len(b) == 1:
        (eb, cb), = b.items()
        return {e + eb: c * cb for e, c in a.items()}
    if len(a) == 1:
        (ea, ca), = a.items()
        return {e + ea: c * ca for e, c in b.items()}
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def pscale(a, k):
    if k == 0:
        return {}
    return {e: c * k for e, c in a.items()}


def ppow(a, n):
    assert n >= 0
    out = dict(PONE)
    for _ in range(n):
        out = pmul(out, a)
    return out


def pbar(a):
    """The bar involution q -> q^-1."""
    return {-e: c for e, c in a.items()}


def pq1(a):
    """Evaluate at q = 1 (an integer)."""
    return sum(a.values())


def _div_qminus1(a):
    """Exact division by (q - 1); requires a(1) = 0."""
    if not a:
        return {}
    hi, lo = max(a), min(a)
    out = {}
    b = 0
    for e in range(hi, lo, -1):
        b = a.get(e, 0) + b
        if b:
            out[e - 1] = b
    if a.get(lo, 0) + b != 0:
        raise ArithmeticError("not divisible by q - 1")
    return out


def pdiv_exact(a, b):
    """Exact division a / b in Z[q, q^-1]; raises ArithmeticError if inexact."""
    if not b:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not a:
        return {}
    rem = dict(a)
    lead_b = max(b)
    cb = b[lead_b]
    quot = {}
    while rem:
        lead_r = max(rem)
        cr = rem[lead_r]
        if cr % cb:
            raise ArithmeticError("inexact Laurent division (coefficient)")
        e = lead_r - lead_b
        c = cr // cb
        quot[e] = c
        for eb, cbb in b.items():
            ee = eb + e
            s = rem.get(ee, 0) - cbb * c
            if s:
                rem[ee] = s
            else:
                rem.pop(ee, None)
    return quot


def ptext(a):
    """Canonical text form: ascending exponents, 'coeff*q^exp' joined by ' + '."""
    if not a:
        return "0"
    return " + ".join("%d*q^%d" % (c, e) for e, c in sorted(a.items()))


_TERM_RE = re.compile(
    r"""^\s*(?P<sign>[+-])?\s*
        (?:
            (?P<coeff>\d+)\s*(?:\*\s*q(?:\^(?P<exp1>-?\d+))?)?
          | q(?:\^(?P<exp2>-?\d+))?
        )\s*$""",
    re.VERBOSE,
)


def pparse(text):
    """Parse Laurent polynomial text: '1*q^-1 + 1*q^1', 'q^2', '-3', '2*q'."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if s.strip() == "0":
        return {}
    # split into signed terms: insert separators before +/- that start a term
    parts = re.split(r"(?<![*^eE+\-])\s*([+-])", " " + s)
    # re.split keeps separators; stitch sign+term pairs
    terms = []
    pending_sign = "+"
    for chunk in parts:
        if chunk in ("+", "-"):
            pending_sign = chunk
            continue
        if not chunk.strip():
            continue
        terms.append(pending_sign + chunk)
        pending_sign = "+"
    out = {}
    for t in terms:
        m = _TERM_RE.match(t)
        if not m:
            raise ValueError("cannot parse Laurent term %r in %r" % (t, text))
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coeff") is not None:
            coeff = sign * int(m.group("coeff"))
            exp = m.group("exp1")
            e = int(exp) if exp is not None else (0 if "q" not in t else 1)
            # 'c*q' with no ^ means exponent 1; bare 'c' means exponent 0
            if "q" not in t:
                e = 0
            elif exp is None:
                e = 1
        else:
            coeff = sign
            exp = m.group("exp2")
            e = int(exp) if exp is not None else 1
        s0 = out.get(e, 0) + coeff
        if s0:
            out[e] = s0
        else:
            out.pop(e, None)
    return out


# ---------------------------------------------------------------------------


class LaurentPoly:
    """An element of Z[q, q^-1]; immutable by convention."""

    __slots__ = ("d",)

    def __init__(self, d=None):
        self.d = pnorm(dict(d)) if d else {}

    # constructors
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls(PONE)

    @classmethod
    def q(cls, exp=1, coeff=1):
        return cls(pmono(coeff, exp))

    @classmethod
    def from_int(cls, n):
        return cls(pmono(n, 0))

    @classmethod
    def parse(cls, text):
        return cls(pparse(text))

    # ring ops
    def __add__(self, other):
        return LaurentPoly(padd(self.d, _coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return LaurentPoly(psub(self.d, _coerce(other)))

    def __rsub__(self, other):
        return LaurentPoly(psub(_coerce(other), self.d))

    def __mul__(self, other):
        return LaurentPoly(pmul(self.d, _coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return LaurentPoly(pneg(self.d))

    def __pow__(self, n):
        return LaurentPoly(ppow(self.d, n))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.d == other.d
        if isinstance(other, int):
            return self.d == pmono(other, 0)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.d.items()))

    def __bool__(self):
        return bool(self.d)

    def exact_div(self, other):
        return LaurentPoly(pdiv_exact(self.d, _coerce(other)))

    def bar(self):
        return LaurentPoly(pbar(self.d))

    def at_one(self):
        return pq1(self.d)

    def min_exp(self):
        return min(self.d) if self.d else 0

    def max_exp(self):
        return max(self.d) if self.d else 0

    def __str__(self):
        return ptext(self.d)

    def __repr__(self):
        return "LaurentPoly(%s)" % ptext(self.d)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x.d
    if isinstance(x, int):
        return pmono(x, 0)
    if isinstance(x, dict):
        return x
    raise TypeError("cannot coerce %r to a Laurent polynomial" % (x,))


# ---------------------------------------------------------------------------
# quantum integers and graded dimensions

_qfact_cache = [dict(PONE)]


def qint_d(n):
    """[n] = q^(n-1) + q^(n-3) + ... + q^(1-n) as a raw dict; [-n] = -[n]."""
    if n == 0:
        return {}
    if n < 0:
        return pneg(qint_d(-n))
    return {n - 1 - 2 * t: 1 for t in range(n)}


def qfact_d(n):
    assert n >= 0, "q-factorial of a negative integer"
    while len(_qfact_cache) <= n:
        k = len(_qfact_cache)
        _qfact_cache.append(pmul(_qfact_cache[k - 1], qint_d(k)))
    return dict(_qfact_cache[n])


_qbinom_cache = {}


def qbinom_d(n, k):
    """Symmetric q-binomial as a raw dict; 0 when k < 0 or k > n."""
    if k < 0 or k > n:
        return {}
    key = (n, k)
    got = _qbinom_cache.get(key)
    if got is None:
        # exact by construction; a failed division here is an internal error
        num = qfact_d(n)
        got = pdiv_exact(pdiv_exact(num, qfact_d(k)), qfact_d(n - k))
        _qbinom_cache[key] = got
    return dict(got)


def qbinom_s_d(n, k):
    """q-binomial extended to any integer upper argument, as a raw dict.

    Defined by the product formula [n; k] = prod_{s=1..k} [n-s+1]/[s], so
    for n < 0 it equals (-1)^k [k-n-1; k] and is nonzero.
    """
    if k < 0:
        return {}
    if n >= 0:
        return qbinom_d(n, k)
    got = qbinom_d(k - n - 1, k)
    return pneg(got) if k % 2 else got


def qint(n):
    return LaurentPoly(qint_d(n))


def qfact(n):
    return LaurentPoly(qfact_d(n))


def qbinom(n, k):
    return LaurentPoly(qbinom_d(n, k))


def gdim_proj(n):
    """Graded dimension of the cohomology of projective n-space: [n+1].

    n = -1 gives 0 (empty space), matching the boundary cases of the
    divided-power identities this package verifies.
    """
    return qint(n + 1)


def gdim_grassmannian(k, n):
    """Graded dimension of the cohomology of the Grassmannian G(k, n)."""
    return qbinom(n, k)


def shift_value(a, b):
    """Scalar shadow of a homological shift [a] and internal twist {b}."""
    return LaurentPoly({b: -1 if a % 2 else 1})


def gdim_proj_equivariant(n):
    """Equivariant graded dimension of P^n: sum of (-1)^(-n+2t) q^(n-2t)."""
    assert n >= -1
    out = {}
    for t in range(n + 1):
        out = padd(out, shift_value(-n + 2 * t, n - 2 * t).d)
    return LaurentPoly(out)


def bar_involution(p):
    return p.bar() if isinstance(p, LaurentPoly) else pbar(p)


def evaluate_at_one(p):
    return p.at_one() if isinstance(p, LaurentPoly) else pq1(p)


# ---------------------------------------------------------------------------
# fraction field


class RationalFunction:
    """A lazy fraction num/den over Z[q, q^-1].

    No polynomial gcd is taken; we only strip the integer content and a
    power of q from both sides to keep sizes in check.  Equality is by
    cross-multiplication, which is exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        nd = _coerce(num)
        dd = _coerce(den) if den is not None else dict(PONE)
        if not dd:
            raise ZeroDivisionError("rational function with zero denominator")
        if not nd:
            dd = dict(PONE)
        else:
            # strip common q-power and integer content; flip sign so the
            # denominator's lowest coefficient is positive
            shift = min(min(nd), min(dd))
            if shift:
                nd = {e - shift: c for e, c in nd.items()}
                dd = {e - shift: c for e, c in dd.items()}
            from math import gcd
            g = 0
            for c in nd.values():
                g = gcd(g, c)
            for c in dd.values():
                g = gcd(g, c)
            if g > 1:
                nd = {e: c // g for e, c in nd.items()}
                dd = {e: c // g for e, c in dd.items()}
        if dd[min(dd)] < 0:
            nd = pneg(nd)
            dd = pneg(dd)
        self.num = nd
        self.den = dd

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    def __add__(self, other):
        other = _as_rat(other)
        if self.den == other.den:
            return RationalFunction(padd(self.num, other.num), dict(self.den))
        return RationalFunction(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rat(other)
        return RationalFunction(
            psub(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    def __rsub__(self, other):
        return _as_rat(other).__sub__(self)

    def __mul__(self, other):
        other = _as_rat(other)
        return RationalFunction(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(pmul(self.num, other.den), pmul(self.den, other.num))

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num = pneg(self.num)
        r.den = dict(self.den)
        return r

    def __eq__(self, other):
        other = _as_rat(other)
        return pmul(self.num, other.den) == pmul(other.num, self.den)

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable (lazy normal form)")

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        try:
            pdiv_exact(self.num, self.den)
            return True
        except ArithmeticError:
            return False

    def to_poly(self):
        return LaurentPoly(pdiv_exact(self.num, self.den))

    def at_one(self):
        num, den = self.num, self.den
        # cancel removable (q - 1) factors exactly before evaluating
        while pq1(den) == 0:
            if pq1(num) != 0:
                raise ZeroDivisionError("pole at q = 1")
            num = _div_qminus1(num)
            den = _div_qminus1(den)
        return Fraction(pq1(num), pq1(den))

    def __str__(self):
        if self.den == PONE:
            return ptext(self.num)
        return "(%s) / (%s)" % (ptext(self.num), ptext(self.den))

    __repr__ = __str__


def _as_rat(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (LaurentPoly, int, dict)):
        return RationalFunction(_coerce(x))
    raise TypeError("cannot coerce %r to a rational function" % (x,))
