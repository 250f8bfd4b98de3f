"""Term rewriting on formal E/F words anchored at a weight.

Words are compositions: the textual rightmost letter acts first on the
anchor weight.  Four oriented rules simplify anchored Z[q,q^-1]-linear
combinations of words:

  merge        E_i^(r1) E_i^(r2)  ->  [r1+r2; r1] E_i^(r1+r2)   (F alike)
  commute      F_j E_i  ->  E_i F_j  for i != j;
               same-kind pairs with unjoined indices sort ascending
  straighten   E_i^(b) F_i^(a)  ->  sum_j [m-a+b; j] F_i^(a-j) E_i^(b-j)
               with m the pairing of the weight entering the site and the
               q-binomial extended to negative upper arguments
  serre        E_i^(a) E_j E_i^(b)  for joined i, j (middle power 1)
               ->  [a+b-1; b] E_i^(a+b) E_j  +  [a+b-1; a] E_j E_i^(a+b)

Words whose weight flow leaves valid contents act by zero and are dropped.
Every applied rule strictly decreases the word measure (disorder pairs,
serre patterns, letter count) lexicographically; this is asserted at each
step and guarantees termination under any rule priority.  Normal forms are
simplified, not canonical: exact equality of two sums is decided by the
matrix oracle (oracle_equal), not by comparing normal forms.
"""

from __future__ import annotations

import random
import re
import time
from collections import namedtuple
from dataclasses import dataclass

from .cartan import CartanData, Weight, path_graph
from .qalg import padd, pmul, pnorm, pparse, ptext, qbinom_d, qbinom_s_d
from .report import VerificationReport
from .tensor_rep import WeightModule, content_shift, content_valid

Letter = namedtuple("Letter", ["kind", "index", "power"])


def letter_text(letter):
    if letter.power == 1:
        return "%s%d" % (letter.kind, letter.index)
    return "%s%d^(%d)" % (letter.kind, letter.index, letter.power)


def apply_letter(w, cartan, letter):
    """Weight after E_i^(r) (kind 'E') or F_i^(r) (kind 'F') acts on w."""
    if letter.kind not in ("E", "F"):
        raise ValueError("kind must be 'E' or 'F', got %r" % (letter.kind,))
    r = letter.power if letter.kind == "E" else -letter.power
    d = tuple(w.d[j - 1] + r * cartan.entry(letter.index, j)
              for j in cartan.vertices)
    if w.content is None:
        return Weight(d)
    return Weight(d, content_shift(w.content, letter.kind, letter.index,
                                   letter.power))


@dataclass(frozen=True)
class FormalWord:
    """A word in E_i^(r), F_i^(r) read as a composition from the right."""

    source: Weight
    letters: tuple

    def weight_before(self, cartan, p):
        """The weight entering the letter at textual position p."""
        w = self.source
        for letter in reversed(self.letters[p + 1:]):
            w = apply_letter(w, cartan, letter)
        return w

    def target(self, cartan):
        return self.weight_before(cartan, -1)

    def is_null(self, cartan):
        """True when the weight flow leaves valid contents (acts by zero)."""
        w = self.source
        if w.content is None:
            return False
        if not content_valid(w.content):
            return True
        for letter in reversed(self.letters):
            w = apply_letter(w, cartan, letter)
            if not content_valid(w.content):
                return True
        return False

    def text(self):
        return " ".join(letter_text(l) for l in self.letters) or "1"


def measure(word, cartan):
    """Termination measure (disorder pairs, serre patterns, letters).

    Every rule strictly decreases this triple lexicographically:
    commute and straighten drop a disorder pair, serre drops a pattern
    without adding disorder, merge drops a letter without adding either.
    """
    ls = word.letters
    m1 = 0
    for p in range(len(ls)):
        for q in range(p + 1, len(ls)):
            a, b = ls[p], ls[q]
            if a.kind != b.kind:
                if a.kind == "F" and a.index != b.index:
                    m1 += 1
                elif a.kind == "E" and a.index == b.index:
                    m1 += 1
            elif (a.index > b.index
                  and not cartan.adjacent(a.index, b.index)):
                m1 += 1
    m2 = 0
    for p in range(len(ls) - 2):
        if _serre_pattern(cartan, ls[p], ls[p + 1], ls[p + 2]):
            m2 += 1
    return (m1, m2, len(ls))


def _serre_pattern(cartan, a, mid, b):
    return (a.kind == "E" and mid.kind == "E" and b.kind == "E"
            and a.index == b.index and mid.index != a.index
            and mid.power == 1 and cartan.adjacent(a.index, mid.index))


class FormalSum:
    """Anchored Z[q,q^-1]-combination of E/F words over one graph.

    Words may land in different targets; evaluation groups them by target
    block.  Null words and zero coefficients are dropped on construction.
    """

    __slots__ = ("cartan", "source", "terms")

    def __init__(self, cartan, source, terms=()):
        if len(source.d) != cartan.rank:
            raise ValueError("pairing vector length %d does not match rank %d"
                             % (len(source.d), cartan.rank))
        self.cartan = cartan
        self.source = source
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for word, coeff in items:
            if isinstance(word, tuple):
                word = FormalWord(source, word)
            if word.source != source:
                raise ValueError("word anchored at a different weight")
            coeff = pnorm(dict(coeff))
            if not coeff or word.is_null(cartan):
                continue
            cur = acc.get(word)
            if cur is None:
                acc[word] = coeff
            else:
                merged = padd(cur, coeff)
                if merged:
                    acc[word] = merged
                else:
                    del acc[word]
        self.terms = acc

    def is_zero(self):
        return not self.terms

    def words(self):
        return sorted(self.terms, key=lambda w: w.letters)

    def __eq__(self, other):
        return (isinstance(other, FormalSum) and self.cartan == other.cartan
                and self.source == other.source and self.terms == other.terms)

    def __add__(self, other):
        if self.cartan != other.cartan or self.source != other.source:
            raise ValueError("sums must share graph and source weight")
        items = list(self.terms.items()) + list(other.terms.items())
        return FormalSum(self.cartan, self.source, items)

    def scale(self, coeff):
        return FormalSum(self.cartan, self.source,
                         [(w, pmul(c, coeff)) for w, c in self.terms.items()])

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for word in self.words():
            ct = ptext(self.terms[word])
            if " + " in ct:
                ct = "(" + ct + ")"
            parts.append("%s * %s" % (ct, word.text()))
        return " + ".join(parts)

    def __repr__(self):
        return "FormalSum(%s @ %s)" % (self.to_text(), self.source.d,)


# ---------------------------------------------------------------------------
# parsing

_LETTER_RE = re.compile(r"^([EF])(\d+)(?:\^\((\d+)\))?$")


def _split_plus(s):
    """Split on '+' outside parentheses."""
    parts, cur, depth = [], [], 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced ')' in %r" % s)
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError("unbalanced '(' in %r" % s)
    parts.append("".join(cur))
    return parts


def _parse_letters(word_text, cartan, summand):
    tokens = word_text.split()
    if tokens == ["1"]:
        return ()
    letters = []
    for pos, tok in enumerate(tokens, 1):
        m = _LETTER_RE.match(tok)
        if not m:
            raise ValueError("syntax error at token %d of summand %d: %r"
                             % (pos, summand, tok))
        kind, index, power = m.group(1), int(m.group(2)), m.group(3)
        power = int(power) if power is not None else 1
        if power < 1:
            raise ValueError("divided power must be >= 1 at token %d of "
                             "summand %d" % (pos, summand))
        if not 1 <= index <= cartan.rank:
            raise ValueError("letter index %d outside graph vertices 1..%d "
                             "at token %d of summand %d"
                             % (index, cartan.rank, pos, summand))
        letters.append(Letter(kind, index, power))
    return tuple(letters)


def parse(text, weight, cartan):
    """Parse 'q^2 * E1^(2) + E2 F1' into a FormalSum anchored at `weight`.

    Each summand is an optional Laurent coefficient, '*', then a
    whitespace-separated word; '1' denotes the empty word.
    """
    if weight.content is not None and not content_valid(weight.content):
        raise ValueError("weight-incompatible anchor: negative content %r"
                         % (weight.content,))
    s = text.strip()
    if not s:
        raise ValueError("empty expression")
    if s == "0":
        return FormalSum(cartan, weight)
    terms = []
    for k, part in enumerate(_split_plus(s), 1):
        part = part.strip()
        if not part:
            raise ValueError("empty summand %d" % k)
        hit = re.search(r"[EF]\d", part)
        if hit:
            prefix, word_text = part[:hit.start()].rstrip(), part[hit.start():]
        else:
            # coefficient times the empty word, e.g. '(1*q^-1 + 1*q^1) * 1'
            star = part.rfind("*")
            if part == "1":
                prefix, word_text = "", "1"
            elif star >= 0 and part[star + 1:].strip() == "1":
                prefix, word_text = part[:star + 1], "1"
            else:
                raise ValueError("syntax error at token 1 of summand %d: %r"
                                 % (k, part))
        if prefix:
            if not prefix.endswith("*"):
                raise ValueError("expected '*' between coefficient and word "
                                 "in summand %d" % k)
            coeff = pparse(prefix[:-1].strip())
        else:
            coeff = {0: 1}
        terms.append((_parse_letters(word_text, cartan, k), coeff))
    return FormalSum(cartan, weight, terms)


def parse_weight(text, cartan):
    """'(2,1)' -> Weight: a content when the graph is the path on `rank`
    vertices and the tuple has rank+1 entries, else a pairing vector."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    try:
        vals = tuple(int(p) for p in s.replace(",", " ").split())
    except ValueError:
        raise ValueError("cannot parse weight %r" % text) from None
    if not vals:
        raise ValueError("empty weight %r" % text)
    rank = cartan.rank
    if len(vals) == rank + 1 and cartan.graph == path_graph(rank):
        return Weight.from_content(vals)
    if len(vals) == rank:
        return Weight(vals)
    raise ValueError("weight %r has %d entries; expected %d (pairings)%s"
                     % (text, len(vals), rank,
                        " or %d (content)" % (rank + 1)
                        if cartan.graph == path_graph(rank) else ""))


# ---------------------------------------------------------------------------
# the four rules

def _site_merge(word, cartan):
    ls = word.letters
    for p in range(len(ls) - 1):
        a, b = ls[p], ls[p + 1]
        if a.kind == b.kind and a.index == b.index:
            merged = Letter(a.kind, a.index, a.power + b.power)
            return [(qbinom_d(a.power + b.power, a.power),
                     ls[:p] + (merged,) + ls[p + 2:])]
    return None


def _site_commute(word, cartan):
    ls = word.letters
    for p in range(len(ls) - 1):
        a, b = ls[p], ls[p + 1]
        if a.kind == "F" and b.kind == "E" and a.index != b.index:
            return [({0: 1}, ls[:p] + (b, a) + ls[p + 2:])]
        if (a.kind == b.kind and a.index > b.index
                and not cartan.adjacent(a.index, b.index)):
            return [({0: 1}, ls[:p] + (b, a) + ls[p + 2:])]
    return None


def _site_straighten(word, cartan):
    ls = word.letters
    for p in range(len(ls) - 1):
        x, y = ls[p], ls[p + 1]
        if x.kind == "E" and y.kind == "F" and x.index == y.index:
            i, b, a = x.index, x.power, y.power
            m = word.weight_before(cartan, p + 1).pairing(i)
            outs = []
            for j in range(min(a, b) + 1):
                coeff = qbinom_s_d(m - a + b, j)
                if not coeff:
                    continue
                seg = []
                if a - j:
                    seg.append(Letter("F", i, a - j))
                if b - j:
                    seg.append(Letter("E", i, b - j))
                outs.append((coeff, ls[:p] + tuple(seg) + ls[p + 2:]))
            return outs
    return None


def _site_serre(word, cartan):
    ls = word.letters
    for p in range(len(ls) - 2):
        a, mid, b = ls[p], ls[p + 1], ls[p + 2]
        if _serre_pattern(cartan, a, mid, b):
            i, j, s = a.index, mid.index, a.power + b.power
            head, tail = ls[:p], ls[p + 3:]
            return [(qbinom_d(s - 1, b.power),
                     head + (Letter("E", i, s), Letter("E", j, 1)) + tail),
                    (qbinom_d(s - 1, a.power),
                     head + (Letter("E", j, 1), Letter("E", i, s)) + tail)]
    return None


_SITES = {
    "merge": _site_merge,
    "commute": _site_commute,
    "straighten": _site_straighten,
    "serre": _site_serre,
}

RULE_NAMES = ("merge", "commute", "straighten", "serre")


def _apply_sites(s, name, single, stats):
    """Rewrite every word of s at its leftmost `name` site.

    With single=False, newly produced words are rewritten too (fixpoint of
    this one rule); with single=True each word is rewritten at most once.
    Returns (new sum, fired?).  Asserts the measure drop at every step.
    """
    site_fn = _SITES[name]
    cartan = s.cartan
    work = dict(s.terms)
    queue = list(work)
    fired = False
    while queue:
        word = queue.pop()
        coeff = work.get(word)
        if not coeff:
            continue
        outs = site_fn(word, cartan)
        if outs is None:
            continue
        del work[word]
        fired = True
        if stats is not None:
            stats["steps"] = stats.get("steps", 0) + 1
        before = measure(word, cartan)
        for c, letters in outs:
            new_word = FormalWord(word.source, letters)
            after = measure(new_word, cartan)
            if not after < before:
                raise AssertionError(
                    "termination measure did not decrease under %s: "
                    "%s %s -> %s %s" % (name, before, word.text(),
                                        after, new_word.text()))
            if new_word.is_null(cartan):
                continue
            newc = pmul(coeff, c)
            cur = work.get(new_word)
            if cur is None:
                work[new_word] = newc
            else:
                merged = padd(cur, newc)
                if merged:
                    work[new_word] = merged
                else:
                    del work[new_word]
            if not single:
                queue.append(new_word)
    if not fired:
        return s, False
    return FormalSum(cartan, s.source, work), True


def rule_merge_divided(s, stats=None):
    """Adjacent same-index same-kind pairs merged into one divided power."""
    return _apply_sites(s, "merge", False, stats)[0]


def rule_commute_distant(s, stats=None):
    """Commuting adjacent pairs sorted: E left of F across distinct indices,
    unjoined same-kind pairs ascending."""
    return _apply_sites(s, "commute", False, stats)[0]


def rule_straighten_ef(s, stats=None):
    """Same-index E-then-F pairs expanded into F-then-E sums with local
    q-binomial coefficients."""
    return _apply_sites(s, "straighten", False, stats)[0]


def rule_serre(s, stats=None):
    """Leftmost joined-index triple split once per word."""
    return _apply_sites(s, "serre", True, stats)[0]


def normal_form(s, priority=None, stats=None, step_cap=100_000):
    """Apply the rules to fixpoint under a priority order (default
    merge > commute > straighten > serre).

    Raises RuntimeError with the stuck term if step_cap is exceeded, and
    AssertionError if any step fails to decrease the word measure.
    """
    order = tuple(priority) if priority is not None else RULE_NAMES
    if sorted(order) != sorted(RULE_NAMES):
        raise ValueError("priority must be a permutation of %s" % (RULE_NAMES,))
    if stats is None:
        stats = {}
    stats.setdefault("steps", 0)
    while True:
        for name in order:
            s2, fired = _apply_sites(s, name, name == "serre", stats)
            if fired:
                s = s2
                if stats["steps"] > step_cap:
                    raise RuntimeError("iteration cap exceeded; stuck term: %s"
                                       % s.to_text())
                break
        else:
            return s


# ---------------------------------------------------------------------------
# the matrix oracle

def letters_matrix(mod, content, letters):
    """Compose the letters right to left out of `content`, with no null
    shortcuts: invalid intermediate contents pass through 0-dim blocks."""
    op = mod.identity(content)
    for letter in reversed(letters):
        op = mod.divided(letter.kind, letter.index, letter.power, op.dst) @ op
    return op


def evaluate_blocks(s, mod):
    """Evaluate a sum to matrices, one per target content; zero blocks
    are dropped."""
    out = {}
    for word, coeff in s.terms.items():
        mat = letters_matrix(mod, word.source.content, word.letters).scale(coeff)
        if mat.is_zero():
            continue
        cur = out.get(mat.dst)
        out[mat.dst] = mat if cur is None else cur + mat
    return {tgt: m for tgt, m in out.items() if not m.is_zero()}


def oracle_equal(a, b, n, N, mod=None):
    """Decide exact equality of two sums on the (n, N) tensor module."""
    t0 = time.perf_counter()
    if a.cartan != b.cartan or a.source != b.source:
        raise ValueError("sums must share graph and source weight")
    src = a.source.content
    if (src is None or len(src) != n or sum(src) != N
            or not content_valid(src)):
        raise ValueError("unrealizable weight %r for (n, N) = (%d, %d)"
                         % (src, n, N))
    if a.cartan != CartanData(path_graph(n - 1)):
        raise ValueError("graph is not the path on %d vertices" % (n - 1))
    if mod is None:
        mod = WeightModule(n, N)
    blocks_a = evaluate_blocks(a, mod)
    blocks_b = evaluate_blocks(b, mod)
    failures = []
    for tgt in sorted(set(blocks_a) | set(blocks_b)):
        ma = blocks_a.get(tgt) or mod.zero_op(src, tgt)
        mb = blocks_b.get(tgt) or mod.zero_op(src, tgt)
        if ma != mb:
            failures.append({"weight": list(src),
                             "detail": "target block %s differs" % (tgt,)})
    return VerificationReport(
        "rewrite_soundness",
        {"n": n, "N": N, "source": list(src)},
        status="pass" if not failures else "fail",
        counterexample=failures[0] if failures else None,
        millis=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# randomized property sweeps

def _random_case(rng, n_max, N_max, max_len):
    n = rng.randint(2, n_max)
    N = rng.randint(1, N_max)
    cuts = sorted(rng.randint(0, N) for _ in range(n - 1))
    content = tuple(b - a for a, b in zip((0,) + tuple(cuts),
                                          tuple(cuts) + (N,)))
    # grow the word in application order (right to left), mostly keeping
    # the weight flow valid so the rules have work to do; about one letter
    # in ten is unconstrained, preserving null-word coverage
    letters = []
    cur = content
    for _ in range(rng.randint(1, max_len)):
        power = 1 if rng.random() < 0.7 else rng.randint(2, 3)
        options = []
        for kind in "EF":
            for i in range(1, n):
                nxt = content_shift(cur, kind, i, power)
                if content_valid(nxt):
                    options.append((kind, i, nxt))
        if options and rng.random() < 0.9:
            kind, i, cur = options[rng.randrange(len(options))]
        else:
            kind, i = rng.choice("EF"), rng.randint(1, n - 1)
            cur = content_shift(cur, kind, i, power)
        letters.append(Letter(kind, i, power))
    letters.reverse()
    return n, N, content, tuple(letters)


def verify_rewrite_soundness(count=1000, max_len=6, seed=0, n_max=4, N_max=5,
                             step_cap=100_000):
    """Random words: normal_form agrees with the raw matrix evaluation.

    Returns [soundness report, termination report]; the second records the
    measure bound held (max steps observed against the cap).
    """
    t0 = time.perf_counter()
    rng = random.Random(seed)
    mods = {}
    failures = []
    term_failures = []
    max_steps = 0
    for _ in range(count):
        n, N, content, letters = _random_case(rng, n_max, N_max, max_len)
        mod = mods.get((n, N))
        if mod is None:
            mod = mods[(n, N)] = WeightModule(n, N)
        s = FormalSum(mod.cartan, Weight.from_content(content),
                      [(letters, {0: 1})])
        stats = {}
        try:
            nf = normal_form(s, stats=stats, step_cap=step_cap)
        except (AssertionError, RuntimeError) as e:
            term_failures.append({"weight": list(content), "detail": str(e)})
            continue
        max_steps = max(max_steps, stats["steps"])
        raw = letters_matrix(mod, content, letters)
        want = {} if raw.is_zero() else {raw.dst: raw}
        got = evaluate_blocks(nf, mod)
        if got != want:
            failures.append({"weight": list(content),
                             "detail": "word %s" % " ".join(
                                 letter_text(l) for l in letters)})
    millis = (time.perf_counter() - t0) * 1000.0
    sound = VerificationReport(
        "rewrite_soundness",
        {"words": count, "max_len": max_len, "n_max": n_max, "N_max": N_max},
        status="pass" if not failures else "fail",
        counterexample=failures[0] if failures else None,
        millis=millis, seed=seed)
    term = VerificationReport(
        "rewrite_termination",
        {"words": count, "max_steps": max_steps, "cap": step_cap},
        status="pass" if not term_failures else "fail",
        counterexample=term_failures[0] if term_failures else None,
        millis=millis, seed=seed)
    return [sound, term]


def verify_rewrite_confluence(count=200, seed=1, n_max=4, N_max=5, max_len=6):
    """Randomized rule priorities give matrix-equal normal forms."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    mods = {}
    failures = []
    for _ in range(count):
        n, N, content, letters = _random_case(rng, n_max, N_max, max_len)
        mod = mods.get((n, N))
        if mod is None:
            mod = mods[(n, N)] = WeightModule(n, N)
        s = FormalSum(mod.cartan, Weight.from_content(content),
                      [(letters, {0: 1})])
        order = list(RULE_NAMES)
        rng.shuffle(order)
        base = evaluate_blocks(normal_form(s), mod)
        alt = evaluate_blocks(normal_form(s, priority=order), mod)
        if base != alt:
            failures.append({"weight": list(content),
                             "detail": "priority %s on word %s"
                             % (order, " ".join(letter_text(l)
                                                for l in letters))})
    return VerificationReport(
        "rewrite_confluence",
        {"words": count, "max_len": max_len, "n_max": n_max, "N_max": N_max},
        status="pass" if not failures else "fail",
        counterexample=failures[0] if failures else None,
        millis=(time.perf_counter() - t0) * 1000.0, seed=seed)
