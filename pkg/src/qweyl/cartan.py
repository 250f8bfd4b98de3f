"""Simply-laced Cartan data, weights and braid words.

A simple graph on vertices 1..k determines a symmetric Cartan matrix
(2 on the diagonal, -1 for joined pairs, 0 otherwise).  Weights are stored
as vectors of pairings d_i = <lam, alpha_i>, optionally carrying a content
vector (c_1, ..., c_n) when the graph is the path on n-1 vertices; then
d_i = c_{i+1} - c_i.
"""

from __future__ import annotations

from dataclasses import dataclass


class SimpleGraph:
    def __init__(self, nvertices, edges):
        if nvertices < 1:
            raise ValueError("graph needs at least one vertex")
        self.n = nvertices
        es = set()
        for (a, b) in edges:
            if not (1 <= a <= nvertices and 1 <= b <= nvertices):
                raise ValueError("edge (%d, %d) out of vertex range 1..%d" % (a, b, nvertices))
            if a == b:
                raise ValueError("loops are not allowed: (%d, %d)" % (a, b))
            e = (min(a, b), max(a, b))
            if e in es:
                raise ValueError("duplicate edge: (%d, %d)" % e)
            es.add(e)
        self.edges = frozenset(es)

    @property
    def vertices(self):
        return range(1, self.n + 1)

    def adjacent(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    def __eq__(self, other):
        return isinstance(other, SimpleGraph) and self.n == other.n and self.edges == other.edges

    def __repr__(self):
        return "SimpleGraph(%d, %s)" % (self.n, sorted(self.edges))


def path_graph(k):
    return SimpleGraph(k, [(i, i + 1) for i in range(1, k)])


def d_graph(k):
    if k < 4:
        raise ValueError("D-type preset needs at least 4 vertices")
    edges = [(i, i + 1) for i in range(1, k - 1)] + [(k - 2, k)]
    return SimpleGraph(k, edges)


def parse_graph(text):
    """Parse the graph file format:

        vertices: 3
        edge: 1 2
        edge: 2 3

    or a preset name 'A<k>' / 'D<k>'.
    """
    s = text.strip()
    if "\n" not in s and ":" not in s:
        if s[:1] in ("A", "a") and s[1:].isdigit():
            return path_graph(int(s[1:]))
        if s[:1] in ("D", "d") and s[1:].isdigit():
            return d_graph(int(s[1:]))
        raise ValueError("unknown graph preset %r" % s)
    nverts = None
    edges = []
    for lineno, line in enumerate(s.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if nverts is not None:
                raise ValueError("line %d: repeated vertices line" % lineno)
            nverts = int(line.split(":", 1)[1])
        elif line.startswith("edge:"):
            if nverts is None:
                raise ValueError("line %d: edge before vertices" % lineno)
            parts = line.split(":", 1)[1].split()
            if len(parts) != 2:
                raise ValueError("line %d: edge needs two endpoints" % lineno)
            edges.append((int(parts[0]), int(parts[1])))
        else:
            raise ValueError("line %d: unrecognized line %r" % (lineno, line))
    if nverts is None:
        raise ValueError("missing vertices line")
    return SimpleGraph(nverts, edges)


class CartanData:
    """A graph plus its Cartan matrix, indexed by vertices 1..k."""

    def __init__(self, graph):
        self.graph = graph
        self.rank = graph.n

    def entry(self, i, j):
        if i == j:
            return 2
        return -1 if self.graph.adjacent(i, j) else 0

    def matrix(self):
        k = self.rank
        return tuple(tuple(self.entry(i, j) for j in range(1, k + 1)) for i in range(1, k + 1))

    def adjacent(self, i, j):
        return self.graph.adjacent(i, j)

    @property
    def vertices(self):
        return self.graph.vertices

    def __eq__(self, other):
        return isinstance(other, CartanData) and self.graph == other.graph


def cartan_from_graph(graph):
    return CartanData(graph)


@dataclass(frozen=True)
class Weight:
    """Pairing vector d with d_i = <lam, alpha_i>, plus optional content.

    When content is present the underlying graph must be the path on
    len(content) - 1 vertices and d_i = content[i] - content[i-1] in
    0-based terms (vertex i separates slots i and i+1).
    """

    d: tuple
    content: tuple = None

    def __post_init__(self):
        if self.content is not None:
            n = len(self.content)
            if len(self.d) != n - 1:
                raise ValueError("pairing vector length must be len(content) - 1")
            for i in range(n - 1):
                if self.d[i] != self.content[i + 1] - self.content[i]:
                    raise ValueError("pairing vector inconsistent with content")

    @classmethod
    def from_content(cls, content):
        content = tuple(content)
        d = tuple(content[i + 1] - content[i] for i in range(len(content) - 1))
        return cls(d, content)

    def pairing(self, i):
        return self.d[i - 1]


def pairing(w, i):
    return w.pairing(i)


def reflect(w, cartan, i):
    """The simple reflection s_i: d_j -> d_j - d_i * C_ij.

    With content present this swaps slots i and i+1.
    """
    di = w.d[i - 1]
    d = tuple(w.d[j - 1] - di * cartan.entry(i, j) for j in cartan.vertices)
    if w.content is None:
        return Weight(d)
    c = list(w.content)
    c[i - 1], c[i] = c[i], c[i - 1]
    return Weight(d, tuple(c))


# ---------------------------------------------------------------------------
# braid words: tuples of nonzero ints, +i for sigma_i, -i for its inverse


def free_reduce(word):
    """Cancel adjacent sigma_i sigma_i^{-1} pairs until none remain."""
    out = []
    for g in word:
        if g == 0:
            raise ValueError("0 is not a braid generator")
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def braid_inverse(word):
    return tuple(-g for g in reversed(word))


def apply_braid_to_weight(word, w, cartan):
    """Apply the underlying Weyl word (signs ignored: s_i = s_i^{-1})."""
    for g in word:
        w = reflect(w, cartan, abs(g))
    return w
