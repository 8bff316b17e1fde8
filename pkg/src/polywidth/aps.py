"""Arithmetic-progression hypergraphs over Z/NZ.

For prime N and 3 <= k <= N, the full k-AP hypergraph has one edge per
unordered proper k-term progression: ordered starts (a, b) with b != 0 pair
up with their reversals (a + (k-1)b, -b), giving N(N-1)/2 edges as a
multiset (edges whose vertex sets coincide stay as parallel edges, so twice
the polynomial of the hypergraph equals the ordered progression count).
"""

import math
from dataclasses import dataclass

from . import mc
from .hypergraph import Hypergraph

__all__ = [
    "ApParams",
    "ap_hypergraph",
    "ap_hypergraph_loose",
    "fixed_difference_hypergraph",
    "ordered_ap_count",
    "pair_incidence_profile",
    "two_transitivity_check",
    "gradient_hypergraphs",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class ApParams:
    """Cyclic group size N and progression length k."""

    N: int
    k: int

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("N must be at least 3")
        if self.k < 2:
            raise ValueError("k must be at least 2")


def ap_hypergraph(params: ApParams) -> Hypergraph:
    """Unordered proper k-AP hypergraph on Z/NZ; exact for prime N, k <= N."""
    N, k = params.N, params.k
    if not _is_prime(N):
        raise ValueError("N must be prime (use ap_hypergraph_loose otherwise)")
    if not 3 <= k <= N:
        raise ValueError("need 3 <= k <= N")
    edges = []
    for b in range(1, N):
        partner_b = N - b
        for a in range(N):
            partner_a = (a + (k - 1) * b) % N
            # keep one representative per {(a, b), (partner_a, -b)} orbit
            if (b, a) > (partner_b, partner_a):
                continue
            edges.append(tuple(sorted((a + t * b) % N for t in range(k))))
    return Hypergraph(N, edges)


def ap_hypergraph_loose(params: ApParams) -> Hypergraph:
    """Composite-N variant: one edge per orbit whose k terms are distinct.

    No exactness guarantees; counts and incidences may vary with N's factors.
    """
    N, k = params.N, params.k
    edges = []
    for b in range(1, N):
        partner_b = N - b
        for a in range(N):
            terms = [(a + t * b) % N for t in range(k)]
            if len(set(terms)) != k:
                continue
            partner_a = terms[-1]
            if (b, a) > (partner_b, partner_a):
                continue
            edges.append(tuple(sorted(terms)))
    return Hypergraph(N, edges)


def fixed_difference_hypergraph(params: ApParams, y: int) -> Hypergraph:
    """The N progressions {x, x+y, ..., x+(k-1)y}, one per starting point."""
    N, k = params.N, params.k
    y %= N
    if y == 0:
        raise ValueError("difference y must be nonzero")
    if not _is_prime(N):
        raise ValueError("N must be prime")
    if k > N:
        raise ValueError("need k <= N")
    edges = [tuple(sorted((x + t * y) % N for t in range(k))) for x in range(N)]
    return Hypergraph(N, edges)


def ordered_ap_count(bits, k: int) -> int:
    """Brute-force ordered count: pairs (a, b), b != 0, with the whole
    progression a, a+b, ..., a+(k-1)b inside the support of ``bits``."""
    N = len(bits)
    count = 0
    for b in range(1, N):
        for a in range(N):
            if all(bits[(a + t * b) % N] for t in range(k)):
                count += 1
    return count


def pair_incidence_profile(h: Hypergraph):
    """Edge counts per unordered vertex pair: (max count, dict of counts)."""
    table = {}
    for e in h.edges:
        for i in range(len(e)):
            for j in range(i + 1, len(e)):
                key = (e[i], e[j])
                table[key] = table.get(key, 0) + 1
    return (max(table.values()) if table else 0), table


def two_transitivity_check(params: ApParams, trials: int, seed: int) -> bool:
    """Random affine maps sending one vertex pair to another must map edges
    to edges.  Returns True iff all trials pass."""
    N = params.N
    if not _is_prime(N):
        raise ValueError("N must be prime")
    h = ap_hypergraph(params)
    edge_sets = {e for e in h.edges}
    gen = mc.stream(seed, 0)
    for _ in range(trials):
        a, b = gen.choice(N, size=2, replace=False)
        c, d = gen.choice(N, size=2, replace=False)
        scale = ((int(d) - int(c)) * pow(int(b) - int(a), -1, N)) % N
        mapped = {v: (int(c) + scale * (v - int(a))) % N for v in range(N)}
        if mapped[int(a)] != int(c) or mapped[int(b)] != int(d):
            return False
        for e in h.edges:
            if tuple(sorted(mapped[v] for v in e)) not in edge_sets:
                return False
    return True


def gradient_hypergraphs(h: Hypergraph):
    """The n derived hypergraphs: H_i drops vertex i from each edge containing it.

    The polynomial of H_i is the i-th partial derivative of the polynomial
    of H (H uniform), and the degree of H_i is at most the maximum pair
    incidence of H.
    """
    if not h.is_uniform():
        raise ValueError("hypergraph must be uniform")
    edge_lists = [[] for _ in range(h.n)]
    for e in h.edges:
        for i in e:
            edge_lists[i].append(tuple(v for v in e if v != i))
    return [Hypergraph(h.n, edges) for edges in edge_lists]
