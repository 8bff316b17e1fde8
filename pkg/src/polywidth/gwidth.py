"""Gaussian width estimation and spectral-norm machinery.

The Gaussian width of a point set is the expected supremum, over the set, of
the inner product with a standard Gaussian vector.  Here the sets are either
explicit point lists or images of the Boolean hypercube under a polynomial
map whose coordinates are hypergraph polynomials; the inner supremum is
computed exactly by exhaustive enumeration (hypercube dimension capped at
24), never heuristically, and the outer expectation by seeded Monte Carlo.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import mc
from .errors import BudgetExceededError
from .hypergraph import Hypergraph
from .sparse import SparseMatrix

__all__ = [
    "PolyMap",
    "SpectralNormEstimate",
    "TjResult",
    "gw_exact_inner",
    "gw_estimate",
    "spectral_norm",
    "gaussian_series_norm",
    "tj_ratio_experiment",
    "width_bound",
    "random_matching_matrices",
    "identity_map",
]

ENUM_BITS_LIMIT = 24
_BLOCK_BITS = 12


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map R^n -> R^k with hypergraph-polynomial coordinates."""

    components: tuple

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("need at least one component")
        n = components[0].n
        if any(h.n != n for h in components):
            raise ValueError("components must share the vertex count")
        object.__setattr__(self, "components", components)

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return max(h.max_edge_size for h in self.components)

    @property
    def multiplicity(self) -> int:
        return max(h.max_degree for h in self.components)


def _edge_mask(edge, n: int) -> int:
    # enumeration index i encodes x_j = (i >> (n-1-j)) & 1, so numeric order
    # of indices is lexicographic order of the binary vectors
    mask = 0
    for v in edge:
        mask |= 1 << (n - 1 - v)
    return mask


def _columns(pm: PolyMap, idx: np.ndarray) -> np.ndarray:
    """Evaluate all components on the hypercube points with the given indices."""
    out = np.zeros((len(idx), pm.k), dtype=np.float64)
    n = pm.n
    for c, h in enumerate(pm.components):
        col = np.zeros(len(idx), dtype=np.int64)
        for e in h.edges:
            mask = _edge_mask(e, n)
            col += (idx & mask) == mask
        out[:, c] = col
    return out


def _point_from_index(i: int, n: int) -> np.ndarray:
    return np.array([(i >> (n - 1 - j)) & 1 for j in range(n)], dtype=np.uint8)


def _iter_blocks(domain, block_bits=_BLOCK_BITS):
    """Yield (start_index, point matrix) blocks of the optimization domain."""
    if isinstance(domain, PolyMap):
        if domain.n > ENUM_BITS_LIMIT:
            raise BudgetExceededError(
                f"hypercube enumeration capped at n = {ENUM_BITS_LIMIT}"
            )
        total = 1 << domain.n
        step = 1 << min(block_bits, domain.n)
        for start in range(0, total, step):
            idx = np.arange(start, min(start + step, total), dtype=np.int64)
            yield start, _columns(domain, idx)
    else:
        pts = np.asarray(domain, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("explicit domain must be a nonempty 2d point array")
        yield 0, pts


def _domain_k(domain) -> int:
    if isinstance(domain, PolyMap):
        return domain.k
    pts = np.asarray(domain, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("explicit domain must be a nonempty 2d point array")
    return pts.shape[1]


def gw_exact_inner(domain, g):
    """Exact sup over the domain of <psi(x), g>, with the maximizing point.

    Ties break to the lexicographically smallest point.  The domain is a
    PolyMap (optimized over {0,1}^n by exhaustive enumeration) or an
    explicit point array of shape (num_points, k).
    """
    g = np.asarray(g, dtype=np.float64)
    is_map = isinstance(domain, PolyMap)
    best_val = -math.inf
    best_idx = -1
    best_point = None
    for start, block in _iter_blocks(domain):
        scores = block @ g
        # strict comparisons keep the first (lexicographically smallest) maximizer
        local = int(np.argmax(scores))
        if is_map:
            if scores[local] > best_val:
                best_val = float(scores[local])
                best_idx = start + local
        else:
            ties = np.flatnonzero(scores == scores[local])
            rows = block[ties]
            order = np.lexsort(rows.T[::-1])
            cand = rows[order[0]]
            if scores[local] > best_val or (
                scores[local] == best_val and tuple(cand) < tuple(best_point)
            ):
                best_val = float(scores[local])
                best_point = cand
    if is_map:
        return best_val, _point_from_index(best_idx, domain.n)
    return best_val, np.array(best_point, dtype=np.float64)


def gw_estimate(domain, samples: int, seed: int, threads: int = 1) -> mc.McEstimate:
    """Monte-Carlo Gaussian width: average of the exact inner supremum over
    independent standard Gaussian directions."""
    k = _domain_k(domain)
    blocks = None
    if not isinstance(domain, PolyMap):
        blocks = [np.asarray(domain, dtype=np.float64)]

    def value_fn(gen, count):
        g_mat = mc.normals(gen, (k, count))
        best = np.full(count, -np.inf)
        iterator = blocks if blocks is not None else (b for _, b in _iter_blocks(domain))
        for block in iterator:
            np.maximum(best, (block @ g_mat).max(axis=0), out=best)
        return best

    return mc.mc_estimate(value_fn, samples, seed, threads=threads, chunk=1024)


# --------------------------------------------------------------------------
# Spectral norms.


@dataclass(frozen=True)
class SpectralNormEstimate:
    value: float  # lower-biased power-iteration estimate
    upper_bound: float  # sqrt(max abs row sum * max abs col sum)
    converged: bool
    iterations: int

    def bracket(self):
        return (self.value, self.upper_bound)


def _gram_power_iteration(matvec, rmatvec, dim, tol, max_iters):
    v = np.full(dim, 1.0 / math.sqrt(dim))
    lam = -1.0
    for it in range(1, max_iters + 1):
        w = rmatvec(matvec(v))
        lam_new = float(v @ w)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0, it, True
        v = w / norm
        if lam >= 0.0 and abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return math.sqrt(max(lam_new, 0.0)), it, True
        lam = lam_new
    return math.sqrt(max(lam, 0.0)), max_iters, False


def spectral_norm(a, tol: float = 1e-9, max_iters: int = 10000) -> SpectralNormEstimate:
    """Largest singular value via power iteration on the Gram operator.

    Deterministic all-ones start; convergence when successive Rayleigh
    quotients differ by less than ``tol`` relatively.  The estimate is
    lower-biased; the returned upper bound brackets the true norm even
    when the iteration stops early.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(a, SparseMatrix):
        dim = a.dim
        if a.nnz == 0:
            return SpectralNormEstimate(0.0, 0.0, True, 0)
        row_sums = np.bincount(a.rows, weights=np.abs(a.vals), minlength=dim)
        col_sums = np.bincount(a.cols, weights=np.abs(a.vals), minlength=dim)
        upper = math.sqrt(float(row_sums.max()) * float(col_sums.max()))
        value, iters, conv = _gram_power_iteration(a.matvec, a.rmatvec, dim, tol, max_iters)
    else:
        dense = np.asarray(a, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError("expected a square matrix")
        dim = dense.shape[0]
        if not dense.any():
            return SpectralNormEstimate(0.0, 0.0, True, 0)
        upper = math.sqrt(
            float(np.abs(dense).sum(axis=1).max()) * float(np.abs(dense).sum(axis=0).max())
        )
        value, iters, conv = _gram_power_iteration(
            lambda x: dense @ x, lambda x: dense.T @ x, dim, tol, max_iters
        )
    return SpectralNormEstimate(min(value, upper), upper, conv, iters)


def gaussian_series_norm(dense: np.ndarray) -> float:
    """Spectral norm of a signed dense combination, by exact eigensolve.

    Power iteration from the all-ones vector is reserved for nonnegative
    matrices (where the start overlaps the dominant eigenvector); a signed
    series of matching matrices has the all-ones vector as an exact,
    usually non-dominant eigenvector, so it gets LAPACK instead.
    """
    dense = np.asarray(dense, dtype=np.float64)
    if np.array_equal(dense, dense.T):
        return float(np.abs(np.linalg.eigvalsh(dense)).max())
    return float(np.linalg.norm(dense, 2))


@dataclass(frozen=True)
class TjResult:
    lhs: mc.McEstimate  # E || sum_i g_i A_i ||
    rhs: float  # sqrt(log N) * sqrt(sum ||A_i||^2)
    ratio: float
    norms: tuple
    dim: int
    k: int


def tj_ratio_experiment(matrices, samples: int, seed: int, threads: int = 1) -> TjResult:
    """Ratio of the expected norm of a Gaussian matrix series to the
    sqrt(log N)-scaled root-sum-of-squares of the individual norms."""
    matrices = list(matrices)
    if not matrices:
        raise ValueError("need at least one matrix")
    dim = matrices[0].dim
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    if any(m.dim != dim for m in matrices):
        raise ValueError("matrices must share their dimension")
    k = len(matrices)

    norms = tuple(spectral_norm(m).value for m in matrices)
    rhs = math.sqrt(math.log(dim)) * math.sqrt(sum(v * v for v in norms))

    flat = np.concatenate([m.rows * dim + m.cols for m in matrices])
    vals = np.concatenate([m.vals.astype(np.float64) for m in matrices])
    which = np.concatenate([np.full(m.nnz, i, dtype=np.int64) for i, m in enumerate(matrices)])

    def value_fn(gen, count):
        out = np.empty(count)
        for i in range(count):
            g = mc.normals(gen, k)
            dense = np.bincount(flat, weights=g[which] * vals, minlength=dim * dim)
            dense = dense.reshape(dim, dim)
            out[i] = gaussian_series_norm(dense)
        return out

    lhs = mc.mc_estimate(value_fn, samples, seed, threads=threads, chunk=256)
    ratio = lhs.mean / rhs if rhs > 0 else 0.0
    return TjResult(lhs, rhs, ratio, norms, dim, k)


def width_bound(n: int, k: int, d: int, t: int) -> float:
    """The width bound n * t * sqrt(k * n^(1 - 1/ceil(d/2)) * log n).

    Constant factor one: consumers compare shapes and ratios, not levels.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if k < 1 or d < 1 or t < 0:
        raise ValueError("need k >= 1, d >= 1, t >= 0")
    exponent = 1.0 - 1.0 / math.ceil(d / 2)
    return n * t * math.sqrt(k * n**exponent * math.log(n))


def random_matching_matrices(dim: int, k: int, seed: int):
    """k adjacency matrices of random perfect matchings on [dim] (unit norm)."""
    if dim < 2 or dim % 2:
        raise ValueError("dim must be even and at least 2")
    gen = mc.stream(seed, 0)
    out = []
    for _ in range(k):
        perm = gen.permutation(dim)
        u, v = perm[0::2], perm[1::2]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        out.append(SparseMatrix.from_entries(dim, rows, cols))
    return out


def identity_map(n: int) -> PolyMap:
    """The identity map on {0,1}^n as n singleton-edge components."""
    return PolyMap([Hypergraph(n, ((i,),)) for i in range(n)])
