"""Generalized birthday paradox for random maps against a maximal matching.

A uniform random map h: [m] -> [n] scores phi(h) = sum over matching edges S
of the number of r-subsets of positions whose images half-cover S; h is
"s-good" when 1 <= phi(h) <= s.  With the default constants

    C_r = (6 e r)^(1/r),   m = floor(C_r n^(1-1/r)),   s = 200 * 4^r,

and n >= n_0(r) = 4 (C_r r)^r, a uniform map is s-good with probability at
least 1/2: phi is zero with probability at most 1/4, and by Markov (using
E[phi] <= 50 * 4^r, via domination of the occupancy histogram by independent
Poisson(m/n) bins) phi exceeds s with probability at most 1/4.  The module
estimates these quantities by seeded Monte Carlo and checks the Poisson
domination numerically.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels, mc
from .hypergraph import Hypergraph, complete_to_maximal_matching
from .tensorlift import default_goodness_bound

__all__ = [
    "BirthdayParams",
    "default_constants",
    "default_matching",
    "estimate_good_probability",
    "mean_phi",
    "phi_statistics",
    "PhiStatistics",
    "poisson_pmf_table",
    "sample_poisson",
    "poisson_domination_check",
    "DominationReport",
    "DominationRow",
    "poisson_sum_chisquare",
    "ChiSquareReport",
]


def growth_constant(r: int) -> float:
    """C_r = (6 e r)^(1/r)."""
    return (6.0 * math.e * r) ** (1.0 / r)


def minimum_n(r: int) -> float:
    """n_0(r) = 4 (C_r r)^r = 24 e r^(r+1)."""
    return 4.0 * (growth_constant(r) * r) ** r


def default_constants(r: int):
    """(C_r, s, n_0) for a given r."""
    if r < 1:
        raise ValueError("r must be positive")
    return growth_constant(r), default_goodness_bound(r), minimum_n(r)


@dataclass(frozen=True)
class BirthdayParams:
    """r, n, and the derived defaults m = floor(C_r n^(1-1/r)), s = 200*4^r."""

    r: int
    n: int
    m: int = 0  # 0 means the default
    s: int = 0

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be positive")
        if self.n < 2 * self.r:
            raise ValueError("n must be at least 2r")
        if self.m == 0:
            object.__setattr__(
                self, "m", int(growth_constant(self.r) * self.n ** (1.0 - 1.0 / self.r))
            )
        if self.s == 0:
            object.__setattr__(self, "s", default_goodness_bound(self.r))
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.s < 1:
            raise ValueError("s must be positive")

    @property
    def c_r(self) -> float:
        return growth_constant(self.r)

    @property
    def n_0(self) -> float:
        return minimum_n(self.r)


def default_matching(n: int, r: int) -> Hypergraph:
    """Greedy maximal matching of 2r-blocks on [n]."""
    return complete_to_maximal_matching(Hypergraph(n, ()), r)


@dataclass(frozen=True)
class PhiStatistics:
    good_probability: mc.McEstimate
    mean_phi: mc.McEstimate
    tail_probability: mc.McEstimate  # Pr[phi > s]


def phi_statistics(
    params: BirthdayParams, matching=None, samples=10000, seed=0, threads=1
) -> PhiStatistics:
    """One sampling pass returning Pr[s-good], E[phi], and Pr[phi > s]."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if matching is None:
        matching = default_matching(params.n, params.r)
    edges = np.array(matching.edges, dtype=np.int64)

    def value_fn(gen, count):
        maps = gen.integers(0, params.n, size=(count, params.m))
        phis = _kernels.phi_batch(maps, edges, params.n, params.r)
        good = ((phis >= 1) & (phis <= params.s)).astype(np.float64)
        tail = (phis > params.s).astype(np.float64)
        return np.stack([good, phis.astype(np.float64), tail], axis=1)

    means, ses = mc.run_chunked(value_fn, samples, seed, threads=threads)
    return PhiStatistics(
        good_probability=mc.McEstimate(float(means[0]), float(ses[0]), samples, seed),
        mean_phi=mc.McEstimate(float(means[1]), float(ses[1]), samples, seed),
        tail_probability=mc.McEstimate(float(means[2]), float(ses[2]), samples, seed),
    )


def estimate_good_probability(
    params: BirthdayParams, matching=None, samples=10000, seed=0, threads=1
) -> mc.McEstimate:
    """Monte-Carlo Pr[1 <= phi(h) <= s] for uniform random h."""
    return phi_statistics(params, matching, samples, seed, threads).good_probability


def mean_phi(
    params: BirthdayParams, matching=None, samples=10000, seed=0, threads=1
) -> mc.McEstimate:
    """Monte-Carlo E[phi(h)]."""
    return phi_statistics(params, matching, samples, seed, threads).mean_phi


# --------------------------------------------------------------------------
# Poisson machinery.


def poisson_pmf_table(mu: float, tail: float = 1e-15) -> np.ndarray:
    """pmf values e^-mu mu^l / l! for l = 0.. until the tail mass drops below
    ``tail``.  Intended for mu <= 30."""
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    pmf = [math.exp(-mu)]
    total = pmf[0]
    ell = 0
    while 1.0 - total > tail:
        ell += 1
        pmf.append(pmf[-1] * mu / ell)
        total += pmf[-1]
        if ell > 10000:
            raise RuntimeError("pmf table did not converge")
    return np.array(pmf)


def sample_poisson(gen: np.random.Generator, mu: float, size) -> np.ndarray:
    """Poisson draws by inversion of the cumulative density."""
    cdf = np.cumsum(poisson_pmf_table(mu))
    u = gen.random(size)
    return np.searchsorted(cdf, u).astype(np.int64)


@dataclass(frozen=True)
class DominationRow:
    functional: str
    lhs: mc.McEstimate  # E[Phi(exact histogram)]
    rhs: mc.McEstimate  # E[Phi(independent Poisson bins)]
    margin: float  # lhs.mean - 2*rhs.mean
    tolerance: float  # 3 * combined SE
    holds: bool


@dataclass(frozen=True)
class DominationReport:
    rows: tuple

    @property
    def all_hold(self) -> bool:
        return all(row.holds for row in self.rows)


def poisson_domination_check(
    params: BirthdayParams, matching=None, samples=100000, seed=0, threads=1
) -> DominationReport:
    """Check E[Phi(X)] <= 2 E[Phi(Y)] for the two goodness functionals.

    X is the exact occupancy histogram of a uniform random map [m] -> [n];
    Y has independent Poisson(m/n) bins.  Phi is either the indicator that
    phi vanishes ("psi") or phi itself ("chi").  The inequality is declared
    to hold when lhs <= 2*rhs + 3*(combined standard error).
    """
    if matching is None:
        matching = default_matching(params.n, params.r)
    edges = np.array(matching.edges, dtype=np.int64)
    mu = params.m / params.n

    def exact_fn(gen, count):
        maps = gen.integers(0, params.n, size=(count, params.m))
        phis = _kernels.phi_batch(maps, edges, params.n, params.r)
        return np.stack([(phis == 0).astype(np.float64), phis.astype(np.float64)], axis=1)

    def poisson_fn(gen, count):
        hists = sample_poisson(gen, mu, (count, params.n))
        phis = _kernels.phi_hist_batch(hists, edges, params.r)
        return np.stack([(phis == 0).astype(np.float64), phis.astype(np.float64)], axis=1)

    x_means, x_ses = mc.run_chunked(exact_fn, samples, seed, threads=threads)
    # Independent stream for the Poisson side.
    y_means, y_ses = mc.run_chunked(poisson_fn, samples, seed + 1, threads=threads)

    rows = []
    for idx, name in enumerate(("psi", "chi")):
        lhs = mc.McEstimate(float(x_means[idx]), float(x_ses[idx]), samples, seed)
        rhs = mc.McEstimate(float(y_means[idx]), float(y_ses[idx]), samples, seed + 1)
        margin = lhs.mean - 2.0 * rhs.mean
        tol = 3.0 * math.hypot(lhs.std_error, 2.0 * rhs.std_error)
        rows.append(DominationRow(name, lhs, rhs, margin, tol, margin <= tol))
    return DominationReport(tuple(rows))


@dataclass(frozen=True)
class ChiSquareReport:
    statistic: float
    dof: int
    p_value: float
    significance: float
    passed: bool


def poisson_sum_chisquare(
    mu_a: float, mu_b: float, samples=100000, seed=0, significance=1e-3, min_expected=5.0
) -> ChiSquareReport:
    """Goodness-of-fit of sampled Y_a + Y_b against a single Poisson(mu_a+mu_b).

    Bins with expected count below ``min_expected`` are lumped into the tail.
    """
    gen = mc.stream(seed, 0)
    draws = sample_poisson(gen, mu_a, samples) + sample_poisson(gen, mu_b, samples)
    pmf = poisson_pmf_table(mu_a + mu_b)
    expected = pmf * samples
    # Lump the tail so every bin has enough mass.
    cut = len(expected)
    while cut > 1 and expected[cut - 1 :].sum() < min_expected:
        cut -= 1
    exp_binned = np.concatenate([expected[: cut - 1], [expected[cut - 1 :].sum()]])
    exp_binned[-1] += samples - expected.sum()  # truncated pmf mass
    obs = np.bincount(np.minimum(draws, cut - 1), minlength=cut).astype(np.float64)
    stat = float(((obs - exp_binned) ** 2 / exp_binned).sum())
    dof = cut - 1
    p_value = float(stats.chi2.sf(stat, dof))
    return ChiSquareReport(stat, dof, p_value, significance, p_value >= significance)
