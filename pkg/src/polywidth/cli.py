"""Command-line front end.

Every subcommand is a thin wrapper over one library operation, takes
long-form flags only, and emits a CSV (default) or JSON report that is
byte-identical across reruns with the same configuration, including under
different --threads values.  A config file (JSON object or key=value lines)
may supply any flag; explicit command-line flags win.

Exit codes: 0 success, 2 invalid configuration, 3 enumeration budget
exceeded, 4 verification failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, birthday, gwidth, mc, poly, randsets, tensorlift
from .aps import ApParams, ap_hypergraph, ordered_ap_count, pair_incidence_profile, two_transitivity_check
from .errors import BudgetExceededError
from .hypergraph import Hypergraph, load_hypergraph
from .randsets import RandomSetParams, TailQuery

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


@dataclass(frozen=True)
class Opt:
    name: str
    type: type
    default: object = None
    required: bool = False
    choices: tuple = ()
    help: str = ""


COMMON_OPTS = (
    Opt("seed", int, default=0, help="base seed for all randomness"),
    Opt("threads", int, default=1, help="worker threads (result-invariant)"),
    Opt("format", str, default="csv", choices=("csv", "json"), help="report format"),
    Opt("output", str, help="report path (default: stdout)"),
    Opt("config", str, help="config file supplying flags (JSON or key=value)"),
)


def _positive(name, value, minimum=1):
    if value < minimum:
        raise ValueError(f"--{name} must be at least {minimum}")
    return value


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _emit(command, fieldnames, rows, args, stream):
    if args["format"] == "csv":
        lines = [",".join(fieldnames)]
        for row in rows:
            lines.append(",".join(_fmt(row[f]) for f in fieldnames))
        lines.append(f"# seed={args['seed']} version={__version__}")
        stream.write("\n".join(lines) + "\n")
    else:
        doc = {
            "command": command,
            "rows": [{f: _jsonable(row[f]) for f in fieldnames} for row in rows],
            "meta": {"seed": args["seed"], "version": __version__},
        }
        stream.write(json.dumps(doc, indent=2) + "\n")


# --------------------------------------------------------------------------
# Subcommand runners.  Each returns (fieldnames, rows, exit_code, pre_lines).


def _run_gw_estimate(args):
    n = _positive("n", args["n"])
    samples = _positive("samples", args["samples"])
    if args["map"] == "identity":
        pmap = gwidth.identity_map(n)
    else:  # matchings
        k = _positive("k", args["k"])
        if n % 2:
            raise ValueError("--n must be even for the matchings map")
        comps = []
        for mat in gwidth.random_matching_matrices(n, k, args["seed"] + 1):
            pairs = sorted(
                {tuple(sorted((int(r), int(c)))) for r, c in zip(mat.rows, mat.cols)}
            )
            comps.append(Hypergraph(n, pairs))
        pmap = gwidth.PolyMap(comps)
    est = gwidth.gw_estimate(pmap, samples, args["seed"], threads=args["threads"])
    bound = gwidth.width_bound(pmap.n, pmap.k, max(pmap.degree, 1), max(pmap.multiplicity, 1))
    row = {
        "n": pmap.n,
        "k": pmap.k,
        "d": pmap.degree,
        "t": pmap.multiplicity,
        "samples": samples,
        "seed": args["seed"],
        "gw_mean": est.mean,
        "gw_se": est.std_error,
        "bound": bound,
        "fitted_C": est.mean / bound,
    }
    return list(row), [row], EXIT_OK, []


def _run_matrix_verify(args):
    n = _positive("n", args["n"])
    m = _positive("m", args["m"])
    r = _positive("r", args["r"])
    params = tensorlift.LiftParams(n=n, m=m, r=r, s=args["s"], budget=args["budget"])
    if args["hypergraph"]:
        h = load_hypergraph(args["hypergraph"])
        if h.n != n:
            raise ValueError(f"--n {n} does not match the file vertex count {h.n}")
    else:
        h = birthday.default_matching(n, r)
    verdict = tensorlift.verify_lift_identity(h, params)
    rep = verdict.report
    status = "OK" if verdict.ok else f"FAIL at x={verdict.witness}"
    pre = [f"identity: {status}, cover_count={verdict.cover_count}"]
    row = {
        "n": rep.n,
        "m": rep.m,
        "r": rep.r,
        "s": rep.s,
        "dim": rep.dim,
        "num_colors": rep.num_colors,
        "cover_count": rep.cover_count,
        "nnz": rep.nnz,
        "max_row_sum": rep.max_row_sum,
        "row_sum_bound": rep.row_sum_bound,
        "identity_ok": verdict.ok,
    }
    return list(row), [row], EXIT_OK if verdict.ok else EXIT_VERIFY, pre


def _run_birthday(args):
    params = birthday.BirthdayParams(
        r=_positive("r", args["r"]), n=_positive("n", args["n"]), m=args["m"], s=args["s"]
    )
    samples = _positive("samples", args["samples"])
    stats = birthday.phi_statistics(
        params, samples=samples, seed=args["seed"], threads=args["threads"]
    )
    row = {
        "r": params.r,
        "n": params.n,
        "m": params.m,
        "s": params.s,
        "samples": samples,
        "seed": args["seed"],
        "p_good": stats.good_probability.mean,
        "se": stats.good_probability.std_error,
        "mean_phi": stats.mean_phi.mean,
        "se_phi": stats.mean_phi.std_error,
    }
    return list(row), [row], EXIT_OK, []


def _run_poisson_check(args):
    params = birthday.BirthdayParams(
        r=_positive("r", args["r"]), n=_positive("n", args["n"]), m=args["m"]
    )
    samples = _positive("samples", args["samples"])
    report = birthday.poisson_domination_check(
        params, samples=samples, seed=args["seed"], threads=args["threads"]
    )
    rows = []
    for dr in report.rows:
        rows.append(
            {
                "check": dr.functional,
                "lhs": dr.lhs.mean,
                "rhs": 2.0 * dr.rhs.mean,
                "value": dr.margin,
                "threshold": dr.tolerance,
                "passed": dr.holds,
            }
        )
    chi = birthday.poisson_sum_chisquare(
        args["mu_a"], args["mu_b"], samples=samples, seed=args["seed"] + 2
    )
    rows.append(
        {
            "check": "sum_chisquare",
            "lhs": chi.statistic,
            "rhs": float(chi.dof),
            "value": chi.p_value,
            "threshold": chi.significance,
            "passed": chi.passed,
        }
    )
    ok = all(r["passed"] for r in rows)
    return ["check", "lhs", "rhs", "value", "threshold", "passed"], rows, (
        EXIT_OK if ok else EXIT_VERIFY
    ), []


def _run_tj_ratio(args):
    dim = _positive("N", args["N"], minimum=2)
    k = _positive("k", args["k"])
    samples = _positive("samples", args["samples"])
    mats = gwidth.random_matching_matrices(dim, k, args["seed"] + 1)
    res = gwidth.tj_ratio_experiment(mats, samples, args["seed"], threads=args["threads"])
    row = {
        "N": dim,
        "k": k,
        "samples": samples,
        "seed": args["seed"],
        "lhs_mean": res.lhs.mean,
        "lhs_se": res.lhs.std_error,
        "rhs": res.rhs,
        "ratio": res.ratio,
    }
    return list(row), [row], EXIT_OK, []


def _ap_structure_stats(params):
    h = ap_hypergraph(params)
    degrees, max_deg = h.degrees(), h.max_degree
    max_pair, table = pair_incidence_profile(h)
    return h, degrees, max_deg, max_pair, table


def _run_ap_count(args):
    params = ApParams(args["N"], args["k"])
    h, degrees, max_deg, max_pair, _ = _ap_structure_stats(params)
    pre = [f"edges={h.num_edges}"]
    row = {
        "N": params.N,
        "k": params.k,
        "edges": h.num_edges,
        "vertex_degree": max_deg,
        "pair_incidence": max_pair,
    }
    return list(row), [row], EXIT_OK, pre


def _run_ap_structure(args):
    params = ApParams(args["N"], args["k"])
    trials = _positive("trials", args["trials"])
    h, degrees, _, _, table = _ap_structure_stats(params)
    N, k = params.N, params.k
    edges_ok = h.num_edges == N * (N - 1) // 2
    degree_ok = all(2 * d == k * (N - 1) for d in degrees)
    pair_ok = all(2 * c == k * (k - 1) for c in table.values()) and len(table) == N * (N - 1) // 2
    gen = mc.stream(args["seed"], 0)
    lambda_ok = True
    for _ in range(trials):
        bits = (gen.random(N) < 0.5).astype(np.uint8)
        if 2 * poly.evaluate(h, bits) != ordered_ap_count(bits, k):
            lambda_ok = False
            break
    transitive_ok = two_transitivity_check(params, trials, args["seed"] + 1)
    all_ok = edges_ok and degree_ok and pair_ok and lambda_ok and transitive_ok
    row = {
        "N": N,
        "k": k,
        "edges": h.num_edges,
        "edges_ok": edges_ok,
        "degree_ok": degree_ok,
        "pair_ok": pair_ok,
        "lambda_ok": lambda_ok,
        "transitive_ok": transitive_ok,
        "all_ok": all_ok,
    }
    return list(row), [row], EXIT_OK if all_ok else EXIT_VERIFY, []


def _run_upper_tail(args):
    params = RandomSetParams(args["N"], args["p"], args["seed"])
    query = TailQuery(args["k"], args["delta"])
    samples = _positive("samples", args["samples"])
    res = randsets.upper_tail_mc(
        params, query, samples, seed=args["seed"], threads=args["threads"]
    )
    row = {
        "N": params.N,
        "k": query.k,
        "p": params.p,
        "delta": query.delta,
        "samples": samples,
        "seed": args["seed"],
        "prob": res.estimate.mean,
        "se_or_bound": res.rule_of_three_bound
        if res.rule_of_three_bound is not None
        else res.estimate.std_error,
        "reference_rate": res.reference_rate,
    }
    return list(row), [row], EXIT_OK, []


def _run_intersective(args):
    n = args["N"]
    ell = _positive("ell", args["ell"])
    alpha = args["alpha"]
    fields = ["N", "ell", "alpha", "model", "param", "trials", "prob"]
    if args["diffs"] is not None:
        diffs = [int(tok) for tok in args["diffs"].split(",") if tok.strip() != ""]
        res = randsets.intersectivity_check(n, ell, alpha, diffs, seed=args["seed"])
        label = "exact" if res.exact else "heuristic (no witness found)"
        if res.intersective:
            pre = [f"intersective: true [{label}]"]
        else:
            witness = "".join(map(str, res.witness))
            pre = [f"intersective: false [{label}], witness={witness}"]
        row = {
            "N": n,
            "ell": ell,
            "alpha": alpha,
            "model": "explicit",
            "param": args["diffs"],
            "trials": 1,
            "prob": 1.0 if res.intersective else 0.0,
        }
        return fields, [row], EXIT_OK, pre
    if (args["p"] is None) == (args["k_draws"] is None):
        raise ValueError("give exactly one of --p / --k-draws (or --diffs)")
    trials = _positive("trials", args["trials"])
    est = randsets.random_intersectivity_experiment(
        n,
        ell,
        alpha,
        trials,
        args["seed"],
        p=args["p"],
        k_draws=args["k_draws"],
        threads=args["threads"],
    )
    model = "subset" if args["p"] is not None else "draws"
    row = {
        "N": n,
        "ell": ell,
        "alpha": alpha,
        "model": model,
        "param": args["p"] if args["p"] is not None else args["k_draws"],
        "trials": trials,
        "prob": est.mean,
    }
    return fields, [row], EXIT_OK, []


def _run_bound_eval(args):
    value = gwidth.width_bound(args["n"], args["k"], args["d"], args["t"])
    row = {"n": args["n"], "k": args["k"], "d": args["d"], "t": args["t"], "bound": value}
    return list(row), [row], EXIT_OK, [f"bound={_fmt(value)}"]


COMMANDS = {
    "gw-estimate": (
        "Monte-Carlo Gaussian width of a hypercube polynomial image "
        "(gwidth.gw_estimate with an exact enumeration inner maximizer)",
        (
            Opt("map", str, default="identity", choices=("identity", "matchings"),
                help="component family: coordinate map, or random perfect matchings"),
            Opt("n", int, required=True, help="hypercube dimension"),
            Opt("k", int, default=8, help="number of components (matchings map)"),
            Opt("samples", int, default=10000, help="Gaussian directions"),
        ),
        _run_gw_estimate,
    ),
    "matrix-verify": (
        "Build the tensor-power lift of a 2r-uniform hypergraph and check "
        "the quadratic identity exactly on all sign vectors "
        "(tensorlift.verify_lift_identity)",
        (
            Opt("n", int, required=True, help="vertex count"),
            Opt("m", int, required=True, help="tensor power"),
            Opt("r", int, required=True, help="half edge size"),
            Opt("s", int, default=0, help="goodness threshold (0 = 200*4^r)"),
            Opt("budget", int, default=tensorlift.DEFAULT_BUDGET,
                help="cap on n^m enumeration size"),
            Opt("hypergraph", str, help="hypergraph file (default: full matching)"),
        ),
        _run_matrix_verify,
    ),
    "birthday": (
        "Goodness statistics of random maps against a maximal matching "
        "(birthday.phi_statistics): Pr[s-good], E[phi]",
        (
            Opt("r", int, required=True, help="half edge size"),
            Opt("n", int, required=True, help="vertex count"),
            Opt("m", int, default=0, help="map length (0 = floor(C_r n^(1-1/r)))"),
            Opt("s", int, default=0, help="goodness threshold (0 = 200*4^r)"),
            Opt("samples", int, default=10000, help="Monte-Carlo samples"),
        ),
        _run_birthday,
    ),
    "poisson-check": (
        "Poisson-domination inequality for the occupancy functionals and a "
        "chi-square test that independent Poisson draws add up "
        "(birthday.poisson_domination_check, birthday.poisson_sum_chisquare)",
        (
            Opt("r", int, required=True, help="half edge size"),
            Opt("n", int, required=True, help="vertex count"),
            Opt("m", int, default=0, help="map length (0 = default)"),
            Opt("samples", int, default=100000, help="Monte-Carlo samples"),
            Opt("mu-a", float, default=1.3, help="first Poisson mean"),
            Opt("mu-b", float, default=0.7, help="second Poisson mean"),
        ),
        _run_poisson_check,
    ),
    "tj-ratio": (
        "Expected norm of a Gaussian series of random matching matrices "
        "against sqrt(log N) times the root-sum-of-squares of their norms "
        "(gwidth.tj_ratio_experiment)",
        (
            Opt("N", int, required=True, help="matrix dimension (even)"),
            Opt("k", int, required=True, help="number of matrices"),
            Opt("samples", int, default=24, help="Gaussian draws"),
        ),
        _run_tj_ratio,
    ),
    "ap-count": (
        "Edge count and incidence statistics of the k-term progression "
        "hypergraph on Z/NZ (aps.ap_hypergraph)",
        (
            Opt("N", int, required=True, help="modulus (prime)"),
            Opt("k", int, required=True, help="progression length"),
        ),
        _run_ap_count,
    ),
    "ap-structure": (
        "Exact structural checks of the progression hypergraph: counts, "
        "degrees, pair incidences, the doubled-polynomial identity, and "
        "2-transitivity (aps module)",
        (
            Opt("N", int, required=True, help="modulus (prime)"),
            Opt("k", int, required=True, help="progression length"),
            Opt("trials", int, default=100, help="random subsets / affine maps"),
        ),
        _run_ap_structure,
    ),
    "upper-tail": (
        "Monte-Carlo upper-tail probability of the progression count in a "
        "p-random subset of Z/NZ (randsets.upper_tail_mc)",
        (
            Opt("N", int, required=True, help="modulus (prime)"),
            Opt("k", int, required=True, help="progression length"),
            Opt("p", float, required=True, help="inclusion probability"),
            Opt("delta", float, required=True, help="relative exceedance"),
            Opt("samples", int, default=100000, help="Monte-Carlo samples"),
        ),
        _run_upper_tail,
    ),
    "intersective": (
        "Intersectivity of a difference set: exact minimum-size subset "
        "search, or the probability that a random difference set is "
        "intersective (randsets.intersectivity_check / "
        "randsets.random_intersectivity_experiment)",
        (
            Opt("N", int, required=True, help="modulus"),
            Opt("ell", int, required=True, help="progression length minus one"),
            Opt("alpha", float, required=True, help="density threshold"),
            Opt("diffs", str, help="explicit difference set, comma-separated"),
            Opt("p", float, help="random model: inclusion probability"),
            Opt("k-draws", int, help="random model: uniform draws with replacement"),
            Opt("trials", int, default=200, help="random-model trials"),
        ),
        _run_intersective,
    ),
    "bound-eval": (
        "Evaluate the width bound n*t*sqrt(k*n^(1-1/ceil(d/2))*log n) "
        "(gwidth.width_bound)",
        (
            Opt("n", int, required=True, help="hypercube dimension"),
            Opt("k", int, required=True, help="component count"),
            Opt("d", int, required=True, help="degree"),
            Opt("t", int, required=True, help="multiplicity"),
        ),
        _run_bound_eval,
    ),
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="polywidth",
        description="Experiments on hypergraph polynomials over the hypercube: "
        "tensor-power lifts, birthday-paradox statistics, Gaussian widths, and "
        "arithmetic progressions in Z/NZ.",
    )
    parser.add_argument("--version", action="version", version=f"polywidth {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (help_text, opts, _) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        for opt in list(opts) + list(COMMON_OPTS):
            p.add_argument(f"--{opt.name}", type=opt.type, default=None, help=opt.help)
    return parser


def _load_config(path):
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config JSON must be an object")
    else:
        data = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, value = line.split("=", 1)
            data[key.strip()] = value.strip()
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def _coerce(opt, value):
    if isinstance(value, str) and opt.type is not str:
        return opt.type(value)
    if opt.type is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, opt.type):
        raise ValueError(f"--{opt.name} expects {opt.type.__name__}, got {value!r}")
    return value


def _merge_args(ns, opts):
    merged = {}
    config = {}
    if getattr(ns, "config", None):
        config = _load_config(ns.config)
    for opt in list(opts) + list(COMMON_OPTS):
        attr = opt.name.replace("-", "_")
        value = getattr(ns, attr)
        if value is None and attr in config:
            value = _coerce(opt, config[attr])
        if value is None:
            value = opt.default
        if value is None and opt.required:
            raise ValueError(f"missing required --{opt.name}")
        if value is not None and opt.choices and value not in opt.choices:
            raise ValueError(f"--{opt.name} must be one of {', '.join(opt.choices)}")
        merged[attr] = value
    return merged


def run(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    _, opts, runner = COMMANDS[ns.command]
    args = _merge_args(ns, opts)
    fieldnames, rows, code, pre_lines = runner(args)
    for line in pre_lines:
        print(line)
    if args["output"]:
        with open(args["output"], "w") as fh:
            _emit(ns.command, fieldnames, rows, args, fh)
    else:
        _emit(ns.command, fieldnames, rows, args, sys.stdout)
    return code


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # argparse --help or usage error
        code = exc.code if exc.code is not None else 0
        return EXIT_INVALID if code not in (0,) else 0
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
