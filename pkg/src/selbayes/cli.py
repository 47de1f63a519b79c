"""Command-line runner: ``selbayes {run,eval,describe,list}``.

Experiments write ``<out>/<experiment>.csv`` plus a ``.json`` metadata
sidecar.  Parameters come from built-in presets (``--scale paper|desk``)
optionally overridden by an INI file whose section names are experiment
ids.  Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
4 rejection sampler aborted on low acceptance.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import expfam as ef
from . import multiparam as mp
from . import selective_normal as sn
from . import simulate as sim
from .errors import ConfigError, DomainError, InvalidObservationError, LowAcceptanceError, SelbayesError
from .quadrature import integrate
from .selective_normal import PriorKind, SplitNormalModel

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_LOW_ACCEPTANCE = 0, 2, 3, 4
OUTPUT_ENV = "SELBAYES_OUTPUT_DIR"

# ---------------------------------------------------------------------------
# Parameter presets
# ---------------------------------------------------------------------------

_ALPHAS7 = "0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95"
_ALPHAS9 = "0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9"

# Values are strings, exactly as they would appear in a config file.
PRESETS = {
    "table1": {
        "_doc": "Coverage of (-inf, quantile] in the normal model, uniform vs selective Jeffreys",
        "common": {"n": "20", "t": "0", "thetas": "-0.5, 0, 0.5", "gammas": "0.5, 0.75, 1",
                   "alphas": _ALPHAS7, "priors": "uniform, jeffreys"},
    },
    "table2": {
        "_doc": "Inference for the winner: 0.9 interval coverage and length under L1 and L2",
        "common": {"n1": "5", "n2": "5", "level": "0.9", "likelihoods": "L1, L2"},
        "paper": {"ms": "2, 5, 10, 20", "reps": "5000", "steps": "10000"},
        "desk": {"ms": "2, 5", "reps": "1000", "steps": "4000"},
    },
    "fig1": {
        "_doc": "Coverage of 0.9 intervals under a N(0,1) prior with and without selection",
        "common": {"n": "5", "level": "0.9", "theta_min": "-1", "theta_max": "2", "theta_step": "0.1"},
        "paper": {"reps": "100000"},
        "desk": {"reps": "20000"},
    },
    "fig2": {
        "_doc": "Priors and posteriors in the normal model, (n, gamma, t, y) = (20, 1, 0, 0.2)",
        "common": {"n": "20", "gamma": "1", "t": "0", "y": "0.2", "theta_min": "-1.5",
                   "theta_max": "1.5", "points": "301"},
    },
    "fig3": {
        "_doc": "Priors and posteriors in the normal model, (n, gamma, t, y) = (20, 0.75, 0, 0)",
        "common": {"n": "20", "gamma": "0.75", "t": "0", "y": "0", "theta_min": "-1.5",
                   "theta_max": "1.5", "points": "301"},
    },
    "fig4": {
        "_doc": "Binomial priors and posteriors, n1 = 8, n2 = 2, y1 = 4, y2 = 1",
        "common": {"n1": "8", "n2": "2", "y1": "4", "y2": "1", "c": "0.5", "points": "197"},
    },
    "fig5": {
        "_doc": "Exponential-rate coverage curves, selection on the first-batch MLE > 1",
        "common": {"family": "exponential", "ns": "10, 30, 80", "probs": "0.1, 0.5, 0.9",
                   "alphas": _ALPHAS9, "split": "0.8"},
        "paper": {"reps": "10000", "priors": "nonselective-jeffreys, jeffreys, pmp"},
        "desk": {"reps": "2000", "priors": "nonselective-jeffreys, jeffreys"},
    },
    "fig6": {
        "_doc": "Inverse-Gaussian-mean coverage curves, selection on the first-batch MLE > 1",
        "common": {"family": "inverse-gaussian", "ns": "10, 30, 80", "probs": "0.1, 0.5, 0.9",
                   "alphas": _ALPHAS9, "split": "0.8"},
        "paper": {"reps": "10000", "priors": "nonselective-jeffreys, jeffreys, pmp"},
        "desk": {"reps": "2000", "priors": "nonselective-jeffreys, jeffreys"},
    },
    "fig7": {
        "_doc": "PIT ECDFs for the unknown-variance model under sigma^-1 and selective Jeffreys",
        "common": {"n1": "50", "n2": "10", "t": "2", "mu0": "0", "sigma2_0": "1",
                   "priors": "jeffreys, sigma-inv", "steps": "5000"},
        "paper": {"reps": "5000"},
        "desk": {"reps": "500"},
    },
    "custom": {
        "_doc": "Normal-model coverage grid with user-chosen settings",
        "common": {"n": "20", "gamma": "1", "t": "0", "thetas": "0", "alphas": _ALPHAS7,
                   "priors": "uniform, jeffreys, pmp", "method": "deterministic", "reps": "2000"},
    },
}

EXPERIMENTS = tuple(PRESETS)


def preset(experiment, scale):
    if experiment not in PRESETS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    if scale not in ("paper", "desk"):
        raise ConfigError(f"unknown scale {scale!r}")
    spec = PRESETS[experiment]
    out = dict(spec.get("common", {}))
    out.update(spec.get(scale, {}))
    return out


def load_config(path, experiment=None):
    """Return ``(experiment, overrides)`` read from an INI file."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    sections = parser.sections()
    unknown = [s for s in sections if s not in PRESETS]
    if unknown:
        raise ConfigError(f"unknown experiment section(s) {unknown} in {path}")
    if experiment is None:
        if len(sections) != 1:
            raise ConfigError("name the experiment to run or give a config with exactly one section")
        experiment = sections[0]
    overrides = dict(parser[experiment]) if parser.has_section(experiment) else {}
    return experiment, overrides


def merge(experiment, scale, overrides):
    params = preset(experiment, scale)
    allowed = set(params) | {"seed"}
    bad = sorted(set(overrides) - allowed)
    if bad:
        raise ConfigError(f"unknown key(s) {bad} for experiment {experiment}")
    params.update(overrides)
    return params


# -- typed accessors -------------------------------------------------------------

class Params:
    def __init__(self, raw):
        self.raw = raw

    def _get(self, key):
        if key not in self.raw:
            raise ConfigError(f"missing parameter {key!r}")
        return self.raw[key].strip()

    def float(self, key, lo=-math.inf, hi=math.inf, closed=True):
        try:
            v = float(self._get(key))
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {self.raw[key]!r}") from None
        ok = lo <= v <= hi if closed else lo < v < hi
        if not ok or math.isnan(v):
            raise ConfigError(f"{key}={v} outside its valid range")
        return v

    def int(self, key, lo=1):
        try:
            v = int(self._get(key))
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {self.raw[key]!r}") from None
        if v < lo:
            raise ConfigError(f"{key} must be at least {lo}")
        return v

    def floats(self, key):
        try:
            vals = [float(v) for v in self._get(key).split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"{key} must be a comma-separated list of numbers") from None
        if not vals or any(math.isnan(v) for v in vals):
            raise ConfigError(f"{key} is empty or invalid")
        return vals

    def ints(self, key, lo=1):
        vals = self.floats(key)
        if any(v != int(v) or v < lo for v in vals):
            raise ConfigError(f"{key} must list integers >= {lo}")
        return [int(v) for v in vals]

    def words(self, key):
        vals = [v.strip() for v in self._get(key).split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"{key} is empty")
        return vals

    def str(self, key):
        return self._get(key)


def _priors(words, allowed=None):
    try:
        kinds = [PriorKind.parse(w) for w in words]
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if allowed is not None:
        bad = [k.value for k in kinds if k not in allowed]
        if bad:
            raise ConfigError(f"prior(s) {bad} not available for this experiment")
    return kinds


def _alphas(p, key="alphas"):
    vals = p.floats(key)
    if any(not 0 < a < 1 for a in vals):
        raise ConfigError("alpha values must lie in (0, 1)")
    return vals


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

@dataclass
class Result:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)


def run_table1(p: Params, seed, threads):
    n, t = p.float("n", 0, closed=False), p.float("t")
    thetas, gammas, alphas = p.floats("thetas"), p.floats("gammas"), _alphas(p)
    if any(not 0 < g <= 1 for g in gammas):
        raise ConfigError("gammas must lie in (0, 1]")
    priors = _priors(p.words("priors"))
    rows = []
    for th in thetas:
        for g in gammas:
            model = SplitNormalModel(n, g, t)
            for a in alphas:
                for kind in priors:
                    rows.append([th, g, a, _prior_code(kind), sim.coverage_cell(model, kind, th, a)])
    return Result(["theta", "gamma", "alpha", "prior", "coverage"], rows)


def _prior_code(kind):
    return {PriorKind.UNIFORM: "U", PriorKind.SELECTIVE_JEFFREYS: "J",
            PriorKind.EXACT_MATCHING: "PMP", PriorKind.NONSELECTIVE_JEFFREYS: "NSJ"}[kind]


def run_table2(p: Params, seed, threads):
    kinds = p.words("likelihoods")
    if any(k not in (mp.L1, mp.L2) for k in kinds):
        raise ConfigError("likelihoods must be L1 and/or L2")
    ms = p.ints("ms", lo=2)
    steps = p.int("steps", lo=10)
    table = sim.winner_study(ms=ms, n1=p.int("n1"), n2=p.int("n2"), reps=p.int("reps", lo=100),
                             level=p.float("level", 0, 1, closed=False),
                             mh=mp.MHConfig(steps=steps), seed=seed, threads=threads,
                             likelihoods=tuple(kinds))
    return Result(table.columns, table.rows, table.metadata)


def run_fig1(p: Params, seed, threads):
    step = p.float("theta_step", 0, closed=False)
    lo, hi = p.float("theta_min"), p.float("theta_max")
    if hi < lo:
        raise ConfigError("theta_max must not be below theta_min")
    thetas = np.round(np.arange(lo, hi + step / 2, step), 10)
    table = sim.fig1_coverage(thetas, reps=p.int("reps"), seed=seed, n=p.float("n", 0, closed=False),
                              level=p.float("level", 0, 1, closed=False), threads=threads)
    return Result(table.columns, table.rows, table.metadata)


def _normal_figure(p: Params, seed, threads):
    model = SplitNormalModel(p.float("n", 0, closed=False), p.float("gamma", 0, 1), p.float("t"))
    y = p.float("y")
    try:
        model.check_observation(y)
    except InvalidObservationError as exc:
        raise ConfigError(str(exc)) from None
    grid = np.linspace(p.float("theta_min"), p.float("theta_max"), p.int("points", lo=2))
    cols = {"uniform_prior": np.ones_like(grid),
            "pmp_prior": sn.pmp_prior_density(model, grid, y),
            "jeffreys_prior": sn.jeffreys_prior_density(model, grid)}
    for name, kind in (("posterior_u", PriorKind.UNIFORM), ("posterior_pmp", PriorKind.EXACT_MATCHING),
                       ("posterior_j", PriorKind.SELECTIVE_JEFFREYS)):
        cols[name] = sn.posterior_curve(model, y, kind).pdf(grid)
    names = ["uniform_prior", "pmp_prior", "jeffreys_prior", "posterior_u", "posterior_pmp", "posterior_j"]
    rows = [[float(th)] + [float(cols[c][i]) for c in names] for i, th in enumerate(grid)]
    return Result(["theta"] + names, rows, {"y": y, "note": "priors unnormalised; posteriors normalised"})


def run_fig4(p: Params, seed, threads):
    n1, n2 = p.int("n1"), p.int("n2", lo=0)
    y1, y2 = p.int("y1", lo=0), p.int("y2", lo=0)
    if y1 > n1 or y2 > n2:
        raise ConfigError("success counts cannot exceed batch sizes")
    model = ef.Bernoulli(n1=n1, n2=n2, c=p.float("c", 0, 1, closed=False))
    data = ef.Bernoulli.from_counts(n1, y1, n2, y2)
    if not model.is_selected(data):
        raise ConfigError("the first-batch proportion fails the selection rule")
    m = p.int("points", lo=2)
    grid = np.linspace(0.0, 1.0, m + 2)[1:-1]
    proxy = model.normal_proxy()
    y_nu = model.proxy_observation(data)
    kinds = [("nonselective", PriorKind.NONSELECTIVE_JEFFREYS), ("jeffreys", PriorKind.SELECTIVE_JEFFREYS),
             ("pmp", PriorKind.EXACT_MATCHING)]
    cols, names = {}, []
    for label, kind in kinds:
        # normalise each prior on (0, 1) via the nu scale, where it equals pi_nu
        def pi_nu(nu, kind=kind):
            nu = np.asarray(nu, float)
            if kind is PriorKind.NONSELECTIVE_JEFFREYS:
                return np.ones_like(nu)
            return np.exp(sn.log_prior_density(proxy, kind, nu, y_nu))

        lo, hi = model.nu_domain
        mass = integrate(pi_nu, lo, hi, rtol=1e-10)
        cols[f"{label}_prior"] = ef.induced_prior_density(model, kind, grid, data) / mass
        names.append(f"{label}_prior")
    for label, kind in kinds:
        curve = ef.selective_posterior_expfam(model, data, kind)
        # curve density is in nu; convert to theta
        cols[f"posterior_{label}"] = curve.pdf(grid) * model.vst_deriv(grid)
        names.append(f"posterior_{label}")
    rows = [[float(th)] + [float(cols[c][i]) for c in names] for i, th in enumerate(grid)]
    return Result(["theta"] + names, rows, {"proxy_y": y_nu, "proxy_t": proxy.t})


def _expfam_figure(p: Params, seed, threads):
    family = p.str("family")
    if family not in sim.EXPFAM_FAMILIES:
        raise ConfigError(f"family must be one of {sorted(sim.EXPFAM_FAMILIES)}")
    probs = p.floats("probs")
    if any(not 0 < q < 1 for q in probs):
        raise ConfigError("probs must lie in (0, 1)")
    priors = _priors(p.words("priors"), {PriorKind.SELECTIVE_JEFFREYS, PriorKind.NONSELECTIVE_JEFFREYS,
                                         PriorKind.EXACT_MATCHING, PriorKind.UNIFORM})
    table = sim.expfam_coverage_study(family, ns=p.ints("ns", lo=2), probs=probs,
                                      priors=[k.value for k in priors], alphas=_alphas(p),
                                      reps=p.int("reps"), seed=seed, threads=threads,
                                      split=p.float("split", 0, 1, closed=False))
    return Result(table.columns, table.rows, table.metadata)


def run_fig7(p: Params, seed, threads):
    priors = p.words("priors")
    if any(k not in (mp.JEFFREYS_BASED, mp.SIGMA_INV) for k in priors):
        raise ConfigError("fig7 priors must be 'jeffreys' and/or 'sigma-inv'")
    design = sim.UnknownVarDesign(n1=p.int("n1", lo=2), n2=p.int("n2", lo=0), t=p.float("t"))
    table, _ = sim.pit_ecdf(design, theta0=(p.float("mu0"), p.float("sigma2_0", 0, closed=False)),
                            priors=tuple(priors), reps=p.int("reps", lo=100),
                            mh=mp.MHConfig(steps=p.int("steps", lo=10)), seed=seed, threads=threads)
    return Result(table.columns, table.rows, table.metadata)


def run_custom(p: Params, seed, threads):
    model = SplitNormalModel(p.float("n", 0, closed=False), p.float("gamma", 0, 1), p.float("t"))
    method = p.str("method")
    if method not in (sim.DETERMINISTIC, sim.MONTE_CARLO):
        raise ConfigError("method must be 'deterministic' or 'monte_carlo'")
    rows = []
    for kind in _priors(p.words("priors")):
        spec = sim.CoverageSpec(model, kind, tuple(p.floats("thetas")), tuple(_alphas(p)),
                                reps=p.int("reps"), seed=seed, method=method)
        report = (sim.coverage_deterministic(spec) if method == sim.DETERMINISTIC
                  else sim.coverage_mc(spec, threads=threads))
        rows += [[e.theta, e.alpha, kind.value, e.estimate, e.se] for e in report.entries]
    return Result(["theta", "alpha", "prior", "coverage", "se"], rows, {"method": method})


RUNNERS = {
    "table1": run_table1, "table2": run_table2, "fig1": run_fig1, "fig2": _normal_figure,
    "fig3": _normal_figure, "fig4": run_fig4, "fig5": _expfam_figure, "fig6": _expfam_figure,
    "fig7": run_fig7, "custom": run_custom,
}


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _atomic_write(path, text):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (str, bool)) or obj is None:
        return obj
    return repr(obj)


def output_dir(arg):
    return arg or os.environ.get(OUTPUT_ENV) or os.path.join(os.getcwd(), "results")


def run_experiment(experiment, scale="desk", overrides=None, seed=None, out=None, threads=1):
    """Run one experiment and write its CSV and JSON files; returns the CSV path."""
    params = merge(experiment, scale, overrides or {})
    if seed is None:
        seed = int(params.get("seed", 0))
    params.pop("seed", None)
    p = Params(params)
    start = time.perf_counter()
    try:
        result = RUNNERS[experiment](p, seed, threads)
    except (DomainError, InvalidObservationError) as exc:
        raise ConfigError(f"invalid parameters for {experiment}: {exc}") from exc
    runtime = time.perf_counter() - start
    directory = output_dir(out)
    os.makedirs(directory, exist_ok=True)
    config_blob = json.dumps({"experiment": experiment, "scale": scale, "seed": seed, "params": params},
                             sort_keys=True)
    meta = {
        "experiment": experiment, "scale": scale, "seed": seed, "params": params,
        "config_hash": hashlib.sha256(config_blob.encode()).hexdigest(),
        "tool_version": __version__, "runtime_s": runtime,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "columns": result.columns, "rows": len(result.rows), "study": result.metadata,
    }
    csv_path = os.path.join(directory, f"{experiment}.csv")
    json_path = os.path.join(directory, f"{experiment}.json")
    body = csv_text(result.columns, result.rows)
    meta_text = json.dumps(_jsonable(meta), indent=2, sort_keys=True) + "\n"
    _atomic_write(csv_path, body)
    _atomic_write(json_path, meta_text)
    return csv_path


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _eval(args):
    model = SplitNormalModel(args.n, args.gamma, args.t)
    kind = PriorKind.parse(args.prior)
    echo = {"model": args.model, "n": args.n, "gamma": args.gamma, "t": args.t, "prior": kind.value}
    if args.what == "prior":
        _need(args, "theta")
        if kind is PriorKind.EXACT_MATCHING:
            _need(args, "y")
        echo.update(theta=args.theta, y=args.y)
        value = math.exp(sn.log_prior_density(model, kind, args.theta, args.y))
    elif args.what == "posterior":
        _need(args, "theta", "y")
        echo.update(theta=args.theta, y=args.y)
        curve = sn.posterior_curve(model, args.y, kind)
        echo["pdf"] = f"{float(curve.pdf(args.theta)):.10g}"
        value = curve.cdf_at(args.theta)
    elif args.what == "quantile":
        _need(args, "alpha", "y")
        echo.update(alpha=args.alpha, y=args.y)
        value = sn.posterior_curve(model, args.y, kind).quantile(args.alpha)
    else:
        _need(args, "theta", "alpha")
        echo.update(theta=args.theta, alpha=args.alpha)
        value = sim.coverage_cell(model, kind, args.theta, args.alpha)
    for k, v in echo.items():
        if v is not None:
            print(f"{k}: {v}")
    print(f"quantity: {args.what}")
    print(f"value: {value:.10g}")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError(f"eval {args.what} needs --{' --'.join(missing)}")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="selbayes", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write CSV + JSON")
    run.add_argument("experiment", nargs="?", help=f"one of {', '.join(EXPERIMENTS)}")
    run.add_argument("--config", help="INI file with a section per experiment")
    run.add_argument("--scale", choices=("paper", "desk"), default="desk")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./results)")
    run.add_argument("--threads", type=int, default=1)

    ev = sub.add_parser("eval", help="evaluate a single quantity in the normal model")
    ev.add_argument("what", choices=("prior", "posterior", "quantile", "coverage-cell"))
    ev.add_argument("--model", choices=("normal",), default="normal")
    ev.add_argument("--n", type=float, default=20.0)
    ev.add_argument("--gamma", type=float, default=1.0)
    ev.add_argument("--t", type=float, default=0.0)
    ev.add_argument("--y", type=float)
    ev.add_argument("--theta", type=float)
    ev.add_argument("--alpha", type=float)
    ev.add_argument("--prior", default="jeffreys")

    desc = sub.add_parser("describe", help="print the default parameters of an experiment")
    desc.add_argument("experiment")
    desc.add_argument("--scale", choices=("paper", "desk"), default=None)

    sub.add_parser("list", help="list experiment ids")
    return parser


def _describe(experiment, scale):
    scales = [scale] if scale else ["desk", "paper"]
    print(f"# {experiment}: {PRESETS[experiment]['_doc']}")
    for s in scales:
        print(f"# --scale {s}")
        print(f"[{experiment}]")
        for k, v in preset(experiment, s).items():
            print(f"{k} = {v}")
        print("seed = 0")
        print()


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "list":
            for name in EXPERIMENTS:
                print(f"{name:8s} {PRESETS[name]['_doc']}")
        elif args.command == "describe":
            if args.experiment not in PRESETS:
                raise ConfigError(f"unknown experiment {args.experiment!r}")
            _describe(args.experiment, args.scale)
        elif args.command == "eval":
            try:
                _eval(args)
            except (DomainError, InvalidObservationError) as exc:
                raise ConfigError(str(exc)) from exc
        else:
            experiment, overrides = args.experiment, {}
            if args.config:
                experiment, overrides = load_config(args.config, args.experiment)
            if experiment is None:
                raise ConfigError("name an experiment or pass --config")
            if args.threads < 1:
                raise ConfigError("--threads must be positive")
            path = run_experiment(experiment, args.scale, overrides, args.seed, args.out, args.threads)
            print(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LowAcceptanceError as exc:
        print(f"low acceptance: {exc} (rate {exc.rate:.3g})", file=sys.stderr)
        return EXIT_LOW_ACCEPTANCE
    except SelbayesError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
