"""Batch runner: ``run <config>`` executes verification suites, ``describe <suite>`` explains them.

The configuration is a flat YAML mapping (scalars and lists of scalars only)::

    model: cycle(16)          # cycle(N) | path(N) | grid(N) | file(path)
    suite: [stable, domination]   # or a single name, or "all"
    alpha: [0.3, 0.5, 0.7]
    beta: [pi/12, pi/8, pi/6]
    theta: [0.5, 0.9]
    k: [1, 2, 3]
    seed: 0

Each suite writes CSV files under ``<output_dir>/<suite>/`` and the run ends
with ``<output_dir>/summary.csv`` listing every check.  Exit status: 0 when
every check with a stated constant passes, 1 on a failed such check or a
computation error, 2 on a configuration error.
"""

import argparse
import math
import os
import re
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import yaml

from . import domination, hardy, maximal, spectral, stable, subordination
from .reports import DominationReport, VerificationReport, write_csv

SUITES = ("stable", "subordination", "domination", "maximal", "hardy")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


_NUM = re.compile(r"^\s*(?:(?P<c>[0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*(?P<d>[0-9.eE+-]+))?\s*$")


def _number(key, v):
    if isinstance(v, bool):
        raise ConfigError(key, f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "infinity"):
            return math.inf
        m = _NUM.match(s)
        if m:
            c = float(m.group("c")) if m.group("c") else 1.0
            d = float(m.group("d")) if m.group("d") else 1.0
            return c * math.pi / d
        try:
            return float(s)
        except ValueError:
            pass
    raise ConfigError(key, f"expected a number, got {v!r}")


def _numbers(key, v):
    vals = v if isinstance(v, list) else [v]
    if not vals:
        raise ConfigError(key, "empty list")
    return [_number(key, x) for x in vals]


def _integer(key, v, lo=None):
    x = _number(key, v)
    if x != int(x) or (lo is not None and x < lo):
        raise ConfigError(key, f"expected an integer >= {lo}, got {v!r}")
    return int(x)


@dataclass
class ExperimentConfig:
    """Validated run configuration; see the module docstring for the file format."""

    model: str
    suites: list
    alpha: list = field(default_factory=lambda: [0.3, 0.5, 0.7])
    beta: list = field(default_factory=lambda: [math.pi / 12, math.pi / 8, math.pi / 6])
    theta: list = field(default_factory=lambda: [0.5, 0.9])
    k: list = field(default_factory=lambda: [1, 2, 3])
    u: list = field(default_factory=lambda: [0.25, 1.0, 4.0])
    p: float = 1.0
    p_strong: list = field(default_factory=lambda: [1.5, 2.0, 4.0, math.inf])
    hardy_alpha: list = field(default_factory=lambda: [0.5])
    delta0: float = 1.0
    nu: float = 0.0
    heat_order_m: float = 2.0
    samples: int = 1000
    n_functions: int = 10
    tolerance: float = 1e-8
    seed: int = 0
    output_dir: str = "reports"
    base_dir: str = "."

    KEYS = ("model", "suite", "alpha", "beta", "theta", "k", "u", "p", "p_strong", "hardy_alpha",
            "delta0", "nu", "heat_order_m", "samples", "n_functions", "tolerance", "seed",
            "output_dir")

    @classmethod
    def from_mapping(cls, data, base_dir="."):
        if not isinstance(data, dict):
            raise ConfigError("<file>", "top level must be a key-value mapping")
        for key, val in data.items():
            if key not in cls.KEYS:
                raise ConfigError(str(key), "unknown key")
            items = val if isinstance(val, list) else [val]
            if any(isinstance(x, (dict, list)) for x in items):
                raise ConfigError(key, "values must be scalars or flat lists")
        if "model" not in data:
            raise ConfigError("model", "missing")
        if "suite" not in data:
            raise ConfigError("suite", "missing")
        suites = data["suite"] if isinstance(data["suite"], list) else [data["suite"]]
        if not suites:
            raise ConfigError("suite", "empty suite list")
        names = []
        for s in suites:
            s = str(s)
            if s == "all":
                names.extend(SUITES)
            elif s in SUITES:
                names.append(s)
            else:
                raise ConfigError("suite", f"unknown suite {s!r}; expected one of {SUITES + ('all',)}")
        names = [s for s in SUITES if s in names]
        kw = dict(model=str(data["model"]), suites=names, base_dir=base_dir)
        for key in ("alpha", "beta", "theta", "u", "p_strong", "hardy_alpha"):
            if key in data:
                kw[key] = _numbers(key, data[key])
        if "k" in data:
            kw["k"] = [_integer("k", x, 0) for x in (data["k"] if isinstance(data["k"], list)
                                                      else [data["k"]])]
        for key in ("p", "delta0", "nu", "heat_order_m", "tolerance"):
            if key in data:
                kw[key] = _number(key, data[key])
        for key, lo in (("samples", 1), ("n_functions", 1), ("seed", 0)):
            if key in data:
                kw[key] = _integer(key, data[key], lo)
        if "output_dir" in data:
            kw["output_dir"] = str(data["output_dir"])
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    def validate(self):
        """Check every parameter against the preconditions of the suites that use it."""
        try:
            self.operator()
        except ConfigError:
            raise
        except (ValueError, OSError) as exc:
            raise ConfigError("model", str(exc)) from None
        checks = {
            "alpha": all(0 < a < 1 for a in self.alpha),
            "beta": all(0 < b < math.pi / 4 for b in self.beta),
            "theta": all(0 < t < 1 for t in self.theta),
            "u": all(x > 0 and math.isfinite(x) for x in self.u),
            "p_strong": all(p > 1 for p in self.p_strong),
            "hardy_alpha": all(0 < a <= 1 for a in self.hardy_alpha),
            "tolerance": 0 < self.tolerance < 1,
            "heat_order_m": self.heat_order_m >= 1,
        }
        for key, ok in checks.items():
            if not ok:
                raise ConfigError(key, f"value out of range: {getattr(self, key)!r}")
        try:
            hardy.HardyParams(1.0, self.p, self.heat_order_m, self.delta0, self.nu)
        except ValueError as exc:
            raise ConfigError("p/delta0/nu", str(exc)) from None

    def operator(self):
        m = re.fullmatch(r"\s*(cycle|path|grid|file)\((.*)\)\s*", self.model)
        if not m:
            raise ConfigError("model", f"expected cycle(N), path(N), grid(N) or file(path), "
                                       f"got {self.model!r}")
        kind, arg = m.groups()
        if kind == "file":
            path = arg.strip().strip("'\"")
            if not os.path.isabs(path):
                path = os.path.join(self.base_dir, path)
            return spectral.load_operator(path, heat_order_m=self.heat_order_m)
        try:
            n = int(arg)
        except ValueError:
            raise ConfigError("model", f"size must be an integer, got {arg!r}") from None
        if n < 3:
            raise ConfigError("model", "size must be at least 3")
        return getattr(spectral, kind)(n)


def load_config(path):
    """Parse and validate a configuration file; raises :class:`ConfigError`."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("<file>", str(exc)) from None
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"parse error: {exc}") from None
    return ExperimentConfig.from_mapping(data, base_dir=os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# suites; each returns a list of VerificationReport and writes its own CSVs

class _Ctx:
    def __init__(self, cfg, L, out, pool, tol_scale):
        self.cfg, self.L, self.out, self.pool, self.tol_scale = cfg, L, out, pool, tol_scale

    def map(self, fn, items):
        return list(self.pool.map(fn, items)) if self.pool else [fn(x) for x in items]

    def path(self, name):
        return os.path.join(self.out, name)

    def random_functions(self, count=None):
        rng = np.random.default_rng(self.cfg.seed)
        return rng.standard_normal((len(self.L), count or self.cfg.n_functions))


def _report_csv(path, reports):
    rows = [r for rep in reports for r in rep.rows()]
    write_csv(path, VerificationReport.HEADER, rows)


def suite_stable(ctx):
    alphas = sorted(set(ctx.cfg.alpha) | {0.5})
    tol = min(1e-10, 1e-10 * ctx.tol_scale)

    def one(a):
        model = stable.StableDensityModel(a, abs_tol=tol)
        rep = stable.density_audit(model)
        if a == 0.5:
            ts = np.logspace(-2, 2, 81)
            closed = (2 * math.sqrt(math.pi)) ** -1 * ts ** -1.5 * np.exp(-1 / (4 * ts))
            err = float(np.max(np.abs(stable.stable_density(model, 1.0, ts) - closed)))
            bound = 1e-8 * ctx.tol_scale
            rep.add("closed_form_error", err, bound, err <= bound, paper=True,
                    grid="t in [1e-2,1e2], 81 points")
        return rep

    reports = ctx.map(one, alphas)
    rows = []
    for a, rep in zip(alphas, reports):
        for t, p in zip(rep.data["t"], rep.data["density"]):
            rows.append((a, t, p))
    write_csv(ctx.path("densities.csv"), ("alpha", "t", "density"), rows)
    _report_csv(ctx.path("audit.csv"), reports)
    return reports


def suite_subordination(ctx):
    L = ctx.L
    F = ctx.random_functions()
    tol = ctx.cfg.tolerance * ctx.tol_scale
    qt = tol / 10
    cases = [("poisson", dict(time=t)) for t in (0.5, 1.0, 2.0)]
    cases += [("poisson_derivative", dict(time=1.0, k=k)) for k in range(4)]
    cases += [("poisson_complex", dict(z=r * complex(math.cos(a), math.sin(a))))
              for r, a in ((1.0, math.pi / 6), (1.0, -math.pi / 6), (2.0, math.pi / 12))]
    cases += [("fractional", dict(time=1.0, alpha=a)) for a in ctx.cfg.alpha]

    def one(case):
        kind, kw = case
        sub = subordination.subordinate_apply(
            L, subordination.SemigroupRequest(kind, quad_tol=qt, **kw), F)
        ref = subordination.subordinate_apply(
            L, subordination.SemigroupRequest(kind, route="spectral", **kw), F)
        return float(np.abs(sub - ref).max())

    errs = ctx.map(one, cases)
    rep = VerificationReport(f"subordination_vs_spectral {L.name}")
    rows = []
    for (kind, kw), err in zip(cases, errs):
        label = kind + "".join(f" {k}={v:.6g}" for k, v in kw.items())
        rep.add(label, err, tol, err <= tol, paper=True, grid=f"{F.shape[1]} random f")
        rows.append((kind, kw.get("time", ""), kw.get("k", ""), kw.get("z", ""),
                     kw.get("alpha", ""), err, tol, err <= tol))
    write_csv(ctx.path("agreement.csv"), ("kind", "time", "k", "z", "alpha", "max_abs_error",
                                          "tolerance", "pass"), rows)
    _report_csv(ctx.path("checks.csv"), [rep])
    return [rep]


def suite_domination(ctx):
    L, cfg = ctx.L, ctx.cfg
    F, ids = domination.default_f_family(len(L), seed=cfg.seed)
    reports = []

    def cplx(beta):
        return domination.complex_domination(L, domination.SectorSpec(beta), samples=cfg.samples,
                                             f_family=(F, ids), seed=cfg.seed, kernel=True)

    def deriv(kt):
        return domination.derivative_domination(L, kt[0], kt[1], f_family=(F, ids))

    creps = ctx.map(cplx, cfg.beta)
    kts = [(k, th) for k in cfg.k for th in cfg.theta]
    dreps = ctx.map(deriv, kts)
    write_csv(ctx.path("domination.csv"), DominationReport.CSV_HEADER,
              [r.csv_row() for r in creps + dreps])
    rep = VerificationReport(f"domination {L.name}")
    for r in creps:
        b = r.parameter
        rep.add(f"complex_function beta={b:.6g}", r.extras["function_constant"], r.paper_constant,
                r.extras["function_constant"] <= r.paper_constant * (1 + 1e-6), paper=True,
                paper_constant=r.paper_constant, grid=f"{r.extras['z_samples']} z")
        rep.add(f"complex_kernel beta={b:.6g}", r.extras["kernel_constant"], r.paper_constant,
                r.extras["kernel_pass"], paper=True, paper_constant=r.paper_constant,
                grid=f"{r.extras['z_samples']} z")
    for r in dreps:
        label = f"k={r.k} theta={r.parameter:g}"
        rep.add(f"derivative {label}", r.empirical_constant, None, np.isfinite(r.empirical_constant),
                grid=f"{r.sample_count} ratios")
        change = abs(r.extras["refined_constant"] - r.empirical_constant) / max(
            r.empirical_constant, 1e-300)
        rep.add(f"derivative_stability {label}", change, 0.05, bool(r.stable))
        rep.add(f"derivative_vs_explicit {label}", r.empirical_constant, r.extras["cauchy_constant"],
                r.extras["cauchy_pass"], paper=True, paper_constant=r.extras["cauchy_constant"])
    c0 = domination.faa_di_bruno_constant(0, 0.5)
    rep.add("scalar_constant k=0", c0, 0.5, round(c0, 3) == 0.5, paper=True, paper_constant=0.5)
    reports.append(rep)
    _report_csv(ctx.path("checks.csv"), reports)
    return reports


def suite_maximal(ctx):
    L, cfg = ctx.L, ctx.cfg
    F = ctx.random_functions(max(cfg.n_functions, 1))
    rep = VerificationReport(f"ergodic_maximal {L.name}")
    weak_rows, strong_rows = [], []
    worst_weak = 0.0
    worst_strong = {p: 0.0 for p in cfg.p_strong}
    for j in range(F.shape[1]):
        for lam, count, ratio in maximal.weak_type_table(L, F[:, j]):
            weak_rows.append((j, lam, count, ratio))
            worst_weak = max(worst_weak, ratio)
        for p, ratio, bound in maximal.strong_type_rows(L, F[:, j], ps=cfg.p_strong):
            strong_rows.append((j, p, ratio, bound))
            worst_strong[p] = max(worst_strong[p], ratio)
    write_csv(ctx.path("weak_type.csv"), ("f_index", "lambda", "measure", "ratio"), weak_rows)
    write_csv(ctx.path("strong_type.csv"), ("f_index", "p", "ratio", "bound"), strong_rows)
    rep.add("weak_type_ratio", worst_weak, maximal.weak_type_bound,
            worst_weak <= maximal.weak_type_bound * (1 + 1e-9), paper=True,
            paper_constant=maximal.weak_type_bound, grid=f"{F.shape[1]} random f")
    for p, v in worst_strong.items():
        b = maximal.strong_type_bound(p)
        rep.add(f"strong_type_ratio p={p:g}", v, b, v <= b * (1 + 1e-9), paper=True,
                paper_constant=b, grid=f"{F.shape[1]} random f")
    reports = [rep]
    f0 = F[:, 0]
    hs = [maximal.LaplaceTypeFunction.exponential()]
    hs += [(a, u) for a in cfg.alpha for u in cfg.u]

    def lap(h):
        if isinstance(h, tuple):
            h = maximal.LaplaceTypeFunction.stable_density(h[0], h[1])
        return maximal.laplace_type_check(L, h, f0)

    reports += ctx.map(lap, hs)

    def sec(a):
        return maximal.sector_maximal_check(L, a, 0.5 * (1 - a) * math.pi / 2, f0)

    reports += ctx.map(sec, cfg.alpha)
    _report_csv(ctx.path("checks.csv"), reports)
    return reports


def suite_hardy(ctx):
    L, cfg = ctx.L, ctx.cfg
    m = L.heat_order_m
    space = L.space
    reports = []
    h = space.mesh_scale
    window = (1.5 * h, space.diameter / 2)
    try:
        prof = hardy.regularity_audit(space, window)
        n = prof.n
        rep = VerificationReport(f"volume_regularity {L.name}")
        rep.add("n", prof.n, None, True, grid=f"r in [{window[0]:.4g},{window[1]:.4g}]")
        rep.add("c_lower", prof.c_lower, None, prof.c_lower > 0)
        rep.add("c_upper", prof.c_upper, None, np.isfinite(prof.c_upper))
        reports.append(rep)
    except ValueError:
        n = 1.0
    params = hardy.HardyParams(1.0, cfg.p, m, cfg.delta0, cfg.nu, n) if cfg.p > n / (n + cfg.delta0) \
        else hardy.HardyParams(1.0, 1.0, m, cfg.delta0, cfg.nu, n)
    for a in cfg.hardy_alpha:
        reports.append(hardy.kernel_bound_audit(L, params.with_alpha(a)))
    lam = L.decomposition.eigenvalues
    tol_c = 1e-8 * ctx.tol_scale
    for mm in sorted({1.0, float(m)}):
        c = hardy.calderon_constant(mm)
        reports.append(hardy.calderon_check(lam, mm, c, tol=tol_c))
        reports.append(hardy.phi_identity_check(lam, [0.25, 0.5, 1.0, 2.0, 4.0], mm, c,
                                                tol=1e-10 * ctx.tol_scale))
    F, ids = hardy.hardy_f_family(space, seed=cfg.seed)
    grid = hardy.TimeSpaceGrid.for_operator(L, 1.0, m)
    reports.append(hardy.decay_average_check(space, F[:, 0], n, cfg.delta0 / 2, grid.t))
    rows, summary = hardy.equivalence_experiment(L, params, alphas=tuple(cfg.hardy_alpha) + (1.0,),
                                                 f_family=(F, ids))
    hardy.write_equivalence(ctx.path("equivalence.csv"), ctx.path("equivalence_summary.csv"),
                            rows, summary)
    rep = VerificationReport(f"norm_equivalence {L.name}")
    for name, s1, s2, change, ok in summary:
        rep.add(f"spread {name}", s1, 100.0, np.isfinite(s1) and s1 <= 100.0,
                grid=f"{len(ids)} functions")
        rep.add(f"spread_change {name}", change, 0.10, change <= 0.10)
    reports.append(rep)
    _report_csv(ctx.path("checks.csv"), reports)
    return reports


_RUNNERS = dict(stable=suite_stable, subordination=suite_subordination,
                domination=suite_domination, maximal=suite_maximal, hardy=suite_hardy)


def run(cfg, output_dir=None, parallel=1, tolerance_scale=1.0, log=None):
    """Execute the configured suites; returns the exit status."""
    log = log or sys.stderr
    out = output_dir or (cfg.output_dir if os.path.isabs(cfg.output_dir)
                         else os.path.join(cfg.base_dir, cfg.output_dir))
    L = cfg.operator()
    os.makedirs(out, exist_ok=True)
    summary, status = [], EXIT_OK
    pool = ThreadPoolExecutor(parallel) if parallel > 1 else None
    try:
        for name in cfg.suites:
            sub = os.path.join(out, name)
            os.makedirs(sub, exist_ok=True)
            try:
                reports = _RUNNERS[name](_Ctx(cfg, L, sub, pool, tolerance_scale))
            except Exception as exc:  # computation failure: keep what was written
                traceback.print_exc(file=log)
                summary.append((name, "<error>", type(exc).__name__, None, None, None, False,
                                "paper", str(exc)))
                status = EXIT_FAIL
                continue
            for rep in reports:
                for row in rep.rows():
                    summary.append((name,) + row)
                    if row[6] == "paper" and not row[5]:
                        status = EXIT_FAIL
            print(f"{name}: {sum(r[5] for rep in reports for r in rep.rows())}/"
                  f"{sum(len(rep.checks) for rep in reports)} checks pass", file=log)
    finally:
        if pool:
            pool.shutdown()
        write_csv(os.path.join(out, "summary.csv"), ("suite",) + VerificationReport.HEADER, summary)
    return status


DESCRIPTIONS = {
    "stable": """\
stable: one-sided stable subordinator densities p_u(t)
  - closed form at alpha = 1/2: (2 sqrt(pi))^-1 t^-3/2 exp(-1/(4t))
  - positivity and unit mass
  - tail p_1(t) ~ c t^-(1+alpha) with c = Gamma(1+alpha) sin(pi alpha)/pi, and the derivative tail
  - faster-than-polynomial decay at the origin
  - convolution law p_u * p_v = p_(u+v) and scaling p_u(t) = u^(-1/alpha) p_1(u^(-1/alpha) t)
  code: subordlab.stable.density_audit""",
    "subordination": """\
subordination: semigroups written as integrals of the heat semigroup
  - Poisson semigroup exp(-t L^(1/2)) via the kernel t exp(-t^2/4u) / (2 sqrt(pi) u^(3/2))
  - derivatives (t L^(1/2))^k exp(-t L^(1/2)) via time derivatives of the Gaussian factor
  - complex times |arg z| < pi/4 via the same kernel continued in z
  - exp(-t L^alpha) via the stable density
  each compared in max norm against direct spectral evaluation
  code: subordlab.subordination.subordinate_apply""",
    "domination": """\
domination: pointwise bounds by the positive Poisson semigroup
  - |(t L^(1/2))^k P_t f| <= C(k, theta) P_(theta t) |f|: empirical constant, grid stability,
    and comparison with the explicit constant 4 sqrt(2) k! / (sin(beta)^k gamma)
  - |P_z f| <= 4 sqrt(2) / gamma * P_(gamma tau) |f| on the sector window
    tau <= Re z <= 4 tau, |arg z| <= beta, gamma = (1 - tan^2 beta)^(1/2); functions and kernels
  - scalar inequality behind the derivative bound, with constant 1/2 at k = 0
  - the same bounds when the heat semigroup is dominated by another positive one
  code: subordlab.domination""",
    "maximal": """\
maximal: ergodic averages A^s = s^-1 int_0^s exp(-tL) dt and A* f = sup_s |A^s f|
  - weak type (1,1) with constant 2
  - strong type (p,p) with constant 2 (p/(p-1))^(1/p)
  - |h~(L) f| <= C_h A* f with C_h = int |t h'(t)| dt, for h the stable densities p_u
  - sector maximal function sup over complex u of |exp(-u L^alpha) f| against A* f (empirical)
  code: subordlab.maximal""",
    "hardy": """\
hardy: square functions, Hardy and BMO norms for L^alpha
  - volume regularity mu(B(x, r)) ~ r^n
  - kernel bounds for exp(-tL), tL exp(-tL) and their fractional versions
  - cross-scale decay of Q(s^m L) Q(t^(m alpha) L^alpha) with exponent m alpha
  - reproducing identity c_m int_0^inf Q(t^m z)^2 dt/t = 1 and the tail operator Phi_t
  - averages against (1 + rho/s)^-(n+eps) s^-n bounded by the Hardy-Littlewood maximal function
  - equivalence of area-function norms for L^alpha and L, area and vertical square functions,
    and of BMO norms for L^alpha and L
  code: subordlab.hardy""",
}


def describe(suite, stream=None):
    """Print what ``suite`` verifies; raises :class:`ConfigError` for unknown names."""
    if suite == "all":
        text = "\n\n".join(DESCRIPTIONS[s] for s in SUITES)
    elif suite in DESCRIPTIONS:
        text = DESCRIPTIONS[suite]
    else:
        raise ConfigError("suite", f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    print(text, file=stream or sys.stdout)


def build_parser():
    ap = argparse.ArgumentParser(prog="subordlab", description="Run verification suites.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the suites named in a configuration file")
    r.add_argument("config")
    r.add_argument("--output-dir", default=None)
    r.add_argument("--parallel", type=int, default=1, metavar="K")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--tolerance-scale", type=float, default=1.0, metavar="F")
    d = sub.add_parser("describe", help="explain what a suite verifies")
    d.add_argument("suite")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "describe":
            describe(args.suite)
            return EXIT_OK
        if args.parallel < 1:
            raise ConfigError("--parallel", "must be at least 1")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed", "must be nonnegative")
        if not (args.tolerance_scale > 0):
            raise ConfigError("--tolerance-scale", "must be positive")
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, args.output_dir, args.parallel, args.tolerance_scale)


if __name__ == "__main__":
    sys.exit(main())
