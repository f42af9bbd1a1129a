"""Command-line front end.

Subcommands: det, compare, stats, painleve, toeplitz.  Exit status 0 on
success, 2 on usage errors, 3 when a numerical routine fails.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

from . import asymptotics, fredholm, painleve, stats, toeplitz
from .errors import ChgdetError
from .kernel import KernelParams

__all__ = ["RouteReport", "run_route", "main", "SCHEMA"]

SCHEMA = 1
ROUTES = ("quadrature", "asymptotic", "painleve", "toeplitz")
EXIT_USAGE = 2
EXIT_NUMERIC = 3


@dataclass
class RouteReport:
    route: str
    params: KernelParams
    s: float
    value: float
    meta: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "route": self.route,
            "alpha": self.params.alpha,
            "beta_im": self.params.b,
            "gamma": self.params.gamma,
            "s": self.s,
            "value": self.value,
            "meta": dict(sorted(self.meta.items())),
        }


def run_route(route, params, s, nodes=None, tol=1e-10):
    """Evaluate ln det(I - gamma K_s) by one route."""
    if route == "quadrature":
        if nodes is not None:
            val = fredholm.log_det(fredholm.build_operator(params, s, nodes), params.gamma)
            return RouteReport(route, params, s, val, {"n_used": nodes, "tol": None, "est_err": None})
        res = fredholm.log_det_converged(params, s, params.gamma, tol)
        return RouteReport(route, params, s, res.value, {"n_used": res.n_used, "tol": tol, "est_err": res.est_err})
    if route == "asymptotic":
        br = asymptotics.log_asym_det(params, s)
        meta = {k: v for k, v in asdict(br).items() if k != "total"}
        return RouteReport(route, params, s, br.total, meta)
    if route == "painleve":
        t0 = 1e-3
        res = painleve.log_det_via_H(params, s, t0=t0, tol=tol)
        meta = {"t0": t0, "tol": tol, "imag_residue": res.imag_residue, "n_steps": res.n_steps}
        return RouteReport(route, params, s, res.value, meta)
    if route == "toeplitz":
        n = 256 if nodes is None else nodes
        val = toeplitz.scaling_limit_check(params, s, n)
        return RouteReport(route, params, s, val, {"n_toeplitz": n})
    raise ValueError(f"unknown route {route!r}")


# --- argument types -------------------------------------------------------


def _finite(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _alpha(text):
    v = _finite(text)
    if not v > -0.5:
        raise argparse.ArgumentTypeError(f"must exceed -0.5: {text!r}")
    return v


def _gamma(text):
    v = _finite(text)
    if not 0.0 <= v < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1): {text!r}")
    return v


def _positive(text):
    v = _finite(text)
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nodes(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 4:
        raise argparse.ArgumentTypeError(f"must be at least 4: {text!r}")
    return v


def _tol(text):
    v = _finite(text)
    if not 1e-12 <= v <= 1e-3:
        raise argparse.ArgumentTypeError(f"must lie in [1e-12, 1e-3]: {text!r}")
    return v


def _s_list(text):
    return [_positive(part) for part in text.split(",") if part.strip()]


def _n_list(text):
    return [_nodes(part) for part in text.split(",") if part.strip()]


def _routes(text):
    out = [r.strip() for r in text.split(",") if r.strip()]
    bad = [r for r in out if r not in ROUTES]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"routes must be drawn from {','.join(ROUTES)}: {text!r}")
    return out


def _build_parser():
    parser = argparse.ArgumentParser(prog="chgdet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_gamma=True, need_s=True):
        p.add_argument("--alpha", type=_alpha, required=True)
        p.add_argument("--beta-im", type=_finite, default=0.0, help="b, where beta = i b")
        if need_gamma:
            p.add_argument("--gamma", type=_gamma, required=True)
        if need_s:
            p.add_argument("--s", type=_positive, required=True)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("det", help="log-determinant by one route")
    common(p)
    p.add_argument("--nodes", type=_nodes)
    p.add_argument("--tol", type=_tol, default=1e-10)
    p.add_argument("--route", choices=ROUTES, default="quadrature")

    p = sub.add_parser("compare", help="cross-route table over several s")
    common(p, need_s=False)
    p.add_argument("--s-list", type=_s_list, required=True)
    p.add_argument("--routes", type=_routes, default=["quadrature", "asymptotic"])
    p.add_argument("--nodes", type=_nodes)
    p.add_argument("--tol", type=_tol, default=1e-10)

    p = sub.add_parser("stats", help="counting statistics of N(s)")
    common(p, need_gamma=False)
    p.add_argument("--nodes", type=_nodes)

    p = sub.add_parser("painleve", help="Painleve trajectory as CSV")
    common(p)
    p.add_argument("--tol", type=_tol, default=1e-10)
    p.add_argument("--t0", type=_positive, default=1e-3)

    p = sub.add_parser("toeplitz", help="Toeplitz ratio table against quadrature")
    common(p)
    p.add_argument("--nodes", type=_n_list, default=[64, 128, 256], help="comma-separated Toeplitz sizes")
    p.add_argument("--tol", type=_tol, default=1e-10)
    return parser


# --- output ---------------------------------------------------------------


def _dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _params(ns):
    return KernelParams(ns.alpha, ns.beta_im, getattr(ns, "gamma", 0.0))


def _cmd_det(ns):
    rep = run_route(ns.route, _params(ns), ns.s, ns.nodes, ns.tol)
    d = rep.as_dict()
    if ns.format == "json":
        return _dumps({"schema": SCHEMA, **d})
    meta = d.pop("meta")
    header = list(d) + [f"meta_{k}" for k in meta]
    return _csv(header, [list(d.values()) + list(meta.values())])


def _cmd_compare(ns):
    params = _params(ns)
    rows = []
    for s in ns.s_list:
        reps = [run_route(r, params, s, ns.nodes, ns.tol) for r in ns.routes]
        ref = reps[0].value
        for rep in reps:
            gap = abs(rep.value - ref)
            rows.append(
                {
                    "s": s,
                    "route": rep.route,
                    "value": rep.value,
                    "reference_route": ns.routes[0],
                    "gap": gap,
                    "gap_times_s": gap * s if rep.route == "asymptotic" else None,
                }
            )
    if ns.format == "json":
        return _dumps({"schema": SCHEMA, "alpha": params.alpha, "beta_im": params.b, "gamma": params.gamma, "rows": rows})
    return _csv(list(rows[0]), [list(r.values()) for r in rows])


def _cmd_stats(ns):
    params = _params(ns)
    summ = stats.counting_summary(params, ns.s, ns.nodes)
    ref = asymptotics.counting_refs(params.alpha, ns.s)
    out = {
        "s": ns.s,
        "alpha": params.alpha,
        "beta_im": params.b,
        "e_n": summ.e_n,
        "var_n": summ.var_n,
        "ks_normal": summ.ks_normal,
        "n_eigs": summ.n_eigs,
        "n_quad": summ.n_quad,
        "mu": ref["mu"],
        "sigma2": ref["sigma2"],
        "var_const": ref["var_const"],
        "mean_gap": abs(summ.e_n - ref["mu"]),
        "var_gap": abs(summ.var_n - ref["sigma2"] - ref["var_const"]),
    }
    if ns.format == "json":
        return _dumps({"schema": SCHEMA, **out})
    return _csv(list(out), [list(out.values())])


def _cmd_painleve(ns):
    tr = painleve.pv_integrate(_params(ns), ns.t0, 4.0 * ns.s, ns.tol)
    buf = io.StringIO()
    painleve.write_trajectory_csv(tr, buf)
    if ns.format == "csv":
        return buf.getvalue()
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    return _dumps({"schema": SCHEMA, "columns": rows[0], "rows": [[float(v) for v in r] for r in rows[1:]]})


def _cmd_toeplitz(ns):
    params = _params(ns)
    quad = fredholm.log_det_converged(params, ns.s, params.gamma, ns.tol).value
    rows = []
    for n in ns.nodes:
        val = toeplitz.scaling_limit_check(params, ns.s, n)
        rows.append({"n": n, "toeplitz": val, "quadrature": quad, "gap": abs(val - quad)})
    if ns.format == "json":
        return _dumps({"schema": SCHEMA, "s": ns.s, "rows": rows})
    return _csv(list(rows[0]), [list(r.values()) for r in rows])


_COMMANDS = {
    "det": _cmd_det,
    "compare": _cmd_compare,
    "stats": _cmd_stats,
    "painleve": _cmd_painleve,
    "toeplitz": _cmd_toeplitz,
}


def main(argv=None):
    ns = _build_parser().parse_args(argv)  # exits with status 2 on bad flags
    try:
        text = _COMMANDS[ns.command](ns)
    except ChgdetError as exc:
        print(f"chgdet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
