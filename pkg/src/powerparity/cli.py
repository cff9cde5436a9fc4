"""Command-line front end: reproducible experiments with JSON or CSV reports.

Exit status: 0 when every check in the selected experiment passed, 1 when a
check failed (the report names it and gives the smallest counterexample), 2
for configuration or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from . import __version__
from .asymptotics import (
    asymptotic_model,
    equidistribution_ratio,
    int_log,
    lemma1_residuals,
    main_term,
)
from .counting import (
    alternating_direct,
    alternating_via_convolution,
    count_by_parts_mod,
    cyclic_pattern_report,
    glaisher_odd_distinct,
    ordering_sequence,
    parity_report,
)
from .gauss import (
    STECHKIN_BOUND,
    TruncationCapError,
    gauss_data,
    lambda_small,
    lemma4_scan,
    stechkin_scan,
    truncation_for_tol,
)
from .partsets import PartSetError, PartSetSpec, kth_powers, parse_spec
from .series import expand_Gk
from .wright import DivergentProductError, wright_check

COMMANDS = (
    "count",
    "parity",
    "equidist",
    "convolution",
    "glaisher",
    "gauss",
    "lambda",
    "wright",
    "asym",
    "explore",
)
THREADS_ENV = "POWERPARITY_THREADS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    spec: Optional[PartSetSpec] = None
    N: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    tolerances: dict[str, float] = field(default_factory=dict)
    output: str = "json"
    output_path: Optional[str] = None
    threads: int = 1
    params: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.N is not None and self.N < 0:
            raise ConfigError(f"N must be >= 0, got {self.N}")
        if self.m is not None and self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.k is not None and self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise ConfigError(f"tolerance {name} must be positive, got {tol}")
        if self.output not in ("json", "csv"):
            raise ConfigError(f"output must be json or csv, got {self.output!r}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "spec": None if self.spec is None else self.spec.describe(),
            "N": self.N,
            "m": self.m,
            "k": self.k,
            "tolerances": dict(self.tolerances),
            "output": self.output,
            "params": dict(self.params),
        }


@dataclass
class Outcome:
    passed: bool
    result: dict
    rows: Optional[list[list]] = None  # CSV body, header first
    failure: Optional[dict] = None


def _clean(obj):
    """Make a report JSON-safe: big ints as strings, complex as pairs, no NaN."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2**53 else str(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _clean(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(config: RunConfig, outcome: Outcome) -> str:
    report = {
        "version": __version__,
        "config": config.to_dict(),
        "passed": outcome.passed,
        "result": outcome.result,
    }
    if outcome.failure is not None:
        report["failure"] = outcome.failure
    return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"


def render_csv(outcome: Outcome) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if outcome.rows is not None:
        for row in outcome.rows:
            w.writerow(["" if v is None else v for v in row])
    else:
        w.writerow(["key", "value"])
        for key, value in sorted(_flatten(_clean(outcome.result)).items()):
            w.writerow([key, value])
    return buf.getvalue()


def _flatten(obj, prefix=""):
    out = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, list) and not all(isinstance(v, (int, float, str, type(None))) for v in obj):
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
    else:
        out[prefix.rstrip(".")] = json.dumps(obj) if isinstance(obj, list) else obj
    return out


# experiments ----------------------------------------------------------------


def _need(value, name):
    if value is None:
        raise ConfigError(f"--{name} is required for this command")
    return value


def run_count(cfg: RunConfig) -> Outcome:
    spec, N, m = _need(cfg.spec, "spec"), _need(cfg.N, "N"), cfg.m or 2
    prof = count_by_parts_mod(spec, m, N)
    rows = [r for r in csv.reader(io.StringIO(prof.to_csv()))]
    result = {"m": m, "N": N, "counts": {str(a): list(prof.table[a]) for a in range(m)}}
    return Outcome(True, result, rows)


def run_parity(cfg: RunConfig) -> Outcome:
    spec, N = _need(cfg.spec, "spec"), _need(cfg.N, "N")
    rep = parity_report(spec, N)
    rows = [["n", "a(n)"]] + [[n, str(v)] for n, v in enumerate(rep.stream.a)]
    failure = None
    if not rep.passed:
        n = rep.negatives[0]
        failure = {"check": "a(n) >= 0", "n": n, "a(n)": str(rep.stream.a[n])}
    return Outcome(rep.passed, rep.to_dict(), rows, failure)


def run_equidist(cfg: RunConfig) -> Outcome:
    k, n = _need(cfg.k, "k"), _need(cfg.N, "N")
    tol = cfg.tolerances.get("deviation", 1e-4)
    ratio, dev = equidistribution_ratio(k, n)
    passed = abs(dev) < tol
    result = {
        "k": k,
        "n": n,
        "ratio_exact": f"{ratio.numerator}/{ratio.denominator}",
        "ratio": float(ratio),
        "deviation": dev,
    }
    failure = None if passed else {"check": f"|ratio - 1/2| < {tol}", "n": n, "deviation": dev}
    return Outcome(passed, result, None, failure)


def _first_mismatch(x, y):
    return next((n for n, (u, v) in enumerate(zip(x, y)) if u != v), None)


def run_convolution(cfg: RunConfig) -> Outcome:
    spec, N = _need(cfg.spec, "spec"), _need(cfg.N, "N")
    direct = alternating_direct(spec, N).a
    conv = alternating_via_convolution(spec, N).a
    bad = _first_mismatch(direct, conv)
    rows = [["n", "direct", "convolution"]] + [[n, str(u), str(v)] for n, (u, v) in enumerate(zip(direct, conv))]
    failure = None
    if bad is not None:
        failure = {"check": "convolution == direct", "n": bad, "direct": direct[bad], "convolution": conv[bad]}
    return Outcome(bad is None, {"N": N, "agree": bad is None}, rows, failure)


def run_glaisher(cfg: RunConfig) -> Outcome:
    N = _need(cfg.N, "N")
    signed = alternating_direct(kth_powers(1), N).a
    odd_distinct = glaisher_odd_distinct(N)
    bad = _first_mismatch(signed, odd_distinct)
    rows = [["n", "(-1)^n (p(0,2,n) - p(1,2,n))", "p_odd_distinct(n)"]] + [
        [n, str(u), str(v)] for n, (u, v) in enumerate(zip(signed, odd_distinct))
    ]
    failure = None
    if bad is not None:
        failure = {"check": "signed parity difference == odd distinct count", "n": bad,
                   "lhs": signed[bad], "rhs": odd_distinct[bad]}
    return Outcome(bad is None, {"N": N, "agree": bad is None}, rows, failure)


def run_gauss(cfg: RunConfig) -> Outcome:
    if cfg.params.get("action") == "scan":
        kmax = _need(cfg.params.get("kmax"), "kmax")
        bmax = _need(cfg.params.get("bmax"), "bmax")
        rows = stechkin_scan(kmax, bmax, threads=cfg.threads)
        if not rows:
            raise ConfigError("empty scan range")
        worst = max(rows, key=lambda r: (r[4], -r[0], -r[2], -r[1]))
        passed = worst[4] <= STECHKIN_BOUND
        result = {
            "pairs_checked": len(rows),
            "max_ratio": worst[4],
            "argmax": {"k": worst[0], "a": worst[1], "b": worst[2]},
            "bound": STECHKIN_BOUND,
        }
        failure = None
        if not passed:
            first = next(r for r in rows if r[4] > STECHKIN_BOUND)
            failure = {"check": "ratio <= bound", "k": first[0], "a": first[1], "b": first[2], "ratio": first[4]}
        table = [["k", "a", "b", "abs_S", "ratio"]] + [list(r) for r in rows]
        return Outcome(passed, result, table, failure)
    k, a, b = _need(cfg.k, "k"), _need(cfg.params.get("a"), "a"), _need(cfg.params.get("b"), "b")
    data = gauss_data(k, a, b, M=cfg.params.get("M"), tol=cfg.tolerances.get("lambda", 1e-8))
    return Outcome(True, data.to_dict())


def run_lambda(cfg: RunConfig) -> Outcome:
    action = cfg.params.get("action") or "value"
    tol = cfg.tolerances.get("lambda", 1e-6)
    if action == "scan":
        kmax = _need(cfg.params.get("kmax"), "kmax")
        bmax = _need(cfg.params.get("bmax"), "bmax")
        rows = lemma4_scan(kmax, bmax, tol=tol, threads=cfg.threads)
        if not rows:
            raise ConfigError("empty scan range")
        slack = [(r[5] - r[3] - r[4], r) for r in rows]
        tight = min(slack, key=lambda t: (t[0], t[1][0], t[1][2], t[1][1]))
        passed = tight[0] >= 0
        result = {
            "pairs_checked": len(rows),
            "min_slack": tight[0],
            "tightest": {"k": tight[1][0], "a": tight[1][1], "b": tight[1][2]},
            "max_fraction_of_bound": max((r[3] + r[4]) / r[5] for r in rows),
        }
        failure = None
        if not passed:
            r = next(r for s, r in slack if s < 0)
            failure = {"check": "|lambda| + error <= bound", "k": r[0], "a": r[1], "b": r[2],
                       "lhs": r[3] + r[4], "bound": r[5]}
        table = [["k", "a", "b", "abs_lambda", "error_bound", "bound"]] + [list(r) for r in rows]
        return Outcome(passed, result, table, failure)
    if action == "coherence":
        kmin, kmax = cfg.params.get("kmin") or 2, _need(cfg.params.get("kmax"), "kmax")
        rows, failure = [], None
        for k in range(kmin, kmax + 1):
            M = truncation_for_tol(k, tol)
            lam, err = lambda_small(k, 0, 1, M)
            B = asymptotic_model(k).B
            gap = abs(lam - B)
            ok = gap <= err + 1e-10
            rows.append({"k": k, "M": M, "lambda": lam, "B": B, "gap": gap, "error_bound": err, "ok": ok})
            if not ok and failure is None:
                failure = {"check": "|lambda_{0,1} - B| <= error + 1e-10", "k": k, "gap": gap, "error_bound": err}
        return Outcome(failure is None, {"rows": rows}, None, failure)
    k, a, b = _need(cfg.k, "k"), _need(cfg.params.get("a"), "a"), _need(cfg.params.get("b"), "b")
    data = gauss_data(k, a, b, M=cfg.params.get("M"), tol=tol)
    return Outcome(True, data.to_dict())


def _wright_point(k, a, b, tau, tol, accept, experimental):
    odd_large = k % 2 == 1 and b > 2
    if odd_large and not experimental:
        raise ConfigError(f"k={k} with b={b} > 2 is only available with --experimental")
    ev = wright_check(k, a, b, tau, tol=tol)
    row = ev.to_dict()
    row["asserted"] = not odd_large
    row["ok"] = ev.residual < accept
    if odd_large:
        row["square_convention_residual"] = wright_check(k, a, b, tau, tol=tol, root_power=2).residual
    return row


def run_wright(cfg: RunConfig) -> Outcome:
    k = _need(cfg.k, "k")
    tol = cfg.tolerances.get("transform", 1e-10)
    accept = cfg.tolerances.get("accept", 1e-6)
    experimental = bool(cfg.params.get("experimental"))
    if cfg.params.get("action") == "grid":
        pairs = _need(cfg.params.get("pairs"), "pairs")
        taus = _need(cfg.params.get("tau_list"), "tau-list")
        points = [_wright_point(k, a, b, complex(t), tol, accept, experimental) for a, b in pairs for t in taus]
    else:
        a, b = _need(cfg.params.get("a"), "a"), _need(cfg.params.get("b"), "b")
        tau = complex(cfg.params.get("tau_re", 0.2), cfg.params.get("tau_im", 0.0))
        points = [_wright_point(k, a, b, tau, tol, accept, experimental)]
    failed = [p for p in points if p["asserted"] and not p["ok"]]
    failure = None
    if failed:
        p = failed[0]
        failure = {"check": f"relative residual < {accept}", "a": p["a"], "b": p["b"],
                   "tau_prime": p["tau_prime"], "residual": p["relative_residual"]}
    rows = [["k", "a", "b", "tau_re", "tau_im", "L", "M", "relative_residual", "asserted",
              "square_convention_residual"]] + [
        [p["k"], p["a"], p["b"], p["tau_prime"][0], p["tau_prime"][1], p["L"], p["M"],
         p["relative_residual"], p["asserted"], p.get("square_convention_residual")]
        for p in points
    ]
    return Outcome(not failed, {"points": points}, rows, failure)


def run_asym(cfg: RunConfig) -> Outcome:
    k = _need(cfg.k, "k")
    if cfg.params.get("action") == "lemma1":
        ys = cfg.params.get("y_list") or [0.2, 0.1, 0.05, 0.02]
        rep = lemma1_residuals(k, ys)
        failure = None
        if not rep.passed:
            failure = {"check": "residual strictly decreasing with positive log-log slope",
                       "residual": list(rep.residuals), "slope": rep.slope}
        rows = [["y", "residual"]] + [[y, r] for y, r in zip(rep.ys, rep.residuals)]
        return Outcome(rep.passed, rep.to_dict(), rows, failure)
    ns = sorted(_need(cfg.params.get("n_list"), "n-list"))
    lo, hi = cfg.params.get("band", (0.7, 1.3))
    a = expand_Gk(k, ns[-1]).coeffs
    points = []
    for n in ns:
        log_main, _ = main_term(k, n)
        ratio = math.exp(int_log(a[n]) - log_main) if a[n] > 0 else 0.0
        points.append({"n": n, "a_k(n)": str(a[n]), "log_main_term": log_main, "ratio": ratio})
    failure = None
    for p in points:
        if not lo <= p["ratio"] <= hi:
            failure = {"check": f"ratio in [{lo}, {hi}]", "n": p["n"], "ratio": p["ratio"]}
            break
    if failure is None:
        for p, q in zip(points, points[1:]):
            if abs(q["ratio"] - 1) > abs(p["ratio"] - 1):
                failure = {"check": "|ratio - 1| non-increasing", "n": q["n"], "ratio": q["ratio"],
                           "previous_ratio": p["ratio"]}
                break
    rows = [["n", "a_k(n)", "log_main_term", "ratio"]] + [
        [p["n"], p["a_k(n)"], p["log_main_term"], p["ratio"]] for p in points
    ]
    return Outcome(failure is None, {"k": k, "band": [lo, hi], "points": points}, rows, failure)


def run_explore(cfg: RunConfig) -> Outcome:
    spec, N, m = _need(cfg.spec, "spec"), _need(cfg.N, "N"), cfg.m or 3
    if m < 2:
        raise ConfigError("explore needs m >= 2")
    prof = count_by_parts_mod(spec, m, N)
    pattern = cyclic_pattern_report(prof)
    order = ordering_sequence(spec, m, N, profile=prof).to_dict()
    if pattern["first_violation"] is not None:
        pattern["status"] = (
            f"pattern holds on {pattern['segment_start']}..{pattern['segment_end']}, "
            f"loses its structure at n={pattern['first_violation']}"
        )
    elif pattern["segment_start"] is not None:
        pattern["status"] = f"pattern holds from n={pattern['segment_start']} up to the horizon N={N}"
    else:
        pattern["status"] = f"pattern never holds up to N={N}"
    result = {"pattern": pattern, "ordering": {k: v for k, v in order.items() if k != "u"}}
    rows = [["n"] + [f"rank{i}" for i in range(m)]] + [[n + 1] + list(u) for n, u in enumerate(order["u"])]
    return Outcome(True, result, rows)


RUNNERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "count": run_count,
    "parity": run_parity,
    "equidist": run_equidist,
    "convolution": run_convolution,
    "glaisher": run_glaisher,
    "gauss": run_gauss,
    "lambda": run_lambda,
    "wright": run_wright,
    "asym": run_asym,
    "explore": run_explore,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one experiment; returns ``(exit status, rendered report)``."""
    config.validate()
    outcome = RUNNERS[config.command](config)
    text = render_json(config, outcome) if config.output == "json" else render_csv(outcome)
    return (0 if outcome.passed else 1), text


# argument parsing -----------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(float(v)) for v in text.split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _pair_list(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        a, _, b = item.strip().partition("/")
        out.append((int(a), int(b)))
    return out


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "--report", dest="output", choices=("json", "csv"), default="json")
    common.add_argument("--output-path", default=None, help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"worker processes (default from ${THREADS_ENV}, else 1)")

    parser = argparse.ArgumentParser(prog="powerparity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="partition counts by number of parts mod m")
    p.add_argument("--spec", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=2)

    p = sub.add_parser("parity", parents=[common], help="sign of the parity difference up to N")
    p.add_argument("--spec", required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("equidist", parents=[common], help="even-part share of p_k(n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True, help="the weight n")
    p.add_argument("--tol", type=float, default=1e-4)

    p = sub.add_parser("convolution", parents=[common], help="convolution identity vs direct DP")
    p.add_argument("--spec", required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("glaisher", parents=[common], help="parity difference vs distinct odd parts")
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("gauss", parents=[common], help="Gauss sums and the Stechkin scan")
    p.add_argument("action", nargs="?", choices=("value", "scan"), default="value")
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--kmax", type=int)
    p.add_argument("--bmax", type=int)

    p = sub.add_parser("lambda", parents=[common], help="lambda_{a,b}: value, bound scan, coherence")
    p.add_argument("action", nargs="?", choices=("value", "scan", "coherence"), default="value")
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int)
    p.add_argument("--bmax", type=int)

    p = sub.add_parser("wright", parents=[common], help="modular transformation vs direct series")
    p.add_argument("action", nargs="?", choices=("check", "grid"), default="check")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--tau-re", type=float, default=0.2)
    p.add_argument("--tau-im", type=float, default=0.0)
    p.add_argument("--pairs", type=_pair_list, default=None, help="e.g. 0/1,1/2,1/3")
    p.add_argument("--tau-list", type=_float_list, default=None)
    p.add_argument("--tol", type=float, default=1e-10, help="truncation target for both sides")
    p.add_argument("--accept", type=float, default=1e-6, help="largest accepted relative residual")
    p.add_argument("--experimental", action="store_true",
                   help="allow odd k with b > 2; such points are reported, not asserted")

    p = sub.add_parser("asym", parents=[common], help="main term and small-y behaviour")
    p.add_argument("action", choices=("compare", "lemma1"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-list", type=_int_list, default=None)
    p.add_argument("--y-list", type=_float_list, default=None)
    p.add_argument("--band", type=_float_list, default=[0.7, 1.3])

    p = sub.add_parser("explore", parents=[common], help="ordering of residue classes mod m")
    p.add_argument("--spec", required=True)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--N", type=int, required=True)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    get = lambda name: getattr(ns, name, None)  # noqa: E731
    spec = parse_spec(ns.spec) if get("spec") else None
    tolerances: dict[str, float] = {}
    params: dict[str, Any] = {}
    cmd = ns.command
    if cmd == "equidist":
        tolerances["deviation"] = ns.tol
    elif cmd in ("gauss", "lambda"):
        tolerances["lambda"] = ns.tol
        params.update(action=ns.action, a=ns.a, b=ns.b, M=ns.M, kmax=ns.kmax, bmax=ns.bmax)
        if cmd == "lambda":
            params["kmin"] = ns.kmin
    elif cmd == "wright":
        tolerances.update(transform=ns.tol, accept=ns.accept)
        params.update(action=ns.action, a=ns.a, b=ns.b, tau_re=ns.tau_re, tau_im=ns.tau_im,
                      pairs=ns.pairs, tau_list=ns.tau_list, experimental=ns.experimental)
    elif cmd == "asym":
        if len(ns.band) != 2:
            raise ConfigError("--band takes two numbers, e.g. 0.7,1.3")
        params.update(action=ns.action, n_list=ns.n_list, y_list=ns.y_list, band=tuple(ns.band))
    return RunConfig(
        command=cmd,
        spec=spec,
        N=get("N"),
        m=get("m"),
        k=get("k"),
        tolerances=tolerances,
        output=ns.output,
        output_path=ns.output_path,
        threads=ns.threads,
        params=params,
    )


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        status, text = run(config)
    except (ConfigError, PartSetError, TruncationCapError, DivergentProductError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config.output_path:
        try:
            Path(config.output_path).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {config.output_path}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    if status:
        print("check failed; see the 'failure' entry of the report", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
