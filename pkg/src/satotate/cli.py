"""Command-line entry point: `satotate <subcommand> [flags]`.

Every subcommand writes one JSON document (or CSV for histograms) to stdout;
progress and skipped primes go to stderr. Exit codes: 0 ok, 2 invalid input,
3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__
from .equidist import (
    Z_THRESHOLD,
    char_sum_series,
    classify_traces,
    diagnose,
    histogram,
    hybrid_filter,
    compare_moments,
)
from .finite_field import IntPoly
from .frobenius_data import (
    EllipticCurveQ,
    HyperCurveQ,
    detect_period,
    ec_scan,
    g2_scan,
    is_ordinary,
    power_sequence,
)
from .galois_cm import (
    CMTypeSpec,
    cm_rank,
    cm_rank_oracle,
    cyclotomic_densities,
    parse_expected,
    parse_group,
    pattern_densities,
)
from .lseries import chi_sum_profile, dirichlet_F, partial_euler
from .st_groups import CATALOG, IrrepSpec, get_group, haar_sample, st3_audit, trace_moment

MAX_BOUND = 2**31
EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 2, 3


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    bound: int
    seed: int
    fmt: str
    k_max: int
    z_threshold: float
    bins: int
    threads: int | None

    def validate(self):
        if not 3 <= self.bound <= MAX_BOUND:
            raise InvalidInput(f"--bound must lie in [3, 2^31], got {self.bound}")
        if not 1 <= self.k_max <= 12:
            raise InvalidInput("--k-max must lie in [1, 12]")
        if not self.z_threshold > 0:
            raise InvalidInput("--z-threshold must be positive")
        if self.bins < 1:
            raise InvalidInput("--bins must be positive")
        if self.threads is not None and self.threads < 1:
            raise InvalidInput("--threads must be positive")
        if self.seed < 0:
            raise InvalidInput("--seed must be non-negative")


# --- input grammar --------------------------------------------------------

_TERM = re.compile(r"^(\d*)\*?(x(?:\^(\d+))?)?$")


def parse_poly(text: str) -> IntPoly:
    """Integer polynomial in x, e.g. 'x^5 - 3x^2 + 1' or '2*x^3+x'."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise InvalidInput("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-])([^+-]*)", s):
        m = _TERM.match(body)
        if not body or not m or (not m.group(1) and not m.group(2)):
            raise InvalidInput(f"cannot parse term {sign}{body!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        e = 0 if not m.group(2) else int(m.group(3) or 1)
        coeffs[e] = coeffs.get(e, 0) + (c if sign == "+" else -c)
    if "".join(re.findall(r"[+-][^+-]*", s)) != s:
        raise InvalidInput(f"cannot parse {text!r}")
    deg = max(coeffs)
    return IntPoly(tuple(coeffs.get(i, 0) for i in range(deg + 1)))


def parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from exc


def curve_from_args(args):
    if args.ab is not None:
        a, b = _pair(args.ab, "--ab")
        return _checked(EllipticCurveQ, a, b)
    if args.curve is None:
        raise InvalidInput("give --curve or --ab")
    f = parse_poly(args.curve)
    if f.degree == 3:
        c = f.coefficients
        if c[3] != 1 or c[2] != 0:
            raise InvalidInput("elliptic curves must be given as x^3 + a x + b")
        return _checked(EllipticCurveQ, c[1], c[0])
    if f.degree in (5, 6):
        return _checked(HyperCurveQ, f)
    raise InvalidInput(f"curve right-hand side must have degree 3, 5 or 6, not {f.degree}")


def _pair(text, flag):
    vals = parse_ints(text)
    if len(vals) != 2:
        raise InvalidInput(f"{flag} takes two integers")
    return vals


def _checked(factory, *a):
    try:
        return factory(*a)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


def _group(name):
    try:
        return get_group(name)
    except (KeyError, ValueError) as exc:
        raise InvalidInput(f"unknown group {name!r}; choose from {sorted(CATALOG)}") from exc


def _irrep(text):
    try:
        return IrrepSpec.parse(text)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


# --- sample sources -------------------------------------------------------


@dataclass
class Samples:
    source: dict
    primes: np.ndarray | None
    params: np.ndarray  # angles (n,) or angle pairs (n, 2)
    traces: np.ndarray
    group_hint: str | None = None


def _progress(msg: str):
    print(msg, file=sys.stderr)


def load_samples(args, cfg: RunConfig) -> Samples:
    if getattr(args, "haar", None):
        g = _group(args.haar)
        if args.n < 1:
            raise InvalidInput("--n must be positive")
        params = haar_sample(g, args.n, cfg.seed)
        return Samples({"haar": g.name, "n": args.n}, None, params, g.trace(params), g.name)
    curve = curve_from_args(args)
    if isinstance(curve, EllipticCurveQ):
        _progress(f"scanning {curve} up to {cfg.bound}")
        scan = ec_scan(curve, cfg.bound)
        if scan.skipped:
            _progress(f"skipped primes: {scan.skipped}")
        return Samples({"curve": str(curve), "bound": cfg.bound}, scan.primes, scan.angles, scan.normalized)
    _progress(f"scanning genus-2 curve y^2 = {curve} up to {cfg.bound}")
    factors = g2_scan(curve, cfg.bound)
    primes = np.array([lf.p for lf in factors], dtype=np.int64)
    params = np.array([lf.theta for lf in factors], dtype=float).reshape(-1, 2)
    traces = np.array([lf.a1 for lf in factors], dtype=float)
    return Samples({"curve": str(curve), "bound": cfg.bound}, primes, params, traces, "USp4")


def _require_primes(s: Samples):
    if s.primes is None:
        raise InvalidInput("this subcommand needs Frobenius data: give --curve or --ab")


# --- subcommands ----------------------------------------------------------


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def cmd_ec_scan(args, cfg):
    curve = curve_from_args(args)
    if not isinstance(curve, EllipticCurveQ):
        raise InvalidInput("ec-scan needs an elliptic curve")
    hybrid = _pair(args.hybrid, "--hybrid") if args.hybrid else None
    _progress(f"scanning {curve} up to {cfg.bound}")
    scan = ec_scan(curve, cfg.bound)
    if scan.skipped:
        _progress(f"skipped primes: {scan.skipped}")
    data = scan.data
    if hybrid:
        try:
            data = hybrid_filter(data, *hybrid)
        except ValueError as exc:
            raise InvalidInput(str(exc)) from exc
    traces = np.array([d.normalized for d in data])
    a_p = np.array([d.a_p for d in data], dtype=np.int64)
    out = {
        "curve": str(curve),
        "bound": cfg.bound,
        "n": len(data),
        "skipped": scan.skipped,
        "zero_fraction": float(np.mean(a_p == 0)) if len(a_p) else None,
    }
    if hybrid:
        out["hybrid"] = {"modulus": hybrid[0], "residue": hybrid[1]}
    group_name = args.group or "SU2"
    if args.classify:
        verdict, reports = classify_traces(traces, cfg.z_threshold)
        out["verdict"] = verdict
        out["classifier"] = {
            name: [r.as_dict() for r in rows] for name, rows in sorted(reports.items())
        }
        if verdict in CATALOG:
            group_name = verdict
    if len(traces):
        rep = diagnose(traces, _group(group_name), cfg.k_max, cfg.z_threshold)
        out["group"] = group_name
        out["moments"] = [r.as_dict() for r in rep.moments]
        out["discrepancy"] = rep.discrepancy
        out["diagnostic"] = rep.verdict
    else:
        out["moments"] = []
    if args.list:
        out["data"] = [[d.p, d.a_p] for d in data]
    return out


def cmd_g2_scan(args, cfg):
    curve = curve_from_args(args)
    if not isinstance(curve, HyperCurveQ):
        raise InvalidInput("g2-scan needs a degree 5 or 6 right-hand side")
    _progress(f"scanning genus-2 curve y^2 = {curve} up to {cfg.bound}")
    factors = g2_scan(curve, cfg.bound)
    group = _group(args.group or "USp4")
    if group.genus != 2:
        raise InvalidInput(f"{group.name} is not a genus-2 group")
    a1 = np.array([lf.a1 for lf in factors])
    a2 = np.array([lf.a2 for lf in factors])
    out = {"curve": str(curve), "bound": cfg.bound, "n": len(factors), "group": group.name}
    if len(factors):
        rep = diagnose(a1, group, cfg.k_max, cfg.z_threshold)
        out["moments"] = [r.as_dict() for r in rep.moments]
        out["a2_moments"] = [r.as_dict() for r in compare_moments(a2, group, min(cfg.k_max, 4), "a2")]
        out["discrepancy"] = rep.discrepancy
        out["verdict"] = rep.verdict
    if args.list:
        out["factors"] = [[lf.p, lf.e1, lf.e2] for lf in factors]
    return out


def cmd_power_seq(args, cfg):
    try:
        seq = power_sequence(args.q, args.aq, args.n_terms)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    rep = diagnose(seq.terms, get_group("U1"), cfg.k_max, cfg.z_threshold)
    return {
        "q": args.q,
        "a_q": args.aq,
        "n_terms": args.n_terms,
        "ordinary": is_ordinary(args.q, args.aq),
        "alpha": _cx(seq.alpha),
        "period": detect_period(seq.terms, max(2 * args.q, 12)),
        "moments": [r.as_dict() for r in rep.moments],
        "discrepancy": rep.discrepancy,
        "verdict": rep.verdict,
    }


def cmd_moments(args, cfg):
    group = _group(args.group)
    try:
        m = trace_moment(group, args.k, args.method)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    return {"group": group.name, "k": args.k, "value": m.value, "method": m.method}


def cmd_classify(args, cfg):
    s = load_samples(args, cfg)
    if s.traces.ndim != 1 or (s.group_hint and get_group(s.group_hint).genus != 1 and s.primes is not None):
        raise InvalidInput("the classifier handles weight-1 (elliptic) data only")
    verdict, reports = classify_traces(s.traces, cfg.z_threshold)
    return {
        **s.source,
        "n": len(s.traces),
        "verdict": verdict,
        "reports": {name: [r.as_dict() for r in rows] for name, rows in sorted(reports.items())},
    }


def _check_param_dim(irrep, s: Samples):
    pd = 1 if s.params.ndim == 1 else s.params.shape[1]
    if irrep.param_dim not in (None, pd):
        raise InvalidInput(f"{irrep.label} needs {irrep.param_dim}-angle samples, data has {pd}")


def cmd_char_sums(args, cfg):
    irrep = _irrep(args.irrep)
    s = load_samples(args, cfg)
    _check_param_dim(irrep, s)
    series = char_sum_series(s.params, irrep)
    return {**s.source, "irrep": irrep.label, "n": len(s.params),
            "series": [[n, *_cx(v)] for n, v in series]}


def cmd_euler(args, cfg):
    irrep = _irrep(args.irrep)
    s_values = [float(x) for x in args.s.split(",")] if args.s else [1.5]
    if any(not v > 1 for v in s_values):
        raise InvalidInput("every s must exceed 1")
    bounds = parse_ints(args.bounds) if args.bounds else [cfg.bound]
    if any(b > cfg.bound for b in bounds):
        raise InvalidInput("--bounds may not exceed --bound")
    s = load_samples(args, cfg)
    _require_primes(s)
    _check_param_dim(irrep, s)
    rows = []
    for sv in s_values:
        for b in bounds:
            ev = partial_euler(s.primes, s.params, irrep, sv, b)
            rows.append({
                "s": sv, "bound": b, "terms": ev.terms_used,
                "log_value": _cx(ev.log_value), "value": _cx(ev.value),
                "F": _cx(dirichlet_F(s.primes, s.params, irrep, sv, b)),
            })
    return {**s.source, "irrep": irrep.label, "rows": rows}


def cmd_chi_profile(args, cfg):
    irrep = _irrep(args.irrep)
    s = load_samples(args, cfg)
    _require_primes(s)
    _check_param_dim(irrep, s)
    prof = chi_sum_profile(s.primes, s.params, irrep, bound=cfg.bound)
    return {
        **s.source,
        "irrep": irrep.label,
        "profile": [[n, *_cx(v)] for n, v in prof.points],
        "final": _cx(prof.final),
        "slope_heuristic": prof.slope,
    }


def cmd_cebotarev(args, cfg):
    if args.n < 3 or cfg.bound < args.n:
        raise InvalidInput("need --n >= 3 and --bound >= n")
    rep = cyclotomic_densities(args.n, cfg.bound)
    return {**rep.as_dict(), "max_deviation": rep.max_deviation()}


def cmd_pattern(args, cfg):
    if args.curve is None:
        raise InvalidInput("pattern needs --curve (the polynomial f)")
    f = parse_poly(args.curve)
    if f.degree < 1:
        raise InvalidInput("f must be non-constant")
    try:
        expected = parse_expected(args.expected) if args.expected else None
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad --expected: {exc}") from exc
    rep = pattern_densities(f, cfg.bound, expected)
    return {**rep.as_dict(), "max_deviation": rep.max_deviation()}


def _element(text: str, G) -> int:
    """An element index, 'gK' for index K (the power g^K in cyclic groups), or 'e'."""
    t = text.strip()
    if t in ("e", "identity"):
        return G.identity
    if t.startswith("g") and t[1:].isdigit():
        return int(t[1:])
    if t.isdigit():
        return int(t)
    raise InvalidInput(f"cannot parse group element {text!r}")


def cmd_cm_rank(args, cfg):
    try:
        G = parse_group(args.group)
    except (ValueError, OSError) as exc:
        raise InvalidInput(str(exc)) from exc
    H = [G.identity] if args.H in ("trivial", "1", "") else parse_ints(args.H)
    reps = parse_ints(args.S)
    c = _element(args.c, G)
    if any(not 0 <= x < G.order for x in [*H, *reps, c]):
        raise InvalidInput("element index out of range")
    try:
        spec = CMTypeSpec.build(G, H, c, reps)
    except ValueError as exc:
        raise InvalidInput(f"invalid-cm-type: {exc}") from exc
    res = cm_rank(spec)
    return {
        "group": G.name,
        "order": G.order,
        "H": list(spec.H),
        "c": c,
        "S": [sorted(s) for s in spec.S],
        "reflex_stabilizer": list(res.reflex_stabilizer),
        "R": [list(r) for r in res.R],
        "D": [list(r) for r in res.D],
        "conjugated": res.conjugated,
        "nu": res.nu,
        "rank": res.cm_rank,
        "oracle_rank": cm_rank_oracle(spec),
        "torus_dim": res.nu,
    }


def cmd_st3_audit(args, cfg):
    rows = st3_audit(k_max=min(cfg.k_max, 6))
    return {"rows": rows, "all_integer": all(r["integer"] for r in rows)}


def cmd_histogram(args, cfg):
    s = load_samples(args, cfg)
    if s.traces.ndim != 1:
        raise InvalidInput("histogram needs scalar traces")
    group = _group(args.group) if args.group else None
    rows = histogram(s.traces, cfg.bins, args.lo, args.hi, group)
    return {**s.source, "n": len(s.traces), "group": group.name if group else None,
            "rows": [r.__dict__ for r in rows]}


HIST_COLUMNS = ("bin_left", "bin_right", "count", "empirical_density", "theoretical_density")

COMMANDS = {
    "ec-scan": cmd_ec_scan,
    "g2-scan": cmd_g2_scan,
    "power-seq": cmd_power_seq,
    "moments": cmd_moments,
    "classify": cmd_classify,
    "char-sums": cmd_char_sums,
    "euler": cmd_euler,
    "chi-profile": cmd_chi_profile,
    "cebotarev": cmd_cebotarev,
    "pattern": cmd_pattern,
    "cm-rank": cmd_cm_rank,
    "st3-audit": cmd_st3_audit,
    "histogram": cmd_histogram,
}


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=10**5, help="largest prime scanned (<= 2^31)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    common.add_argument("--threads", type=int, default=None, help="cap on parallel scan threads")
    common.add_argument("--k-max", type=int, default=6)
    common.add_argument("--z-threshold", type=float, default=Z_THRESHOLD)
    common.add_argument("--bins", type=int, default=40)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--curve", help='right-hand side f(x), e.g. "x^3+x+1"')
    source.add_argument("--ab", help="elliptic shorthand a,b for y^2 = x^3 + a x + b (use --ab=-1,0 for negative a)")
    source.add_argument("--haar", help="draw Haar samples from this catalog group instead")
    source.add_argument("--n", type=int, default=10**5, help="number of Haar samples")

    p = argparse.ArgumentParser(prog="satotate", description="Sato-Tate experiments at desk scale")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    q = sub.add_parser("ec-scan", parents=[common], help="a_p scan of an elliptic curve")
    q.add_argument("--curve")
    q.add_argument("--ab")
    q.add_argument("--classify", action="store_true")
    q.add_argument("--group", help="compare against this group (default SU2)")
    q.add_argument("--hybrid", help="n,r: keep only p = r mod n")
    q.add_argument("--list", action="store_true", help="include (p, a_p) pairs")

    q = sub.add_parser("g2-scan", parents=[common], help="local factors of a genus-2 curve")
    q.add_argument("--curve", required=True)
    q.add_argument("--ab", help=argparse.SUPPRESS)
    q.add_argument("--group")
    q.add_argument("--list", action="store_true", help="include (p, e1, e2)")

    q = sub.add_parser("power-seq", parents=[common], help="a_{q^n} for one curve over F_q")
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--aq", type=int, required=True)
    q.add_argument("--n-terms", type=int, default=10**5)

    q = sub.add_parser("moments", parents=[common], help="Haar moment E[tr^k]")
    q.add_argument("--group", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--method", choices=("closed_form", "quadrature"))

    sub.add_parser("classify", parents=[common, source], help="weight-1 group classifier")

    for name in ("char-sums", "euler", "chi-profile"):
        q = sub.add_parser(name, parents=[common, source])
        q.add_argument("--irrep", required=True, help="trivial, phi:a, sym:m, gamma:a,b or sums with +")
        if name == "euler":
            q.add_argument("--s", help="comma-separated real s > 1 (default 1.5)")
            q.add_argument("--bounds", help="comma-separated truncation bounds (default --bound)")

    q = sub.add_parser("cebotarev", parents=[common], help="primes by residue class mod n")
    q.add_argument("--n", type=int, required=True)

    q = sub.add_parser("pattern", parents=[common], help="factorization patterns of f mod p")
    q.add_argument("--curve", required=True, help="the polynomial f")
    q.add_argument("--expected", help='e.g. "1,1,1:1/6;1,2:1/2;3:1/3"')

    q = sub.add_parser("cm-rank", parents=[common], help="rank of a CM-type")
    q.add_argument("--group", required=True, help="cyclic:n, dihedral:n, quaternion, table:PATH, product:A*B")
    q.add_argument("--H", default="trivial", help="subgroup element indices, or 'trivial'")
    q.add_argument("--c", required=True, help="central involution: index or gK")
    q.add_argument("--S", required=True, help="coset representatives of the CM-type")

    sub.add_parser("st3-audit", parents=[common], help="integer-moment audit of the catalog")

    q = sub.add_parser("histogram", parents=[common, source], help="binned normalized traces")
    q.add_argument("--group")
    q.add_argument("--lo", type=float, default=-2.0)
    q.add_argument("--hi", type=float, default=2.0)
    return p


def _set_threads(n: int | None):
    if n is None:
        return
    import numba

    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def _clean(obj):
    """JSON-safe: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def render(result: dict, cfg: RunConfig, argv: Sequence[str]) -> str:
    if cfg.fmt == "csv":
        rows = result.get("rows")
        if not isinstance(rows, list) or not rows:
            raise InvalidInput("--format csv is only available for tabular output")
        cols = HIST_COLUMNS if cfg.subcommand == "histogram" else tuple(rows[0])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in cols])
        return buf.getvalue()
    doc = {"tool_version": __version__, "argv": list(argv), "seed": cfg.seed, "subcommand": cfg.subcommand}
    doc.update(result)
    return json.dumps(_clean(doc), sort_keys=True, indent=2) + "\n"


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    cfg = RunConfig(args.subcommand, args.bound, args.seed, args.fmt, args.k_max,
                    args.z_threshold, args.bins, args.threads)
    try:
        cfg.validate()
        _set_threads(cfg.threads)
        result = COMMANDS[cfg.subcommand](args, cfg)
        text = render(result, cfg, argv)
    except InvalidInput as exc:
        print(f"satotate {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, ValueError, OSError) as exc:
        print(f"satotate {cfg.subcommand}: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())
