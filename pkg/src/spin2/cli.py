"""Command-line interface: one binary, JSON/CSV output, exit codes
0 = success, 1 = domain error, 2 = usage error."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .barvinok import choose_order, taylor_log_z, taylor_log_z_swapped
from .certify import complex_contraction_probe, ContractionCert, estimate_delta
from .errors import Spin2Error
from .exact import lambda_coeffs, partition_exact
from .graphs import parse_graph
from .params import Params, parse_complex
from .roots import poly_roots, residuals
from .scan import ScanSpec, run_scan
from .weitz import fptas_depth, saw_ratio, ssm_probe, weitz_partition


def _c(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except Spin2Error as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_graph(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _params(args) -> Params:
    return Params(args.beta, args.gamma, args.lam)


def _add_param_flags(sub, lam_required: bool = True) -> None:
    sub.add_argument("--beta", type=_complex_arg, required=True, help="edge weight for ++ (complex literal)")
    sub.add_argument("--gamma", type=_complex_arg, required=True, help="edge weight for -- (complex literal)")
    sub.add_argument("--lambda", type=_complex_arg, required=lam_required, dest="lam",
                     default=None if lam_required else 0j, help="vertex weight for + (complex literal)")


def _emit(data: dict) -> None:
    json.dump(data, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spin2",
        description="Exact, approximate, and certified partition functions of "
                    "2-spin systems on bounded-degree graphs.",
    )
    parser.add_argument("--version", action="version", version=f"spin2 {__version__}")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker count for scan cells (1 = deterministic reference mode)")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("exact", help="brute-force partition function")
    s.add_argument("--graph", required=True)
    _add_param_flags(s)

    s = sub.add_parser("coeffs", help="coefficients of Z as a polynomial in lambda")
    s.add_argument("--graph", required=True)
    _add_param_flags(s, lam_required=False)

    s = sub.add_parser("roots", help="roots of the lambda polynomial")
    s.add_argument("--graph", required=True)
    _add_param_flags(s, lam_required=False)

    s = sub.add_parser("weitz", help="walk-tree ratio / telescoped partition function")
    s.add_argument("--graph", required=True)
    _add_param_flags(s)
    s.add_argument("--depth", type=int, default=None, help="truncation depth (default: full)")
    s.add_argument("--eps", type=float, default=None, help="target accuracy; needs --cert")
    s.add_argument("--cert", default=None, help="certificate JSON file (for --eps depth choice)")
    s.add_argument("--boundary", type=_complex_arg, default=None,
                   help="value for truncated free leaves (default: lambda)")
    s.add_argument("--flip-convention", action="store_true",
                   help="flip the cycle-closing leaf spin convention")
    s.add_argument("--vertex", type=int, default=None,
                   help="report the ratio at this vertex instead of Z")

    s = sub.add_parser("barvinok", help="Taylor interpolation of log Z")
    s.add_argument("--graph", required=True)
    _add_param_flags(s)
    s.add_argument("--order", type=int, default=None, help="truncation order m")
    s.add_argument("--eps", type=float, default=None, help="target accuracy (with --radius)")
    s.add_argument("--radius", type=float, default=None, help="zero-free radius (else scanned)")
    s.add_argument("--swap-bg-inv-lambda", action="store_true",
                   help="estimate via swapped edge weights at 1/lambda, times lambda^n")

    s = sub.add_parser("certify", help="contraction certificate around a real anchor")
    _add_param_flags(s)
    s.add_argument("--delta-max-degree", type=int, required=True, dest="max_degree")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=4096)
    s.add_argument("--set", dest="set_id", default=None, choices=("S1", "S2", "S3", "S4"),
                   help="certify against this family instead of the first match")
    s.add_argument("--probe", type=_complex_arg, nargs=3, metavar=("BETA", "GAMMA", "LAMBDA"),
                   default=None, help="also probe this complex point against the certificate")

    s = sub.add_parser("ssm-probe", help="marginal gap under differing pinnings (CSV rows)")
    s.add_argument("--graph", required=True)
    _add_param_flags(s)
    s.add_argument("--vertex", type=int, default=0)
    s.add_argument("--pin-set", required=True,
                   help="comma-separated vertices pinned + in one config, - in the other")
    s.add_argument("--header", action="store_true", help="emit a CSV header row")

    s = sub.add_parser("scan", help="grid sweep to CSV")
    s.add_argument("--spec", required=True, help="scan spec JSON file")
    s.add_argument("--out", required=True, help="output CSV path")

    return parser


def _cmd_exact(args) -> dict:
    g, cfg = _load_graph(args.graph)
    z = partition_exact(g, _params(args), cfg)
    return {"Z": _c(z)}


def _cmd_coeffs(args) -> dict:
    g, cfg = _load_graph(args.graph)
    coeffs = lambda_coeffs(g, args.beta, args.gamma, cfg)
    return {"coeffs": [_c(a) for a in coeffs.coeffs]}


def _cmd_roots(args) -> dict:
    g, cfg = _load_graph(args.graph)
    coeffs = lambda_coeffs(g, args.beta, args.gamma, cfg)
    roots = poly_roots(coeffs)
    return {
        "roots": [_c(r) for r in roots],
        "residuals": residuals(coeffs, roots),
    }


def _cmd_weitz(args) -> dict:
    g, cfg = _load_graph(args.graph)
    p = _params(args)
    depth = args.depth
    if args.eps is not None:
        if args.cert is None:
            raise Spin2Error("--eps needs --cert for the contraction margin")
        with open(args.cert) as fh:
            cert = ContractionCert.from_json_dict(json.load(fh))
        depth = fptas_depth(g.n, args.eps, cert.eta)
    if args.vertex is not None:
        r = saw_ratio(g, args.vertex, cfg, p, depth=depth, boundary=args.boundary,
                      flip_convention=args.flip_convention)
        return {"vertex": args.vertex, "ratio": _c(r), "depth": depth}
    if len(cfg) > 0:
        raise Spin2Error("telescoping runs on unpinned graphs; drop pin directives")
    result = weitz_partition(g, p, depth=depth, boundary=args.boundary,
                             flip_convention=args.flip_convention)
    return {
        "Z": _c(result.estimate),
        "ratios": [_c(r) for r in result.ratios],
        "depth": result.depth,
        "boundary": _c(result.boundary),
    }


def _cmd_barvinok(args) -> dict:
    g, _cfg = _load_graph(args.graph)
    if args.order is None:
        if args.eps is None or args.radius is None:
            raise Spin2Error("give --order, or both --eps and --radius")
        lam_abs = abs(1 / args.lam) if args.swap_bg_inv_lambda else abs(args.lam)
        ratio = lam_abs / args.radius
        if ratio >= 1:
            raise Spin2Error("lambda lies outside the given zero-free radius")
        m = choose_order(g.n, args.eps, ratio)
    else:
        m = args.order
    fn = taylor_log_z_swapped if args.swap_bg_inv_lambda else taylor_log_z
    est = fn(g, args.beta, args.gamma, args.lam, m, radius=args.radius)
    return est.as_json_dict()


def _cmd_certify(args) -> dict:
    p = _params(args)
    cert = estimate_delta(
        p.as_real_triple(), args.max_degree, seed=args.seed,
        n_samples=args.samples, set_id=args.set_id,
    )
    out = cert.as_json_dict()
    if args.probe is not None:
        probe_point = Params(*args.probe)
        report = complex_contraction_probe(probe_point, args.max_degree, cert, seed=args.seed)
        out["probe"] = {
            "condition1_ok": report.condition1_ok,
            "condition2_ok": report.condition2_ok,
            "containment_violations": report.containment_violations,
            "top_violations": report.top_violations,
            "gradient_violations": report.gradient_violations,
            "worst_containment_margin": report.worst_containment_margin,
            "min_top_distance": report.min_top_distance,
            "grad_sup": report.grad_sup,
        }
    return out


def _cmd_ssm_probe(args) -> int:
    from .graphs import PinnedConfig, SPIN_MINUS, SPIN_PLUS

    g, _cfg = _load_graph(args.graph)
    p = _params(args)
    vertices = [int(v) for v in args.pin_set.split(",") if v.strip()]
    sigma = PinnedConfig(tuple((v, SPIN_PLUS) for v in vertices))
    tau = PinnedConfig(tuple((v, SPIN_MINUS) for v in vertices))
    probe = ssm_probe(g, args.vertex, sigma, tau, p)
    if args.header:
        sys.stdout.write("distance,gap\n")
    sys.stdout.write(f"{probe.distance},{probe.gap!r}\n")
    return 0


def _cmd_scan(args, threads: int) -> int:
    with open(args.spec) as fh:
        spec = ScanSpec.from_json_dict(json.load(fh))
    run_scan(spec, out_path=args.out, threads=threads)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "exact":
            _emit(_cmd_exact(args))
        elif args.command == "coeffs":
            _emit(_cmd_coeffs(args))
        elif args.command == "roots":
            _emit(_cmd_roots(args))
        elif args.command == "weitz":
            _emit(_cmd_weitz(args))
        elif args.command == "barvinok":
            _emit(_cmd_barvinok(args))
        elif args.command == "certify":
            _emit(_cmd_certify(args))
        elif args.command == "ssm-probe":
            return _cmd_ssm_probe(args)
        elif args.command == "scan":
            return _cmd_scan(args, args.threads)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command!r}")
    except Spin2Error as exc:
        print(f"spin2: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"spin2: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
