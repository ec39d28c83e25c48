"""Batch command-line front end.

Subcommands: kernel eval, norm, roc, gap, sample, factor-check, selftest.
Numbers are serialized with 17 significant digits so CSV bodies round-trip
float64 exactly; the run timestamp lives only in the JSON manifest, so two
identical invocations produce byte-identical CSV bodies.

Exit codes: 0 success, 1 usage error, 2 numerical validity failure,
3 below-threshold regime with no completable cells.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, approx, factor, harness, kernels, nystrom, pointcount

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDITY = 2
EXIT_BELOW_THRESHOLD = 3


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _read_config_file(path: str) -> dict[str, str]:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key = value: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _apply_config_defaults(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Config file supplies defaults; explicit flags override them."""
    if getattr(args, "config", None) is None:
        return
    file_values = _read_config_file(args.config)
    given = {a.lstrip("-").replace("-", "_") for a in sys.argv if a.startswith("--")}
    for key, value in file_values.items():
        attr = key.replace("-", "_")
        if attr in ("config",) or not hasattr(args, attr):
            continue
        if attr in given:
            continue
        current = getattr(args, attr)
        if isinstance(current, bool):
            setattr(args, attr, value.lower() in ("1", "true", "yes"))
        elif isinstance(current, int) and current is not None:
            setattr(args, attr, int(value))
        elif isinstance(current, float) and current is not None:
            setattr(args, attr, float(value))
        else:
            setattr(args, attr, value)


def _interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected lo,hi")
    return float(parts[0]), float(parts[1])


def _csv_list(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(",") if p.strip())


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(",") if p.strip())


def _manifest(args_echo: dict, outputs: list[str], statuses) -> dict:
    return {
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": args_echo,
        "cell_statuses": list(statuses),
        "outputs": outputs,
    }


def _write_roc_outputs(series: harness.RateSeries, fit_trace, fit_w1, out_path: str,
                       args_echo: dict):
    out = Path(out_path)
    lines = ["regime,n,nodes,trace_norm,w1,status"]
    for i, n in enumerate(series.n_values):
        tn = series.trace_norms[i]
        w1 = series.w1_values[i]
        lines.append(
            ",".join(
                [
                    series.config.regime,
                    str(n),
                    str(series.grid_nodes_used[i]),
                    _fmt(tn) if math.isfinite(tn) else "nan",
                    _fmt(w1) if math.isfinite(w1) else "nan",
                    series.statuses[i].replace(",", ";"),
                ]
            )
        )
    out.write_text("\n".join(lines) + "\n")
    fit_path = out.with_suffix(out.suffix + ".fit.json")
    fit_blob = {}
    for name, fit in (("trace", fit_trace), ("w1", fit_w1)):
        if fit is not None:
            fit_blob[name] = {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "r_squared": fit.r_squared,
            }
    fit_path.write_text(json.dumps(fit_blob, indent=2, sort_keys=True) + "\n")
    manifest_path = out.with_suffix(out.suffix + ".manifest.json")
    manifest = _manifest(args_echo, [str(out), str(fit_path)], series.statuses)
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return [str(out), str(fit_path), str(manifest_path)]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpprates",
        description="kernels, trace norms, and convergence-rate experiments "
        "for unitary-ensemble determinantal point processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_kernel = sub.add_parser("kernel", help="kernel evaluations")
    kernel_sub = p_kernel.add_subparsers(dest="kernel_command", required=True)
    p_eval = kernel_sub.add_parser("eval", help="print one kernel value")
    p_eval.add_argument("--family", required=True,
                        choices=sorted(kernels.FINITE_FAMILIES | kernels.LIMIT_FAMILIES))
    p_eval.add_argument("--n", type=int, default=None)
    p_eval.add_argument("--a", type=float, default=0.0)
    p_eval.add_argument("--b", type=float, default=0.0)
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--y", type=float, required=True)
    p_eval.add_argument("--config", default=None)

    p_norm = sub.add_parser("norm", help="Schatten norm of finite-minus-limit")
    p_norm.add_argument("--regime", required=True, choices=harness.REGIMES)
    p_norm.add_argument("--n", type=int, required=True)
    p_norm.add_argument("--set", dest="set_interval", type=_interval, required=True)
    p_norm.add_argument("--nodes", type=int, default=None)
    p_norm.add_argument("--p", type=float, default=1.0)
    p_norm.add_argument("--a-rule", default="0")
    p_norm.add_argument("--b-rule", default="0")
    p_norm.add_argument("--config", default=None)

    p_roc = sub.add_parser("roc", help="rate-of-convergence series + fit")
    p_roc.add_argument("--regime", required=True, choices=harness.REGIMES)
    p_roc.add_argument("--n-list", type=_int_list, required=True)
    p_roc.add_argument("--set", dest="set_interval", type=_interval, required=True)
    p_roc.add_argument("--a-rule", default="0")
    p_roc.add_argument("--b-rule", default="0")
    p_roc.add_argument("--nodes", type=int, default=None)
    p_roc.add_argument("--seed", type=int, default=0)
    p_roc.add_argument("--out", required=True)
    p_roc.add_argument("--config", default=None)

    p_gap = sub.add_parser("gap", help="extreme-eigenvalue CDF comparison")
    p_gap.add_argument("--regime", required=True,
                       choices=("hard_least", "gue_soft", "lue_soft", "jue_soft"))
    p_gap.add_argument("--n", type=int, required=True)
    p_gap.add_argument("--s-grid", type=_csv_list, required=True)
    p_gap.add_argument("--a", type=int, default=0)
    p_gap.add_argument("--b", type=int, default=0)
    p_gap.add_argument("--nodes", type=int, default=None)
    p_gap.add_argument("--out", required=True)
    p_gap.add_argument("--config", default=None)

    p_sample = sub.add_parser("sample", help="seeded point-count samples")
    p_sample.add_argument("--regime", required=True, choices=harness.REGIMES)
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--set", dest="set_interval", type=_interval, required=True)
    p_sample.add_argument("--draws", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--a-rule", default="0")
    p_sample.add_argument("--b-rule", default="0")
    p_sample.add_argument("--nodes", type=int, default=None)
    p_sample.add_argument("--out", default=None)
    p_sample.add_argument("--config", default=None)

    p_fac = sub.add_parser("factor-check", help="factorization residual")
    p_fac.add_argument("--kind", required=True, choices=factor.FACTOR_KINDS)
    p_fac.add_argument("--n", type=int, default=None)
    p_fac.add_argument("--a", type=float, default=None)
    p_fac.add_argument("--s", type=float, default=1.0)
    p_fac.add_argument("--nodes", type=int, default=64)
    p_fac.add_argument("--config", default=None)

    sub.add_parser("selftest", help="approximation scans and invariant suites")
    return parser


def _cmd_kernel_eval(args) -> int:
    fam = args.family
    x, y = args.x, args.y
    if fam in kernels.LIMIT_FAMILIES:
        lo = min(x, y, 0.0) - 1.0 if fam != "bessel" else 0.0
        hi = max(x, y, 1.0) + 1.0
        if fam == "bessel" and min(x, y) < 0:
            print("bessel kernel needs x, y >= 0", file=sys.stderr)
            return EXIT_USAGE
        spec = kernels.limit_spec(fam, a=args.a, interval=(lo, hi))
    else:
        if args.n is None:
            print("finite kernels need --n", file=sys.stderr)
            return EXIT_USAGE
        if fam == "cd_bulk_gue":
            spec = kernels.bulk_spec(args.n, max(abs(x), abs(y), 1.0))
        elif fam == "cd_hard_lue":
            spec = kernels.hard_spec(args.n, int(args.a), max(x, y, 1.0))
        else:
            kind = {"cd_soft_gue": kernels.GUE, "cd_soft_lue": kernels.LUE,
                    "cd_soft_jue": kernels.JUE}[fam]
            params = kernels.EnsembleParams(kind=kind, n=args.n, a=args.a, b=args.b)
            spec = kernels.soft_spec(
                params, (min(x, y, 0.0), max(kernels.SOFT_TAIL_CUTOFF, x, y))
            )
    print(_fmt(spec.eval(x, y)))
    return EXIT_OK


def _cmd_norm(args) -> int:
    ns = (args.n, args.n + 1, args.n + 2, args.n + 3)  # config needs >= 4 sizes
    config = harness.ExperimentConfig(
        regime=args.regime,
        n_values=ns,
        set_interval=args.set_interval,
        a_rule=args.a_rule,
        b_rule=args.b_rule,
        nodes=args.nodes,
    )
    fin, lim = harness._kernel_pair(config, args.n)
    lo, hi = config.set_interval
    nn = args.nodes or nystrom.default_node_count(lo, hi)
    grid = nystrom.gauss_legendre(nn, lo, hi)
    op_fin = nystrom.discretize(fin, grid)
    op_lim = nystrom.discretize(lim, grid)
    diff = nystrom.DiscreteOperator(grid=grid, matrix=op_fin.matrix - op_lim.matrix)
    print(_fmt(nystrom.schatten_norm(diff, args.p)))
    return EXIT_OK


def _cmd_roc(args) -> int:
    config = harness.ExperimentConfig(
        regime=args.regime,
        n_values=args.n_list,
        set_interval=args.set_interval,
        a_rule=args.a_rule,
        b_rule=args.b_rule,
        nodes=args.nodes,
        seed=args.seed,
    )
    series = harness.run_roc(config)
    ok = series.ok_cells()
    fit_trace = fit_w1 = None
    if len(ok) >= 2:
        fit_trace = harness.fit_loglog(series, "trace")
        fit_w1 = harness.fit_loglog(series, "w1")
    echo = {
        "command": "roc",
        "regime": args.regime,
        "n_list": list(args.n_list),
        "set": list(args.set_interval),
        "a_rule": args.a_rule,
        "b_rule": args.b_rule,
        "nodes": args.nodes,
        "seed": args.seed,
        "out": args.out,
    }
    outputs = _write_roc_outputs(series, fit_trace, fit_w1, args.out, echo)
    for path in outputs:
        print(path)
    if not ok:
        return EXIT_BELOW_THRESHOLD
    return EXIT_OK


def _cmd_gap(args) -> int:
    rows = harness.edge_cdf_compare(
        args.regime, args.s_grid, args.n, a=args.a, b=args.b, n_nodes=args.nodes
    )
    out = Path(args.out)
    lines = ["s,finite_cdf,limit_cdf,abs_diff"]
    for s, fc, lc, d in rows:
        lines.append(",".join([_fmt(s), _fmt(fc), _fmt(lc), _fmt(d)]))
    out.write_text("\n".join(lines) + "\n")
    echo = {
        "command": "gap",
        "regime": args.regime,
        "n": args.n,
        "s_grid": list(args.s_grid),
        "a": args.a,
        "b": args.b,
        "nodes": args.nodes,
        "out": args.out,
    }
    manifest_path = out.with_suffix(out.suffix + ".manifest.json")
    manifest_path.write_text(
        json.dumps(_manifest(echo, [str(out)], ["ok"] * len(rows)),
                   indent=2, sort_keys=True) + "\n"
    )
    print(str(out))
    print(str(manifest_path))
    return EXIT_OK


def _cmd_sample(args) -> int:
    ns = (args.n, args.n + 1, args.n + 2, args.n + 3)
    config = harness.ExperimentConfig(
        regime=args.regime,
        n_values=ns,
        set_interval=args.set_interval,
        a_rule=args.a_rule,
        b_rule=args.b_rule,
        nodes=args.nodes,
    )
    fin, _ = harness._kernel_pair(config, args.n)
    lo, hi = config.set_interval
    nn = args.nodes or nystrom.default_node_count(lo, hi)
    grid = nystrom.gauss_legendre(nn, lo, hi)
    op = nystrom.discretize(fin, grid)
    eigs = pointcount.restricted_spectrum(op)
    sample = pointcount.sample_counts(eigs, args.seed, args.draws)
    body = "count\n" + "\n".join(str(int(c)) for c in sample.draws) + "\n"
    if args.out:
        Path(args.out).write_text(body)
        print(args.out)
    else:
        sys.stdout.write(body)
    return EXIT_OK


def _cmd_factor_check(args) -> int:
    fs = factor.build_factors(args.kind, s=args.s, n=args.n, a=args.a)
    lo, hi = fs.target.interval
    grid = nystrom.gauss_legendre(args.nodes, lo, hi)
    print(_fmt(factor.verify_factorization(fs, grid)))
    return EXIT_OK


def _cmd_selftest() -> int:
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures.append(name)

    scan = approx.scan_hermite_cosine([2, 3, 4, 8, 16, 64, 256, 1024])
    check("hermite-cosine scaled residuals bounded",
          float(np.max(scan.scaled_residuals)) < 50.0)
    scan_prev = approx.scan_hermite_cosine([2, 3, 4, 8, 16, 64, 256, 1024], use_prev=True)
    check("hermite-cosine (shifted index) scaled residuals bounded",
          float(np.max(scan_prev.scaled_residuals)) < 50.0)
    check("stirling bounds at n in 1..2000",
          all(all(approx.stirling_check(n)) for n in range(1, 2001)))
    norm_ok = True
    for n in range(2, 2049):
        v = approx.normalization_constant(n)
        lo, hi = approx.normalization_bracket(n)
        norm_ok &= lo <= v <= hi
    check("normalization constant brackets", norm_ok)
    lag = approx.scan_laguerre_expansion([64, 128, 256, 512, 1024], a=1.0, x=4.0)
    spread = float(np.max(lag.scaled_residuals) / np.min(lag.scaled_residuals))
    check("laguerre expansion n^3-scaled spread < 10", spread < 10.0)
    fs = factor.build_factors("sine_cs", s=1.0)
    grid = nystrom.gauss_legendre(64, -1.0, 1.0)
    check("sine factorization residual <= 1e-10",
          factor.verify_factorization(fs, grid) <= 1e-10)
    fs = factor.build_factors("bessel", s=1.0, a=0.0)
    grid = nystrom.gauss_legendre(64, 0.0, 1.0)
    check("bessel factorization residual <= 1e-9",
          factor.verify_factorization(fs, grid) <= 1e-9)
    report = pointcount.hard_gap_normalization_report()
    print(f"INFO  hard-edge a=0 gap law: {report['verdict']}")
    check("hard-edge a=0 gap matches a stated exponential",
          report["verdict"] != "matches neither candidate")
    return EXIT_OK if not failures else EXIT_VALIDITY


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems and 0 on --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if getattr(args, "config", None):
            _apply_config_defaults(args, parser)
        if args.command == "kernel":
            return _cmd_kernel_eval(args)
        if args.command == "norm":
            return _cmd_norm(args)
        if args.command == "roc":
            return _cmd_roc(args)
        if args.command == "gap":
            return _cmd_gap(args)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "factor-check":
            return _cmd_factor_check(args)
        if args.command == "selftest":
            return _cmd_selftest()
        parser.error(f"unknown command {args.command!r}")
    except pointcount.ValidityError as exc:
        print(f"numerical validity failure: {exc}", file=sys.stderr)
        return EXIT_VALIDITY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
