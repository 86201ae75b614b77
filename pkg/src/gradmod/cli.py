"""Batch command-line front end.

Each invocation runs one experiment and writes a deterministic JSON report
(plus a CSV table for ``weights``) into the output directory: identical
configurations produce byte-identical files.  Floats are rounded to 15
significant digits, keys are sorted, and no timestamps or machine data are
embedded.

Exit codes: 0 all hard identity residuals within tolerance; 1 a tolerance
failed; 2 configuration or input-file parse error; 3 truncation window
exhausted (partial report written).

Config files are flat ``key = value`` text, one experiment per file;
repeated keys build arrays, ``#`` starts a comment, and command-line flags
override file keys.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import config as cfg
from . import linalg
from .completion import (StandardModule, make_weights, number_trace_report,
                         oscillation_report, row_sum_residual,
                         commutator_decomposition_residual, summability_report)
from .koszul import betti_numbers, betti_table, build_koszul, dirac_square_residual
from .linearize import (RowOperator, ev_quotient, ev_space, linearize_full,
                        parse_subspace, recover_subspace)
from .normality import (alternating_block_sequence,
                        compression_identity_residuals, quotient_en_report,
                        resolvent_projection, similarity_counterexample,
                        spectral_projection_oracle)
from .submodules import GradedSubmodule, QuotientModule, parse_generators

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_PARSE = 2
EXIT_WINDOW = 3


class ParseFailure(Exception):
    pass


class WindowFailure(Exception):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


# -- deterministic serialization -----------------------------------------


def _canonical(obj):
    """Round floats to 15 significant digits and flatten numpy containers."""
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return float(f"{x:.15g}") if np.isfinite(x) else repr(x)
    if isinstance(obj, (np.complexfloating, complex)):
        z = complex(obj)
        return {"re": _canonical(z.real), "im": _canonical(z.imag)}
    if isinstance(obj, (np.integer, int, np.bool_, bool, str)) or obj is None:
        if isinstance(obj, (np.integer, np.bool_)):
            return obj.item()
        return obj
    if isinstance(obj, np.ndarray):
        return [_canonical(v) for v in obj.tolist()]
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dump_report(report, path):
    text = json.dumps(_canonical(report), indent=2, sort_keys=True) + "\n"
    path.write_text(text)
    return path


def _fmt(x):
    return f"{float(x):.15g}"


# -- config handling --------------------------------------------------------


def read_config_file(path):
    entries = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseFailure(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        entries.setdefault(key.strip(), []).append(value.strip())
    return entries


def resolve(args, key, default=None, cast=str):
    """Command line wins; otherwise the last config-file occurrence; else default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    file_vals = args._file_config.get(key)
    if file_vals:
        try:
            return cast(file_vals[-1])
        except ValueError as exc:
            raise ParseFailure(f"config key {key!r}: {exc}") from exc
    return default


def resolve_p_list(args, default=(2.0, 3.0)):
    raw = None
    if args.p is not None:
        raw = args.p
    elif "p" in args._file_config:
        raw = ",".join(args._file_config["p"])
    if raw is None:
        return list(default)
    try:
        values = [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise ParseFailure(f"bad p list: {exc}") from exc
    if not values or any(p < 1 for p in values):
        raise ParseFailure("p values must be >= 1")
    return values


def build_module(args, need_d=True):
    d = resolve(args, "d", cast=int)
    if d is None and need_d:
        raise ParseFailure("missing dimension --d")
    r = resolve(args, "r", 1, int)
    n_levels = resolve(args, "N", cast=int)
    if n_levels is None:
        raise ParseFailure("missing truncation --N")
    if n_levels < 2:
        raise ParseFailure("need N >= 2")
    family = resolve(args, "family", "dshift")
    r1 = resolve(args, "r1", cast=float)
    r2 = resolve(args, "r2", cast=float)
    try:
        weights = make_weights(family, n_levels, d=d, r1=r1, r2=r2)
        module = StandardModule(weights, d=d, multiplicity=r)
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc
    return module


def config_echo(args, module=None, extra=None):
    echo = {
        "family": resolve(args, "family", "dshift"),
        "d": resolve(args, "d", cast=int),
        "r": resolve(args, "r", 1, int),
        "N": resolve(args, "N", cast=int),
        "tol": resolve(args, "tol", cast=float),
    }
    if module is not None:
        echo["d"] = module.d
        echo["r"] = module.multiplicity
        echo["N"] = module.top_level
    r1 = resolve(args, "r1", cast=float)
    r2 = resolve(args, "r2", cast=float)
    if r1 is not None:
        echo["r1"] = r1
    if r2 is not None:
        echo["r2"] = r2
    if extra:
        echo.update(extra)
    return echo


def hard_check(failures, name, value, tol):
    if value > tol:
        failures.append({"check": name, "value": value, "tolerance": tol})


def read_text_file(path, what):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseFailure(f"cannot read {what} file {path}: {exc}") from exc


def load_generators(args, module):
    gens_path = resolve(args, "gens")
    if gens_path is None:
        raise ParseFailure("this command needs --gens FILE")
    text = read_text_file(gens_path, "generators")
    try:
        gens = parse_generators(text, module.d)
        if not gens:
            raise ValueError("no generators in file")
        return GradedSubmodule.generate(module, gens), gens
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc


# -- commands ----------------------------------------------------------------


def cmd_weights(args, outdir):
    d = resolve(args, "d", cast=int)
    if d is None:
        raise ParseFailure("weights needs --d (the summability weight k^(d-1))")
    n_weights = resolve(args, "N", cast=int)
    if n_weights is None or n_weights < 3:
        raise ParseFailure("weights needs --N >= 3")
    family = resolve(args, "family", "dshift")
    try:
        weights = make_weights(family, n_weights, d=d,
                               r1=resolve(args, "r1", cast=float),
                               r2=resolve(args, "r2", cast=float))
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc
    p_list = resolve_p_list(args)
    tail = resolve(args, "tail", max(2, n_weights // 2), int)

    osc = oscillation_report(weights, tail)
    reports = {p: summability_report(weights, d, p) for p in p_list}
    trace = {p: number_trace_report(d, p, n_weights) for p in p_list}

    report = {
        "schema": 1,
        "command": "weights",
        "config": config_echo(args, extra={"p": p_list, "tail": tail}),
        "bounds": {"min": weights.bounds[0], "max": weights.bounds[1]},
        "rho_head": weights.values[:8],
        "oscillation": {
            "tail_max": osc.tail_max,
            "slope": osc.slope,
            "tail_window": osc.tail_window,
        },
        "summability": {
            _fmt(p): {
                "final_partial_sum": float(rep.partial_sums[-1]),
                "trend": rep.trend.trend,
                "ratio": rep.trend.ratio,
            } for p, rep in reports.items()
        },
        "number_operator_trace": {
            _fmt(p): {
                "final_partial_sum": float(rep.partial_sums[-1]),
                "trend": rep.trend.trend,
                "ratio": rep.trend.ratio,
            } for p, rep in trace.items()
        },
        "hard_failures": [],
    }

    want_json = args.json or not args.csv
    want_csv = args.csv or not args.json
    written = []
    if want_csv:
        csv_path = outdir / "weights.csv"
        rows = ["k,rho,diff," + ",".join(f"psum_p{_fmt(p)}" for p in p_list)]
        sums = {p: reports[p].partial_sums for p in p_list}
        for k in range(n_weights):
            diff = weights.values[k + 1] - weights.values[k] if k <= n_weights - 2 else None
            cells = [str(k), _fmt(weights.values[k]),
                     _fmt(diff) if diff is not None else ""]
            for p in p_list:
                in_range = 1 <= k <= n_weights - 2
                cells.append(_fmt(sums[p][k - 1]) if in_range else "")
            rows.append(",".join(cells))
        csv_path.write_text("\n".join(rows) + "\n")
        written.append(csv_path)
    if want_json:
        written.append(dump_report(report, outdir / "weights.json"))
    return report, written


def _degree_payload(report):
    return {
        "degree": report.degree,
        "determined": report.determined,
        "flags": {str(k): bool(v) for k, v in report.flags.items()},
        "window": report.window,
        "max_generator_degree": report.max_generator_degree,
        "degenerate_zero": report.degenerate_zero,
        "witnessed_levels": report.witnessed_levels,
    }


def cmd_submodule(args, outdir):
    module = build_module(args)
    sub, gens = load_generators(args, module)
    tol = resolve(args, "tol", cfg.SPAN_TOL, float)
    report_deg = sub.degree_report()
    reducing, v_basis = sub.is_reducing()
    quotient = QuotientModule(sub)

    failures = []
    hard_check(failures, "level_basis_orthonormality",
               sub.orthonormality_residual(), max(tol, cfg.EXACT_TOL))
    hard_check(failures, "coordinate_invariance", sub.invariance_residual(), tol)

    report = {
        "schema": 1,
        "command": "submodule",
        "config": config_echo(args, module, extra={"gens": resolve(args, "gens")}),
        "generator_count": len(gens),
        "ambient_dims": [module.level_dim(n) for n in range(module.top_level + 1)],
        "submodule_dims": sub.dims(),
        "quotient_dims": quotient.dims(),
        "degree": _degree_payload(report_deg),
        "reducing": {"is_reducing": reducing,
                     "V_dim": None if v_basis is None else v_basis.shape[1]},
        "residuals": {
            "orthonormality": sub.orthonormality_residual(),
            "invariance": sub.invariance_residual(),
        },
        "hard_failures": failures,
    }
    written = [dump_report(report, outdir / "submodule.json")]
    if not report_deg.determined:
        raise WindowFailure("degree not determinable at this truncation",
                            (report, written))
    return report, written


def cmd_linearize(args, outdir):
    module = build_module(args)
    sub, _ = load_generators(args, module)
    tol = resolve(args, "tol", cfg.SPAN_TOL, float)
    result = linearize_full(sub)

    failures = []
    for i, resid in enumerate(result.span_residuals):
        hard_check(failures, f"pullback_span_step_{i}", resid, tol)
    for i, resid in enumerate(result.kernel_residuals):
        hard_check(failures, f"kernel_containment_step_{i}", resid, tol)

    report = {
        "schema": 1,
        "command": "linearize",
        "config": config_echo(args, module, extra={"gens": resolve(args, "gens")}),
        "complete": result.complete,
        "reason": result.reason,
        "steps": [{
            "multiplicity": s.multiplicity,
            "degree": s.degree,
            "window": s.window,
            "level_dims": list(s.level_dims),
        } for s in result.steps],
        "span_residuals": list(result.span_residuals),
        "kernel_containment_residuals": list(result.kernel_residuals),
        "final_degree": result.steps[-1].degree if result.steps else None,
        "final_multiplicity": result.final.module.multiplicity,
        "hard_failures": failures,
    }
    written = [dump_report(report, outdir / "linearize.json")]
    if not result.complete:
        raise WindowFailure(result.reason, (report, written))
    return report, written


def cmd_ev(args, outdir):
    module = build_module(args)
    v_path = resolve(args, "V")
    if v_path is None:
        raise ParseFailure("ev needs --V FILE (column vectors in d.E)")
    try:
        v = parse_subspace(read_text_file(v_path, "subspace"), module)
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc
    tol = resolve(args, "tol", cfg.ROUNDTRIP_TOL, float)
    p_list = resolve_p_list(args)

    ev, sub = ev_space(module, v)
    ev_grad, _ = ev_space(module, v, use_gradient=True)
    route_gap = max(linalg.subspace_distance(ev[n], ev_grad[n]) for n in ev)
    deg = sub.degree_report()
    recovered = recover_subspace(module, sub.basis(1))
    roundtrip = linalg.subspace_distance(v.basis, recovered.basis)
    quotient = ev_quotient(module, v)
    en = quotient_en_report(quotient, p_list)

    failures = []
    hard_check(failures, "roundtrip_V_distance", roundtrip, tol)
    hard_check(failures, "adjoint_vs_gradient_route", route_gap, tol)
    hard_check(failures, "level0_component", float(sub.dim(0)), 0.0)
    hard_check(failures, "invariance", sub.invariance_residual(), cfg.SPAN_TOL)
    if deg.determined and deg.degree > 1:
        failures.append({"check": "degree_at_most_1", "value": deg.degree,
                         "tolerance": 1})

    report = {
        "schema": 1,
        "command": "ev",
        "config": config_echo(args, module,
                              extra={"V": v_path, "p": p_list}),
        "V_dim": v.dim,
        "ev_dims": [int(ev[n].shape[1]) for n in sorted(ev)],
        "orthocomplement_dims": sub.dims(),
        "degree": _degree_payload(deg),
        "roundtrip_V_distance": roundtrip,
        "adjoint_vs_gradient_route": route_gap,
        "quotient_commutators": {
            "note": en.note,
            "trends": {_fmt(p): {"trend": en.trends[p].trend,
                                 "ratio": en.trends[p].ratio,
                                 "cumulative": float(en.cumulative[p][-1])}
                       for p in p_list},
        },
        "hard_failures": failures,
    }
    return report, [dump_report(report, outdir / "ev.json")]


def cmd_koszul(args, outdir):
    module = build_module(args)
    tol = resolve(args, "tol", cfg.IDENTITY_TOL, float)
    gens_path = resolve(args, "gens")
    if gens_path is None:
        ops = module.coordinate_tuple()
        subject = "standard module"
    else:
        sub, _ = load_generators(args, module)
        ops = QuotientModule(sub).coordinate_tuple()
        subject = "quotient module"
    try:
        complex_ = build_koszul(ops)
        table = betti_table(complex_)
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc
    interior_levels = [n for n in range(module.top_level)
                       if complex_.interior(0, n)]
    dirac = {n: dirac_square_residual(complex_, ops, n)
             for n in interior_levels}

    failures = []
    hard_check(failures, "boundary_squared", complex_.bsquared_residual(),
               max(tol, cfg.EXACT_TOL))
    for n, resid in dirac.items():
        hard_check(failures, f"dirac_square_level_{n}", resid, tol)

    report = {
        "schema": 1,
        "command": "koszul",
        "config": config_echo(args, module, extra={"gens": gens_path}),
        "subject": subject,
        "bsquared_residual": complex_.bsquared_residual(),
        "betti_numbers": list(betti_numbers(complex_)),
        "betti_table": {f"{k},{n}": int(dim) for (k, n), dim in sorted(table.items())},
        "dirac_residuals": {str(n): resid for n, resid in dirac.items()},
        "hard_failures": failures,
    }
    return report, [dump_report(report, outdir / "koszul.json")]


def cmd_identity(args, outdir):
    module = build_module(args)
    sub, _ = load_generators(args, module)
    tol = resolve(args, "tol", cfg.IDENTITY_TOL, float)
    nodes = resolve(args, "nodes", cfg.QUAD_DEFAULT_NODES, int)
    failures = []

    # compression identities on all interior levels
    interior = range(1, min(sub.window, module.top_level) )
    comp = {}
    worst = 0.0
    for n in interior:
        level_worst = 0.0
        for j in range(1, module.d + 1):
            for k in range(1, module.d + 1):
                r1, r2 = compression_identity_residuals(module, sub, j, k, n)
                level_worst = max(level_worst, r1, r2)
        comp[str(n)] = level_worst
        worst = max(worst, level_worst)
    hard_check(failures, "compression_identities", worst, tol)

    # ambient exact identities
    row_res = max(row_sum_residual(module, n)
                  for n in range(module.top_level))
    dec_res = max(commutator_decomposition_residual(module, j, k, n)
                  for j in range(1, module.d + 1)
                  for k in range(1, module.d + 1)
                  for n in range(1, module.top_level))
    hard_check(failures, "row_sum_identity", row_res, cfg.EXACT_TOL)
    hard_check(failures, "commutator_decomposition", dec_res, cfg.EXACT_TOL)

    # resolvent projection at a mid level
    level = min(2, module.top_level - 2)
    row = RowOperator(module)
    target = sub.basis(level + 1)
    lmat = row.block(level)
    proj_out = lmat - target @ (target.conj().T @ lmat)
    pre = linalg.nullspace(proj_out)
    b = lmat @ linalg.projector(pre) @ lmat.conj().T
    eigs = np.linalg.eigvalsh(b)
    positive = eigs[eigs > 1e-10 * max(eigs.max(initial=0.0), 1.0)]
    quad_report = None
    if positive.size:
        gap = float(positive.min())
        y_ops = [module.coordinate_block(k, level + 1).conj().T
                 @ module.coordinate_block(k, level + 1)
                 for k in range(1, module.d + 1)]
        rep = resolvent_projection(b, gap, nodes=nodes, transforms=y_ops,
                                   p_values=[1.0])
        oracle = spectral_projection_oracle(b, gap)
        distance = float(np.linalg.norm(rep.projection - oracle, 2))
        hard_check(failures, "resolvent_vs_eigendecomposition", distance, 1e-8)
        for i, check in enumerate(rep.bound_checks):
            hard_check(failures, f"commutator_bound_{i}", -check.slack, 0.0)
        quad_report = {
            "level": level,
            "gap": gap,
            "nodes": rep.nodes,
            "converged": rep.converged,
            "successive_difference": rep.successive_difference,
            "distance_to_oracle": distance,
            "bound_checks": [{
                "p": c.p, "measured": c.measured,
                "bound": c.bound, "slack": c.slack,
            } for c in rep.bound_checks],
        }

    report = {
        "schema": 1,
        "command": "identity",
        "config": config_echo(args, module, extra={"gens": resolve(args, "gens"),
                                                   "nodes": nodes}),
        "compression_identity_residuals": comp,
        "row_sum_residual": row_res,
        "commutator_decomposition_residual": dec_res,
        "resolvent": quad_report,
        "hard_failures": failures,
    }
    return report, [dump_report(report, outdir / "identity.json")]


def cmd_counterexample(args, outdir):
    n_levels = resolve(args, "N", cast=int)
    if n_levels is None or n_levels < 5:
        raise ParseFailure("counterexample needs --N >= 5")
    u_path = resolve(args, "u")
    if u_path is None:
        u = alternating_block_sequence(n_levels + 1)
    else:
        try:
            u = np.array([float(tok) for tok in
                          read_text_file(u_path, "u sequence").split()])
        except ValueError as exc:
            raise ParseFailure(f"bad u file: {exc}") from exc
    try:
        rep = similarity_counterexample(u, n_levels)
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc

    failures = []
    hard_check(failures, "intertwining_LA_equals_BL", rep.intertwining_residual, 0.0)
    if rep.a_commutator_rank != 1:
        failures.append({"check": "a_self_commutator_rank",
                         "value": rep.a_commutator_rank, "tolerance": 1})

    report = {
        "schema": 1,
        "command": "counterexample",
        "config": {"N": n_levels, "u": u_path or "alternating-default"},
        "flagged_indices": rep.flagged_indices,
        "flagged_count": int(rep.flagged_indices.size),
        "intertwining_residual": rep.intertwining_residual,
        "a_self_commutator_rank": rep.a_commutator_rank,
        "b_self_commutator_diag_at_flags":
            rep.b_commutator_diag[rep.flagged_indices],
        "b_ratio_diag_at_flags": rep.b_ratio_diag[rep.flagged_indices],
        "max_partial_sum": rep.max_partial_sum,
        "intertwiner_extremes": list(rep.intertwiner_extremes),
        "b_weights": np.exp(rep.u[1:]),
        "hard_failures": failures,
    }
    return report, [dump_report(report, outdir / "counterexample.json")]


COMMANDS = {
    "weights": cmd_weights,
    "submodule": cmd_submodule,
    "linearize": cmd_linearize,
    "ev": cmd_ev,
    "koszul": cmd_koszul,
    "identity": cmd_identity,
    "counterexample": cmd_counterexample,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gradmod",
        description="Graded Hilbert module experiments with deterministic reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "weights": "weight table, slow-oscillation and summability diagnostics "
                   "(CSV columns: k, rho, diff = rho_{k+1}-rho_k, cumulative "
                   "psum_p<P> = sum k^{d-1}|diff|^p from k=1)",
        "submodule": "generate a graded submodule, report dimensions/degree/reducing",
        "linearize": "iterate the row-operator pullback down to degree 1",
        "ev": "E_V spaces of a subspace V of d.E and the quotient commutator trends",
        "koszul": "Koszul boundary, Betti table and Dirac-square residuals",
        "identity": "compression identities, row sums, resolvent projection bound",
        "counterexample": "similar pair LA = BL with only one side essentially normal",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--d", type=int, help="number of variables")
        p.add_argument("--r", type=int, help="multiplicity dim E (default 1)")
        p.add_argument("--N", type=int, help="truncation degree")
        p.add_argument("--family",
                       choices=["dshift", "hardy", "bergman", "sinsqrt"],
                       help="weight family (default dshift)")
        p.add_argument("--r1", type=float, help="sinsqrt lower bound")
        p.add_argument("--r2", type=float, help="sinsqrt upper bound")
        p.add_argument("--p", help="comma list of Schatten exponents")
        p.add_argument("--gens", help="generators file (one per line: "
                       "'deg c (a_1 .. a_d)@e_i + ...', c in a+bi form)")
        p.add_argument("--V", help="subspace file: rows of complex entries, "
                       "columns span V in d.E")
        p.add_argument("--u", help="file of u_n values for the counterexample")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, help="override hard-check tolerance")
        p.add_argument("--nodes", type=int, help="contour quadrature nodes")
        p.add_argument("--tail", type=int, help="tail window for oscillation")
        p.add_argument("--json", action="store_true",
                       help="write only the JSON report")
        p.add_argument("--csv", action="store_true",
                       help="write only the CSV table (weights)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args._file_config = read_config_file(args.config) if args.config else {}
    except (ParseFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        report, written = COMMANDS[args.command](args, outdir)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WindowFailure as exc:
        report, written = exc.report
        for path in written:
            print(f"wrote {path}")
        print(f"window exhausted: {exc}", file=sys.stderr)
        return EXIT_WINDOW

    for path in written:
        print(f"wrote {path}")
    failures = report.get("hard_failures", [])
    if failures:
        for f in failures:
            print(f"FAIL {f['check']}: {f['value']} > {f['tolerance']}",
                  file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
