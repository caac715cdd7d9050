"""Command-line frontend.

Exit codes: 0 success, 2 unreadable or malformed input, 3 invalid input,
4 infeasible realization or scaling, 5 numerical failure during integration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import formats
from .balance import BALANCE_TOL, balance_fit, find_balanced_state, stiemke_infeasibility, stiemke_vector
from .catalog import cooperative_vertices
from .dynamics import GlvSystem, ScaledSystem
from .egraph import EGraph, structural_report
from .errors import Infeasible, NumericalError, ParseError, ValidationError
from .realization import (
    HoiParameters,
    RealizationProblem,
    cooperative_parameters,
    default_candidate_vertices,
    find_scaling,
    hoi_condition,
    realize,
    realized_balance,
    square_problem,
)
from .simulate import ensemble_initial_states, integrate

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 2, 3, 4, 5
U64_MAX = 2**64 - 1


def _emit(text: str, path=None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ----- payload builders (shared with the tests) -----


def balance_payload(g: EGraph, tol: float = BALANCE_TOL) -> dict:
    """Complex-balance certificate, else Stiemke certificate, else an "undetermined" record."""
    cert = find_balanced_state(g, tol)
    if cert is not None:
        return cert.to_dict()
    sc = stiemke_vector(g)
    if sc is not None:
        return sc.to_dict()
    fit = balance_fit(g)
    rep = structural_report(g)
    return {
        "type": "undetermined",
        "deficiency": rep.deficiency,
        "weakly_reversible": rep.weakly_reversible,
        "fit_residual": None if fit is None else fit[2],
        "stiemke_infeasibility": stiemke_infeasibility(g),
    }


def infeasible_payload(exc: Infeasible) -> dict:
    y_ub, y_eq = exc.certificate if exc.certificate is not None else ([], [])
    return {"status": "infeasible", "message": str(exc), "farkas": {"ub": y_ub, "eq": y_eq}}


def realization_payload(result, extra=None) -> dict:
    bal = realized_balance(result)
    report = {"status": "feasible", **result.report()}
    report["balance_residual"] = None if bal is None else bal.max_residual
    report["balanced"] = None if bal is None else bal.balanced
    if extra:
        report.update(extra)
    return report


def simulation_summary(traj, x0) -> dict:
    out = {
        "x0": np.asarray(x0, dtype=float),
        "t_final": traj.times[-1],
        "accepted_steps": len(traj) - 1,
        "final": traj.final,
        "converged": traj.converged_to is not None,
        "converged_to": None if traj.converged_to is None else np.exp(traj.converged_to),
        "max_conservation_residual": traj.max_conservation_residual(),
    }
    if traj.reference is not None:
        out["predicted_steady_state"] = np.exp(traj.reference)
        out["lyapunov_violation"] = traj.lyapunov_violation()
    return out


# ----- subcommands -----


def cmd_analyze(args) -> int:
    g = formats.read_graph(args.graph)
    _emit(formats.dumps(structural_report(g).to_dict()), args.output)
    return EXIT_OK


def cmd_balance(args) -> int:
    g = formats.read_graph(args.graph)
    _emit(formats.dumps(balance_payload(g, args.tol)), args.output)
    return EXIT_OK


def _vector(values, what):
    if values is None:
        return None
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} must be finite")
    return arr


def _build_problem(args) -> tuple[RealizationProblem, dict]:
    raw = formats.load(args.system)
    vertices = None if args.vertices is None else formats.vertices_from_json(formats.load(args.vertices))
    has_vertices = vertices is not None or (isinstance(raw, dict) and "vertices" in raw)
    x_star = _vector(args.x_star, "--x-star")
    d = "search" if args.scaling == "search" else _vector(args.d, "--d")
    extra = {}

    if args.hoi:
        system = formats.system_from_dict(raw.get("system", raw) if isinstance(raw, dict) else raw)
        params = HoiParameters.from_system(system)
        if x_star is None:
            states = params.steady_states()
            if not states:
                raise ValidationError("the higher-order model has no positive steady state")
            x_star = states[0]
        w = hoi_condition(params, x_star)
        extra["hoi"] = {"holds": w.holds, "signs": list(w.signs), "d": w.d}
        if d is None:
            d = w.d if w.holds else np.ones(2)
        return square_problem(params, x_star, d), extra

    if has_vertices:
        p = formats.problem_from_dict(raw, vertices)
        if x_star is not None or d is not None:
            p = RealizationProblem(p.system, p.candidate_vertices, x_star if x_star is not None else p.x_star,
                                   d if d is not None else p.d, p.candidate_edges)
        return p, extra
    system = formats.system_from_dict(raw.get("system", raw) if isinstance(raw, dict) else raw)
    if d == "search":
        V = cooperative_vertices(system.dimension)
    else:
        V = default_candidate_vertices(system)
    return RealizationProblem(system, V, x_star, d), extra


def cmd_realize(args) -> int:
    problem, extra = _build_problem(args)
    try:
        result = realize(problem)
    except Infeasible as exc:
        payload = infeasible_payload(exc)
        payload.update(extra)
        _emit(formats.dumps(payload), args.report)
        print(str(exc), file=sys.stderr)
        return EXIT_INFEASIBLE
    report = realization_payload(result, extra)
    if args.output is None:
        _emit(formats.dumps({"graph": result.graph.to_dict(), "report": report}))
    else:
        formats.write_graph(result.graph, args.output)
        _emit(formats.dumps(report), args.report)
    return EXIT_OK


def cmd_scaling(args) -> int:
    system = formats.read_system(args.system)
    r, A = cooperative_parameters(system)
    try:
        d = find_scaling(r, A)
    except Infeasible as exc:
        _emit(formats.dumps(infeasible_payload(exc)), args.output)
        print(str(exc), file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(formats.dumps({"status": "feasible", "d": d, "column_sums": d @ A}), args.output)
    return EXIT_OK


def _initial_states(args, n):
    if args.x0 is not None and args.ensemble is not None:
        raise ValidationError("give either --x0 or --ensemble, not both")
    if args.x0 is not None:
        return [_vector(args.x0, "--x0")]
    if args.ensemble is not None:
        if args.ensemble < 1:
            raise ValidationError("--ensemble needs a positive count")
        return list(ensemble_initial_states(n, args.ensemble, args.seed))
    raise ValidationError("simulate needs --x0 or --ensemble")


def _csv_path(base, k, count):
    if base is None or count == 1:
        return base
    p = Path(base)
    return p.with_name(f"{p.stem}_{k}{p.suffix}")


def cmd_simulate(args) -> int:
    model = formats.read_model(args.model)
    d = _vector(args.d, "--d")
    cert = None
    if isinstance(model, GlvSystem):
        if d is not None:
            model = model.scaled(d)
        target = model
        n = model.dimension
    else:
        target = ScaledSystem(model, d)
        cert = find_balanced_state(model)
        n = model.dimension
    states = _initial_states(args, n)
    runs = []
    for k, x0 in enumerate(states):
        traj = integrate(target, x0, args.t_end, args.rel_tol, cert)
        runs.append(simulation_summary(traj, x0))
        if args.samples:
            traj = traj.merged_with_grid(args.samples)
        path = _csv_path(args.csv, k, len(states))
        if path is None:
            if len(states) == 1:
                sys.stdout.write(traj.to_csv())
        else:
            formats.write_trajectory_csv(traj, path)
    summary = runs[0] if len(runs) == 1 else {"seed": args.seed, "runs": runs}
    if args.json is not None:
        _emit(formats.dumps(summary), args.json)
    elif args.csv is not None or len(states) > 1:
        _emit(formats.dumps(summary))
    return EXIT_OK


# ----- parser -----


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glvbalance", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="deficiency, linkage classes, weak reversibility")
    a.add_argument("graph")
    a.add_argument("-o", "--output")
    a.add_argument("--json", action="store_true", help="JSON output (the default)")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("balance", help="complex-balance or Stiemke certificate")
    b.add_argument("graph")
    b.add_argument("-o", "--output")
    b.add_argument("--tol", type=float, default=BALANCE_TOL)
    b.add_argument("--json", action="store_true", help="JSON output (the default)")
    b.set_defaults(func=cmd_balance)

    r = sub.add_parser("realize", help="find edge weights generating a system")
    r.add_argument("system", help="system file, or a problem file with candidate vertices")
    r.add_argument("--vertices", help="candidate vertex file")
    r.add_argument("--x-star", type=float, nargs="+", help="enforce complex balance at this state")
    r.add_argument("--d", type=float, nargs="+", help="fixed species scaling")
    r.add_argument("--scaling", choices=["search"], help="search a scaling (quadratic cooperative systems)")
    r.add_argument("--hoi", action="store_true", help="two-species higher-order model on the unit square")
    r.add_argument("-o", "--output", help="realized graph file")
    r.add_argument("--report", help="report file")
    r.set_defaults(func=cmd_realize)

    s = sub.add_parser("simulate", help="integrate in log coordinates")
    s.add_argument("model", help="graph or system file")
    s.add_argument("--x0", type=float, nargs="+")
    s.add_argument("--ensemble", type=int, help="number of log-uniform initial states in [-2, 2]^n")
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--t-end", type=float, default=100.0)
    s.add_argument("--rel-tol", type=float, default=1e-9)
    s.add_argument("--d", type=float, nargs="+", help="species scaling")
    s.add_argument("--samples", type=int, help="add this many uniformly spaced output times")
    s.add_argument("--csv", help="trajectory CSV (stdout when omitted)")
    s.add_argument("--json", help="summary JSON file")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("scaling", help="scaling d for a quadratic cooperative system")
    c.add_argument("system")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_scaling)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except Infeasible as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        last = getattr(exc, "last_state", None)
        name, msg = type(exc).__name__, str(exc)
        print(msg if msg.startswith(name) else f"{name}: {msg}", file=sys.stderr)
        if last is not None:
            print(formats.dumps({"last_state": last}), end="", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
