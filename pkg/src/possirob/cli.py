"""Command-line front end.

Every command prints a deterministic key/value result document to stdout
(degrees and vectors with six decimals) and, with ``--out``, writes the same
data as JSON.  Wall time goes to stderr so identical invocations produce
identical stdout bytes.  Exit codes: 0 on success, 1 on input errors, 2 when
a model is infeasible or the instance breaks the nominal-solvability
assumption.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any

import numpy as np

from .combinatorial import (ShortestPathOracle, SpanningTreeOracle, load_graph,
                            solve_soft_nec_combinatorial)
from .experiment import (DESK_SCALE, FULL_SCALE, GeneratorSpec, run_experiment,
                         sample_scenarios, stream)
from .instance_io import InstanceFormatError, load_instance, serialize_instance
from .models import UncertainInstance, build_robust
from .simplex import (LpStatus, ScipyBackend, SimplexBackend, SolverConfig,
                      solve as lp_solve)
from .solver import (AssumptionViolation, SolveOutcome, nominal_optimum,
                    solve_light_robust, solve_nec, solve_soft_nec,
                    solve_soft_nec_obj)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


class _Parser(argparse.ArgumentParser):
    # Flag and usage mistakes are input errors: exit 1, not argparse's 2.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    return f"{value + 0.0:.6f}"


def _emit(doc: dict[str, Any], out_path: str | None) -> None:
    for key, value in doc.items():
        if isinstance(value, float):
            line = _fmt(value)
        elif isinstance(value, (list, tuple, np.ndarray)):
            items = list(value)
            if all(isinstance(v, (int, np.integer)) for v in items):
                line = "[" + ", ".join(str(int(v)) for v in items) + "]"
            else:
                line = "[" + ", ".join(_fmt(float(v)) for v in items) + "]"
        else:
            line = str(value)
        print(f"{key}: {line}")
    if out_path:
        payload = {k: (list(map(float, v)) if isinstance(v, (list, tuple, np.ndarray))
                       else v)
                   for k, v in doc.items()}
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _price(cost: float, c_hat: float) -> float:
    if c_hat == 0.0:
        return 0.0 if cost == 0.0 else float("inf")
    return abs((cost - c_hat) / c_hat)


def _backend(args: argparse.Namespace):
    if getattr(args, "backend", "reference") == "scipy":
        return ScipyBackend()
    return SimplexBackend()


def _config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig()


def _degree_doc(model: str, out: SolveOutcome, eps: float,
                cost: float) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "model": model,
        "status": "optimal",
        "degree": out.degree,
        "lambda_bar": out.lambda_bar,
        "epsilon": eps,
        "iterations": out.iterations,
        "nominal_value": out.nominal_value,
        "objective": cost,
        "d": _price(cost, out.nominal_value),
        "solution": out.solution,
    }
    if out.effectively_zero:
        doc["note"] = "degree-below-accuracy"
    return doc


# -- command handlers ----------------------------------------------------


def _cmd_nominal(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    c_hat, x_hat = nominal_optimum(inst, _config(args), _backend(args))
    _emit({"model": "nominal", "status": "optimal", "objective": c_hat,
           "nominal_value": c_hat, "d": 0.0, "solution": x_hat}, args.out)
    return EXIT_OK


def _cmd_robust(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    c_hat, _ = nominal_optimum(inst, _config(args), _backend(args))
    system = build_robust(inst, args.lam)
    res = lp_solve(system, _config(args), _backend(args))
    if res.status is not LpStatus.OPTIMAL:
        _emit({"model": "robust", "status": res.status.value}, args.out)
        return EXIT_INFEASIBLE
    x = system.extract_x(res.point)
    _emit({"model": "robust", "status": "optimal", "objective": res.value,
           "nominal_value": c_hat, "d": _price(res.value, c_hat),
           "solution": x}, args.out)
    return EXIT_OK


def _cmd_light(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    out = solve_light_robust(inst, args.rho0, args.norm, _config(args), _backend(args))
    cost = float(np.dot(inst.cost_nominal(), out.solution))
    _emit({"model": "light", "status": "optimal", "objective": out.value,
           "norm": args.norm, "nominal_value": out.nominal_value,
           "cost": cost, "d": _price(cost, out.nominal_value),
           "solution": out.solution}, args.out)
    return EXIT_OK


def _cmd_nec(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    out = solve_nec(inst, args.rho0, args.epsilon, _config(args), _backend(args))
    cost = float(np.dot(inst.cost_nominal(), out.solution))
    _emit(_degree_doc("nec", out, args.epsilon, cost), args.out)
    return EXIT_OK


def _cmd_soft_nec(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    out = solve_soft_nec(inst, args.rho0, args.z, args.nominal_feasible,
                         args.epsilon, _config(args), _backend(args))
    cost = float(np.dot(inst.cost_nominal(), out.solution))
    _emit(_degree_doc("soft-nec", out, args.epsilon, cost), args.out)
    return EXIT_OK


def _cmd_soft_nec_obj(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if not inst.has_uncertain_objective:
        print("soft-nec-obj: the instance must define an uncertain objective "
              "(object form of 'c')", file=sys.stderr)
        return EXIT_INPUT
    obj = inst.objective
    from dataclasses import replace

    from .fuzzy import FuzzyGoal
    shape = args.z if args.z is not None else obj.goal.shape
    goal = FuzzyGoal(None, args.rho0, shape)
    inst = UncertainInstance(objective=replace(obj, goal=goal), rows=inst.rows,
                             feasible_set=inst.feasible_set)
    out = solve_soft_nec_obj(inst, args.epsilon, args.nominal_feasible,
                             _config(args), _backend(args))
    cost = float(np.dot(inst.cost_nominal(), out.solution))
    _emit(_degree_doc("soft-nec-obj", out, args.epsilon, cost), args.out)
    return EXIT_OK


def _cmd_combi(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    oracle = (ShortestPathOracle(graph) if args.oracle == "sp"
              else SpanningTreeOracle(graph))
    row = graph.cost_row(args.gamma0, args.rho0, args.b0_bar, args.z)
    out = solve_soft_nec_combinatorial(row, oracle, args.epsilon)
    cost = float(np.dot(row.nominal(), out.solution))
    doc = _degree_doc("combi", out, args.epsilon, cost)
    doc["oracle"] = args.oracle
    doc["edges"] = [int(e) for e in np.flatnonzero(out.solution > 0.5)]
    _emit(doc, args.out)
    return EXIT_OK


_SIMULATE_MODELS = ("nominal", "robust", "light", "nec", "soft-nec")


def _cmd_simulate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    config, backend = _config(args), _backend(args)
    c_hat, x_hat = nominal_optimum(inst, config, backend)
    if args.model == "nominal":
        x = x_hat
    elif args.model == "robust":
        system = build_robust(inst, 0.0)
        res = lp_solve(system, config, backend)
        if res.status is not LpStatus.OPTIMAL:
            _emit({"model": "simulate", "solved": "robust",
                   "status": res.status.value}, args.out)
            return EXIT_INFEASIBLE
        x = system.extract_x(res.point)
    elif args.model == "light":
        x = solve_light_robust(inst, args.rho0, args.norm, config, backend).solution
    elif args.model == "nec":
        x = solve_nec(inst, args.rho0, args.epsilon, config, backend).solution
    else:
        x = solve_soft_nec(inst, args.rho0, args.z, args.nominal_feasible,
                           args.epsilon, config, backend).solution
    scen = sample_scenarios(inst, stream(args.seed, 1, 0), args.scenarios)
    b = np.array([row.rhs.base for row in inst.rows])
    lhs = scen @ x
    viol = np.maximum((lhs - b) / b, 0.0).max(axis=1)
    cost = float(np.dot(inst.cost_nominal(), x))
    _emit({
        "model": "simulate",
        "solved": args.model,
        "status": "ok",
        "scenarios": args.scenarios,
        "seed": args.seed,
        "nominal_value": c_hat,
        "cost": cost,
        "d": _price(cost, c_hat),
        "infeas": float(np.mean(viol > 0.0)),
        "aviol": float(np.mean(viol)),
        "solution": x,
    }, args.out)
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace) -> int:
    scale = FULL_SCALE if args.full else DESK_SCALE
    n = args.n if args.n else scale["n"]
    gamma = args.gamma if args.gamma is not None else min(30, n)
    spec = GeneratorSpec(n=n, m=args.m, gamma=gamma, seed=args.seed)
    report = run_experiment(
        spec,
        p_grid=scale["p_grid"],
        instances_per_p=args.instances if args.instances else scale["instances_per_p"],
        scenarios=args.scenarios if args.scenarios else scale["scenarios"],
        eps=args.epsilon,
        config=_config(args),
        backend=_backend(args),
        progress=(lambda msg: print(msg, file=sys.stderr)) if args.verbose else None,
    )
    csv = report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    doc = serialize_instance(inst)
    print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_OK


# -- parser wiring ---------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, *, instance: bool = True) -> None:
    if instance:
        sub.add_argument("--instance", required=True, help="instance JSON file")
    sub.add_argument("--epsilon", type=float, default=1e-4,
                     help="bisection accuracy (default 1e-4)")
    sub.add_argument("--out", help="also write the result as JSON to this file")
    sub.add_argument("--backend", choices=("reference", "scipy"),
                     default="reference", help="LP backend (default reference)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="possirob",
                     description="Robust optimization under fuzzy-interval uncertainty")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("nominal", parents=[], help="solve the nominal counterpart")
    _add_common(p)
    p.set_defaults(func=_cmd_nominal)

    p = commands.add_parser("robust", help="budget-protected worst-case model")
    _add_common(p)
    p.add_argument("--lam", type=float, default=0.0,
                   help="confidence level of the cuts (default 0: full supports)")
    p.set_defaults(func=_cmd_robust)

    p = commands.add_parser("light", help="slack-minimizing model under a cost budget")
    _add_common(p)
    p.add_argument("--rho0", type=float, default=0.0, help="cost budget above nominal")
    p.add_argument("--norm", choices=("max", "sum"), default="max")
    p.set_defaults(func=_cmd_light)

    p = commands.add_parser("nec", help="maximize the strict protection degree")
    _add_common(p)
    p.add_argument("--rho0", type=float, default=0.0)
    p.set_defaults(func=_cmd_nec)

    p = commands.add_parser("soft-nec", help="maximize the soft protection degree")
    _add_common(p)
    p.add_argument("--rho0", type=float, default=0.0)
    p.add_argument("--z", type=float, default=1.0, help="goal shape (default 1)")
    p.add_argument("--nominal-feasible", action="store_true",
                   help="additionally require feasibility under nominal data")
    p.set_defaults(func=_cmd_soft_nec)

    p = commands.add_parser("soft-nec-obj",
                            help="soft degree with an uncertain objective")
    _add_common(p)
    p.add_argument("--rho0", type=float, default=0.0)
    p.add_argument("--z", type=float, default=None,
                   help="goal shape (default: the objective's document shape)")
    p.add_argument("--nominal-feasible", action="store_true")
    p.set_defaults(func=_cmd_soft_nec_obj)

    p = commands.add_parser("combi", help="budgeted min-max cost over a graph")
    _add_common(p, instance=False)
    p.add_argument("--graph", required=True, help="edge-list graph file")
    p.add_argument("--oracle", choices=("sp", "mst"), required=True)
    p.add_argument("--gamma0", type=int, default=1, help="protection level")
    p.add_argument("--rho0", type=float, default=0.0)
    p.add_argument("--b0-bar", type=float, default=0.0,
                   help="allowed violation slack on the cost row")
    p.add_argument("--z", type=float, default=1.0)
    p.set_defaults(func=_cmd_combi)

    p = commands.add_parser("simulate",
                            help="solve one model, then score it on sampled scenarios")
    _add_common(p)
    p.add_argument("--model", choices=_SIMULATE_MODELS, default="soft-nec")
    p.add_argument("--rho0", type=float, default=0.0)
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--norm", choices=("max", "sum"), default="max")
    p.add_argument("--nominal-feasible", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scenarios", type=int, default=1000)
    p.set_defaults(func=_cmd_simulate)

    p = commands.add_parser("experiment", help="budget sweep over random instances")
    _add_common(p, instance=False)
    scale = p.add_mutually_exclusive_group()
    scale.add_argument("--desk", action="store_true", default=True,
                       help="desk scale: n=40, 20 instances, 200 scenarios (default)")
    scale.add_argument("--full", action="store_true",
                       help="full scale: n=100, 100 instances, 1000 scenarios")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=0, help="override the variable count")
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--gamma", type=int, default=None,
                   help="per-row protection level (default: 30, clamped to n)")
    p.add_argument("--instances", type=int, default=0,
                   help="override instances per budget value")
    p.add_argument("--scenarios", type=int, default=0,
                   help="override scenarios per instance")
    p.add_argument("--verbose", action="store_true", help="progress on stderr")
    p.set_defaults(func=_cmd_experiment)

    p = commands.add_parser("validate",
                            help="parse an instance and echo its normal form")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code = args.func(args)
    except InstanceFormatError as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssumptionViolation as exc:
        print(f"assumption violation: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        elapsed = time.perf_counter() - started
        print(f"wall_time_s: {elapsed:.3f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
