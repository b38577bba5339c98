"""Command-line front end: config-driven experiments emitting CSV/JSON data.

Commands: eval, sweep, equilibrium, groups, verify, optimize, multidim.
Output is data for external plotting, never rendered figures.  Exit codes:
0 success, 2 configuration or validation failure, 3 numerical failure,
4 certification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import design, groups as groups_mod, multidim as multidim_mod, oracle
from .equilibrium import sample_schedule, solve
from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    ModelError,
    QuadratureError,
    RangeError,
    RankDesignError,
)
from .functions import PopulationSpec
from .groups import GroupSpec
from .policy import TwoLevelPolicy, policy_from_json, validate
from .welfare import welfare_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CERTIFICATION = 4

WORKERS_ENV = "RANKDESIGN_WORKERS"


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


def _population(config: dict) -> PopulationSpec:
    if "population" not in config:
        raise ConfigError("config is missing the 'population' field")
    return PopulationSpec.from_json(config["population"])


def _policy(config: dict):
    if "policy" not in config:
        raise ConfigError("config is missing the 'policy' field")
    policy = policy_from_json(config["policy"])
    report = validate(policy)
    if not report.ok:
        raise ConfigError("invalid policy: " + "; ".join(str(v) for v in report.violations))
    return policy


def _groups(config: dict) -> GroupSpec:
    if "groups" not in config:
        raise ConfigError("config is missing the 'groups' field")
    return GroupSpec.from_json(config["groups"])


def _sweep_cutoffs(config: dict) -> list[float]:
    sweep = config.get("sweep")
    if not sweep:
        raise ConfigError("config is missing the 'sweep' field")
    if sweep.get("parameter", "c") != "c":
        raise ConfigError("only sweeps over the two-level cutoff 'c' are supported")
    lo, hi = sweep["range"]
    steps = int(sweep["steps"])
    if steps < 2:
        raise ConfigError("sweep needs at least 2 steps")
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _emit(args, payload, rows=None, header=None) -> None:
    """Write JSON payload or CSV rows to --output (default stdout)."""
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env else 1


def cmd_eval(args, config: dict) -> int:
    population = _population(config)
    policy = _policy(config)
    schedule = solve(population, policy)
    report = welfare_report(schedule)
    payload = report.to_json()
    rows = [[payload[k] for k in ("applicant_welfare", "societal_utility", "private_utility")]]
    _emit(args, payload, rows, ["applicant_welfare", "societal_utility", "private_utility"])
    return EXIT_OK


def _sweep_point(payload):
    population_json, c, capacity = payload
    population = PopulationSpec.from_json(population_json)
    from .policy import two_level

    try:
        schedule = solve(population, two_level(c, capacity))
        rep = welfare_report(schedule)
        level1 = schedule.policy.levels[-1]
        return (c, level1, rep.applicant_welfare, rep.societal_utility, rep.private_utility, "")
    except RankDesignError as exc:
        return (c, "", "", "", "", type(exc).__name__)


def cmd_sweep(args, config: dict) -> int:
    population = _population(config)
    capacity = config.get("capacity")
    if capacity is None:
        raise ConfigError("sweep config needs a top-level 'capacity' field")
    cutoffs = _sweep_cutoffs(config)
    payloads = [(population.to_json(), c, float(capacity)) for c in cutoffs]
    workers = _workers(args)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    else:
        rows = [_sweep_point(p) for p in payloads]
    if all(r[-1] for r in rows):
        raise ConfigError("every sweep point failed: " + rows[0][-1])
    header = ["c", "level1", "applicant_welfare", "societal_utility", "private_utility", "error"]
    payload = [dict(zip(header, r)) for r in rows]
    args.format = "csv" if args.format is None else args.format
    _emit(args, payload, rows, header)
    return EXIT_OK


def cmd_equilibrium(args, config: dict) -> int:
    population = _population(config)
    policy = _policy(config)
    schedule = solve(population, policy)
    rows = sample_schedule(schedule, args.grid)
    header = ["theta", "band", "effort", "score"]
    payload = [dict(zip(header, r)) for r in rows]
    args.format = "csv" if args.format is None else args.format
    _emit(args, payload, rows, header)
    return EXIT_OK


def cmd_groups(args, config: dict) -> int:
    population = _population(config)
    gspec = _groups(config)
    capacity = config.get("capacity")
    if capacity is None:
        raise ConfigError("groups config needs a top-level 'capacity' field")
    capacity = float(capacity)
    if "sweep" in config:
        cutoffs = _sweep_cutoffs(config)
    elif "policy" in config and "two_level" in config["policy"]:
        cutoffs = [float(config["policy"]["two_level"]["c"])]
    else:
        raise ConfigError("groups command needs a two-level policy or a sweep")
    if args.format == "json" and len(cutoffs) == 1:
        table = groups_mod.region_table(population, gspec, TwoLevelPolicy(cutoffs[0], capacity))
        _emit(args, table)
        return EXIT_OK
    rows = groups_mod.audit_sweep(population, gspec, capacity, cutoffs)
    header = ["c", "tau_A", "tau_B", "access", "gap_at_q25", "gap_at_q50", "gap_at_q75"]
    payload = [dict(zip(header, r)) for r in rows]
    args.format = "csv" if args.format is None else args.format
    _emit(args, payload, rows, header)
    return EXIT_OK


def cmd_verify(args, config: dict) -> int:
    population = _population(config)
    policy = _policy(config)
    schedule = solve(population, policy)
    instance = oracle.DiscreteInstance.from_schedule(schedule, args.n, args.delta_e)
    eps = args.eps if args.eps is not None else 5.0 / args.n
    result = oracle.certify_equilibrium(instance, eps)
    payload = result.to_json()
    payload["eps"] = eps
    payload["n"] = args.n
    _emit(args, payload, [[payload["certified"], payload["worst_gain"]]], ["certified", "worst_gain"])
    return EXIT_OK if result.is_eps_equilibrium else EXIT_CERTIFICATION


def cmd_optimize(args, config: dict) -> int:
    population = _population(config)
    capacity = config.get("capacity")
    if capacity is None:
        raise ConfigError("optimize config needs a top-level 'capacity' field")
    objective = {
        "applicant": design.Objective.APPLICANT_WELFARE,
        "societal": design.Objective.SOCIETAL_UTILITY,
        "private": design.Objective.PRIVATE_UTILITY,
    }[args.objective]
    result = design.optimize_two_level(population, float(capacity), objective)
    if args.output:
        with open(args.output, "w") as fh:
            writer = csv.writer(fh)
            writer.writerow(["c", "value"])
            writer.writerows(result.profile)
    best = {"c": result.c_star, "value": result.value, "objective": args.objective}
    sys.stdout.write(json.dumps(best, indent=2) + "\n")
    return EXIT_OK


def cmd_multidim(args, config: dict) -> int:
    section = config.get("multidim")
    if not section:
        raise ConfigError("config is missing the 'multidim' field")
    from .functions import function_from_json, Role

    payload = {}
    if "budget" in section:
        spec = multidim_mod.UnmeasurableSpec(
            f=function_from_json(section["f"], Role.SKILL_QUANTILE),
            g=function_from_json(section["g"], Role.EFFORT_TRANSFER),
            p=function_from_json(section["p"], Role.COST_FUNCTION),
            budget=float(section["budget"]),
            capacity=float(section["capacity"]),
        )
        c = float(section["c"])
        beta = multidim_mod.beta_for_interior_optimum(spec, c)
        payload.update(
            {
                "c": c,
                "beta": beta,
                "weighted_private_utility": multidim_mod.weighted_private_utility(spec, c, beta=beta),
                "measurable_mean": multidim_mod.measurable_conditional_mean(spec, c),
                "unmeasurable_mean": multidim_mod.unmeasurable_conditional_mean(spec, c),
            }
        )
    if "skills" in section:
        sk = section["skills"]
        spec = multidim_mod.MultiSkillSpec(
            quantiles=tuple(function_from_json(q, Role.SKILL_QUANTILE) for q in sk["quantiles"]),
            weights=tuple(sk["weights"]),
            transfer_slope=float(sk.get("transfer_slope", 1.0)),
            cost=function_from_json(sk["cost"], Role.COST_FUNCTION),
        )
        report = multidim_mod.check_multidim_rank_preservation(
            spec,
            sample_size=int(sk.get("sample_size", 500)),
            policy=_policy(config),
            seed=args.seed,
            delta_e=float(sk.get("delta_e", 5e-3)),
        )
        payload["rank_preservation"] = {
            "converged": report.converged,
            "rounds": report.rounds,
            "violations": len(report.violations),
        }
    if not payload:
        raise ConfigError("multidim section needs a 'budget' block or a 'skills' block")
    if args.format == "csv":
        rows = [
            (agent, v_pre, band, int(flag))
            for agent, v_pre, band, flag in (report.rows if "skills" in section else ())
        ]
        _emit(args, payload, rows, ["agent", "v_pre", "reward_band", "violation_flag"])
    else:
        _emit(args, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankdesign",
        description="Equilibrium, welfare, and fairness analysis of ranking reward policies",
    )
    parser.add_argument("--config", help="path to a JSON experiment config")
    parser.add_argument("--output", help="write result to this path instead of stdout")
    parser.add_argument("--format", choices=["csv", "json"], default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--grid", type=int, default=200)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval")
    sub.add_parser("sweep")
    sub.add_parser("equilibrium")
    sub.add_parser("groups")
    verify = sub.add_parser("verify")
    verify.add_argument("--n", type=int, default=500)
    verify.add_argument("--delta-e", dest="delta_e", type=float, default=1e-3)
    verify.add_argument("--eps", type=float, default=None)
    optimize = sub.add_parser("optimize")
    optimize.add_argument("--objective", choices=["applicant", "societal", "private"], required=True)
    sub.add_parser("multidim")
    return parser


_COMMANDS = {
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "equilibrium": cmd_equilibrium,
    "groups": cmd_groups,
    "verify": cmd_verify,
    "optimize": cmd_optimize,
    "multidim": cmd_multidim,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None and args.command in ("eval", "verify", "optimize", "multidim"):
        args.format = "json"
    try:
        config = _load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, DomainError, RangeError, ModelError, CapacityError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
