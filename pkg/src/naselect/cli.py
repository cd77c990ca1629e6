"""Command line: project, compose, feasibility, simulation, oracle cross-checks, scenarios.

Exit codes: 0 success, 1 usage, 2 validation, 3 infeasible conditions,
4 oracle or invariant mismatch, 5 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fileio
from .errors import (
    AdversaryError,
    BudgetExceededError,
    InfeasibleError,
    ProcedureStuckError,
    UsageError,
    ValidationError,
)
from .multifunction import mf_le
from .nonanticipation import (
    canonical_chain,
    compose_chain,
    feasible,
    greatest_na,
    is_chain_na,
    is_prefix_na,
    meet_of_projections,
    project,
)
from .oracle import DEFAULT_BUDGET, EnumBudget, brute_greatest
from .scenarios import build_scenario
from .stepwise import (
    InteractiveAdversary,
    ScriptedAdversary,
    StepTrace,
    run_exhaustive,
    run_stepwise,
    validate_trace,
    verify_witness,
)
from .timebase import Partition, Prefix, full_partition, partition_to_chain


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors must exit 1
        raise UsageError(message)


def _parse_delta(text: str) -> Partition:
    try:
        indices = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"bad partition {text!r}: expected comma-joined stamp indices") from None
    return Partition(indices)


def _trace_doc(trace: StepTrace, inst) -> dict:
    return {
        "delta": list(trace.delta.indices),
        "steps": [
            {
                "step": s.index,
                "revealed": list(s.revealed),
                "omega": inst.omega.names[s.omega],
                "h": inst.z.names[s.h],
                "omega_consistent": s.omega_consistent,
                "h_consistent": s.h_consistent,
                "h_admissible": s.h_admissible,
            }
            for s in trace.steps
        ],
        "final": inst.z.names[trace.final_h],
        "consistent": trace.consistent,
    }


def _emit(report: dict, args) -> None:
    print(fileio.render_report(report, args.json))


def cmd_project(args) -> int:
    inst, mf = fileio.load(args.file)
    p = Prefix(args.prefix)
    inst.grid.check_prefix(p)
    result = project(mf, p)
    _emit(fileio.build_report("project", inst, mf, {"prefix": args.prefix}, result), args)
    return 0


def cmd_compose(args) -> int:
    inst, mf = fileio.load(args.file)
    delta = _parse_delta(args.delta)
    chain = partition_to_chain(inst.grid, delta)
    result = compose_chain(mf, chain)
    _emit(fileio.build_report("compose", inst, mf, {"delta": args.delta}, result), args)
    return 0


def cmd_feasible(args) -> int:
    inst, mf = fileio.load(args.file)
    delta = _parse_delta(args.delta)
    ok, witness = feasible(mf, delta)
    shown = witness if ok else compose_chain(mf, partition_to_chain(inst.grid, delta))
    report = fileio.build_report(
        "feasible", inst, mf, {"delta": args.delta}, shown, {"feasible": ok}
    )
    _emit(report, args)
    return 0 if ok else 3


def cmd_greatest(args) -> int:
    inst, mf = fileio.load(args.file)
    chain = canonical_chain(inst)
    result = greatest_na(mf)
    extra = {"chain": [p.len for p in chain.prefixes]}
    _emit(fileio.build_report("greatest", inst, mf, {}, result, extra), args)
    return 0


def cmd_simulate(args) -> int:
    inst, mf = fileio.load(args.file)
    delta = _parse_delta(args.delta)
    spec = args.adversary
    if spec == "exhaustive":
        traces = run_exhaustive(mf, delta, policy=args.policy, seed=args.seed, check=True)
        doc = {
            "command": "simulate",
            "inputs": {"digest": fileio.instance_digest(inst, mf), "args": {"delta": args.delta}},
            "traces": {inst.omega.names[w]: _trace_doc(t, inst) for w, t in sorted(traces.items())},
        }
        if args.json:
            print(json.dumps(doc, sort_keys=True, indent=2))
        else:
            for name in sorted(doc["traces"]):
                t = doc["traces"][name]
                print(f"{name}: final={t['final']} consistent={'yes' if t['consistent'] else 'no'}")
        return 0
    if spec == "interactive":
        adversary = InteractiveAdversary(inst)
    elif spec.startswith("scripted:"):
        w = inst.omega.index_of(spec.split(":", 1)[1])
        adversary = ScriptedAdversary(inst.omega.signals[w])
    else:
        raise ValidationError(f"unknown adversary {spec!r}")
    if spec == "interactive":

        def echo(step):
            key = inst.z.signals[step.h].cells[: len(step.revealed)]
            print(
                f"step {step.index}: h={inst.z.names[step.h]} "
                f"h|{len(step.revealed)}={','.join(key)}",
                flush=True,
            )

        trace = run_stepwise(
            mf, delta, adversary, policy=args.policy, seed=args.seed, on_step=echo
        )
        print(json.dumps(_trace_doc(trace, inst), sort_keys=True))
        return 0
    trace = run_stepwise(mf, delta, adversary, policy=args.policy, seed=args.seed)
    doc = _trace_doc(trace, inst)
    problems = validate_trace(mf, trace)
    if args.json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for s in doc["steps"]:
            print(f"step {s['step']}: omega={s['omega']} h={s['h']}")
        print(f"final: {doc['final']}")
    return 0 if not problems else 4


def cmd_oracle(args) -> int:
    inst, mf = fileio.load(args.file)
    delta = _parse_delta(args.delta)
    chain = partition_to_chain(inst.grid, delta)
    budget = DEFAULT_BUDGET if args.budget is None else EnumBudget(args.budget)
    fast = compose_chain(mf, chain)
    slow = brute_greatest(mf, chain, budget, threads=args.threads)
    match = fast.values == slow.values
    report = fileio.build_report(
        "oracle", inst, mf, {"delta": args.delta}, fast, {"match": match}
    )
    _emit(report, args)
    return 0 if match else 4


def cmd_scenario(args) -> int:
    rho = None
    if args.rho is not None:
        try:
            rho = Fraction(args.rho)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"bad rho {args.rho!r}") from None
    inst, mf, meta = build_scenario(args.name, rho=rho)
    fileio.save(args.emit, inst, mf, metadata=meta)
    print(f"{args.emit}: {fileio.instance_digest(inst, mf)}")
    return 0


def _check_lines(inst, mf) -> list[tuple[str, bool]]:
    out: list[tuple[str, bool]] = []
    out.append(("order-reflexive", mf_le(mf, mf)))
    for p in inst.grid.prefixes():
        g = project(mf, p)
        out.append((f"project-nonexpansive@{p.len}", mf_le(g, mf)))
        out.append((f"project-idempotent@{p.len}", project(g, p).values == g.values))
        out.append((f"project-na@{p.len}", is_prefix_na(g, p).holds))
        out.append(
            (f"fixpoint-char@{p.len}", is_prefix_na(mf, p).holds == (g.values == mf.values))
        )
    chain = partition_to_chain(inst.grid, full_partition(inst.grid))
    composed = compose_chain(mf, chain)
    out.append(("compose-chain-na", is_chain_na(composed, chain).holds))
    out.append(("compose-below-meet", mf_le(composed, meet_of_projections(mf, chain))))
    top = greatest_na(mf)
    out.append(("greatest-fully-na", is_chain_na(top, chain).holds))
    bits = sum(len(v) for v in mf.values)
    if 2**bits <= 2**16:
        out.append(("compose-vs-oracle", brute_greatest(mf, chain).values == composed.values))
    delta = full_partition(inst.grid)
    ok, _ = feasible(mf, delta)
    witness_ok = verify_witness([composed] * delta.steps, delta, mf).ok
    out.append(("feasible-vs-witness", ok == witness_ok))
    try:
        run_exhaustive(mf, delta, check=False)
        stepwise_ok = True
    except (ProcedureStuckError, InfeasibleError):
        stepwise_ok = False
    out.append(("feasible-vs-stepwise", ok == stepwise_ok))
    return out


def cmd_check(args) -> int:
    inst, mf = fileio.load(args.file)
    lines = _check_lines(inst, mf)
    for name, ok in lines:
        print(("ok   " if ok else "FAIL ") + name)
    return 0 if all(ok for _, ok in lines) else 4


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON reports")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized choices")
    common.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")

    parser = _Parser(prog="naselect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("project", parents=[common], help="project at one prefix")
    p.add_argument("file")
    p.add_argument("--prefix", type=int, required=True, help="prefix length in cells")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("compose", parents=[common], help="greatest partition-non-anticipative multiselector")
    p.add_argument("file")
    p.add_argument("--delta", required=True, help="comma-joined stamp indices")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("feasible", parents=[common], help="decide step-by-step feasibility")
    p.add_argument("file")
    p.add_argument("--delta", required=True)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("greatest", parents=[common], help="greatest fully non-anticipative multiselector")
    p.add_argument("file")
    p.set_defaults(func=cmd_greatest)

    p = sub.add_parser("simulate", parents=[common], help="run the step-by-step procedure")
    p.add_argument("file")
    p.add_argument("--delta", required=True)
    p.add_argument(
        "--adversary",
        required=True,
        help="scripted:<name> | interactive | exhaustive",
    )
    p.add_argument("--policy", choices=("lex", "random"), default="lex")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", parents=[common], help="cross-check composition against brute force")
    p.add_argument("file")
    p.add_argument("--delta", required=True)
    p.add_argument("--budget", type=int, help="cap on enumerated subset assignments")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scenario", parents=[common], help="emit a built-in instance")
    p.add_argument("name", help="ex1 | ex2 | ex3:<n> | ex4[:levels] | random:<seed>:<sizes>")
    p.add_argument("--emit", required=True, help="output path")
    p.add_argument("--rho", help="cost level override for ex4, as p/q")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("check", parents=[common], help="run the invariant suite on one instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    return parser


def cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AdversaryError as e:
        print(f"adversary error: {e}", file=sys.stderr)
        return 2
    except (InfeasibleError, ProcedureStuckError) as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 3
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 5


def main() -> None:
    sys.exit(cli(sys.argv[1:]))
