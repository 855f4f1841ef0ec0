"""Command-line interface.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fpsearch import __version__
from fpsearch.model2d import (
    SearchParams,
    apply_sequence,
    closed_for_mode,
    grover_reference,
    min_queries,
    pi3_reference,
    prob_grid,
    success_prob_closed,
)
from fpsearch.qsim import MAX_QUBITS, ProblemInstance, dump_state, run
from fpsearch.schedule import AMPLIFY, MODES, fixed_point_phases, nest_many

SCHEMA = 1
EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 1, 2, 3
REFERENCES = ("closed_form", "grover", "pi3")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _delta(delta_sq: float) -> float:
    if not 0.0 <= delta_sq <= 1.0:
        raise UsageError(f"--delta-sq must lie in [0, 1], got {delta_sq}")
    return math.sqrt(delta_sq)


def _emit_json(payload: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **payload}, indent=2))


def cmd_phases(args) -> int:
    delta = _delta(args.delta_sq)
    if args.l < 0:
        raise UsageError("--l must be nonnegative")
    if args.nest:
        if args.l < 1 or any(m < 1 for m in args.nest):
            raise UsageError("nesting needs positive component lengths")
        sched = nest_many([args.l, *args.nest], delta, args.mode)
    else:
        sched = fixed_point_phases(args.l, delta, args.mode)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "alpha", "beta"])
        for j, (a, b) in enumerate(zip(sched.alphas, sched.betas), start=1):
            w.writerow([j, _fmt(a), _fmt(b)])
        sys.stdout.write(buf.getvalue())
    else:
        _emit_json(sched.to_dict())
    return 0


def cmd_minl(args) -> int:
    if not 0.0 < args.delta_sq <= 1.0:
        raise UsageError("--delta-sq must lie in (0, 1]; delta = 0 has no finite query count")
    if not 0.0 < args.lambda0 <= 1.0:
        raise UsageError("--lambda0 must lie in (0, 1]")
    q = min_queries(math.sqrt(args.delta_sq), args.lambda0)
    if args.format == "json":
        _emit_json({"delta_sq": args.delta_sq, "lambda0": args.lambda0, **q._asdict()})
    else:
        print("L,queries,width,bound")
        print(f"{q.L},{q.queries},{_fmt(q.width)},{_fmt(q.bound)}")
    return 0


@dataclass(frozen=True)
class SweepSpec:
    delta_sq: float
    l_values: tuple[int, ...]
    lambda_min: float
    lambda_max: float
    points: int
    spacing: str = "log"
    references: tuple[str, ...] = REFERENCES
    pi3_levels: tuple[int, ...] = (1, 2)

    def __post_init__(self):
        if not 0.0 < self.lambda_min <= self.lambda_max <= 1.0:
            raise UsageError("need 0 < lambda-min <= lambda-max <= 1")
        if self.points < 2:
            raise UsageError("need at least 2 grid points")
        if not self.l_values or any(l < 0 for l in self.l_values):
            raise UsageError("--l needs nonnegative integers")
        unknown = set(self.references) - set(REFERENCES)
        if unknown:
            raise UsageError(f"unknown references: {sorted(unknown)}")

    def grid(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.lambda_min, self.lambda_max, self.points)
        return np.geomspace(self.lambda_min, self.lambda_max, self.points)


def sweep_table(spec: SweepSpec) -> tuple[list[str], np.ndarray]:
    lams = spec.grid()
    delta = _delta(spec.delta_sq)
    header = ["lambda"]
    cols = [lams]
    for l in spec.l_values:
        sched = fixed_point_phases(l, delta)
        header.append(f"fp_sim_l{l}")
        cols.append(prob_grid(sched, lams))
        if "closed_form" in spec.references:
            header.append(f"fp_closed_l{l}")
            cols.append(np.array([success_prob_closed(sched.L, delta, x) for x in lams]))
        if "grover" in spec.references:
            header.append(f"grover_l{l}")
            cols.append(np.array([grover_reference(l, x) for x in lams]))
    if "pi3" in spec.references:
        for k in spec.pi3_levels:
            header.append(f"pi3_k{k}")
            cols.append(np.array([pi3_reference(k, x)[0] for x in lams]))
    return header, np.column_stack(cols)


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        delta_sq=args.delta_sq,
        l_values=tuple(args.l),
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        points=args.points,
        spacing=args.spacing,
        references=tuple(args.references),
        pi3_levels=tuple(args.pi3_k),
    )
    header, table = sweep_table(spec)
    if args.format == "json":
        text = json.dumps(
            {"schema": SCHEMA, "columns": header, "rows": table.tolist()}, indent=2
        ) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        for row in table:
            w.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    if args.out is None:
        sys.stdout.write(text)
        return 0
    out = Path(args.out)
    meta = {
        "schema": SCHEMA,
        "version": __version__,
        "delta_sq": spec.delta_sq,
        "l_values": list(spec.l_values),
        "lambda_grid": {
            "min": spec.lambda_min,
            "max": spec.lambda_max,
            "points": spec.points,
            "spacing": spec.spacing,
        },
        "references": list(spec.references),
        "pi3_levels": list(spec.pi3_levels),
        "columns": header,
    }
    try:
        out.write_text(text, newline="")
        Path(str(out) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


def cmd_simulate(args) -> int:
    if not 1 <= args.n <= MAX_QUBITS:
        raise UsageError(f"--n must be in [1, {MAX_QUBITS}]")
    dim = 1 << args.n
    if args.marked is not None:
        marked = args.marked
    elif args.num_marked is not None:
        if not 1 <= args.num_marked <= dim:
            raise UsageError(f"--num-marked must be in [1, {dim}]")
        marked = list(range(args.num_marked))
    else:
        raise UsageError("give --marked or --num-marked")
    if not marked or any(not 0 <= i < dim for i in marked):
        raise UsageError(f"marked indices must lie in [0, {dim})")
    if args.l < 0:
        raise UsageError("--l must be nonnegative")
    if args.dump and args.engine == "2d":
        raise UsageError("--dump needs the direct or circuit engine")
    delta = _delta(args.delta_sq)
    inst = ProblemInstance.uniform(args.n, marked)
    sched = fixed_point_phases(args.l, delta, args.mode)
    lam = inst.lam
    leak = None
    if args.engine == "2d":
        st = apply_sequence(sched, SearchParams(lam, delta))
        p_sim = st.p_target if sched.mode == AMPLIFY else st.p_avoid
    else:
        res = run(sched, inst, args.engine)
        p_sim = res.p
        if args.engine == "circuit":
            leak = res.max_leak
        if args.dump:
            try:
                dump_state(args.dump, res.state, args.n)
            except OSError as exc:
                print(f"error: cannot write {args.dump}: {exc}", file=sys.stderr)
                return EXIT_IO
    p_closed = closed_for_mode(sched, lam)
    report = {
        "lambda": lam,
        "L": sched.L,
        "queries": sched.queries,
        "mode": sched.mode,
        "engine": args.engine,
        "p_sim": p_sim,
        "p_closed": p_closed,
        "abs_diff": abs(p_sim - p_closed),
        "ancilla_leak": leak,
    }
    if args.format == "json":
        _emit_json(report)
    else:
        for key, val in report.items():
            if val is None:
                continue
            print(f"{key:>12}: {_fmt(val) if isinstance(val, float) else val}")
    return 0


def cmd_verify(args) -> int:
    from fpsearch.verify import run_all

    results = run_all("full" if args.full else "quick")
    failed = [r for r in results if not r.passed]
    if args.format == "json":
        _emit_json({
            "level": "full" if args.full else "quick",
            "suites": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            "passed": not failed,
        })
    else:
        for r in results:
            print(r.line())
        print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    if failed:
        print("failing: " + ", ".join(r.name for r in failed), file=sys.stderr)
        return EXIT_VERIFY
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpsearch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", help="print a phase schedule")
    p.add_argument("--l", type=int, required=True, help="number of Grover iterates")
    p.add_argument("--delta-sq", type=float, required=True, help="failure bound delta^2")
    p.add_argument("--mode", choices=MODES, default=AMPLIFY)
    p.add_argument("--nest", type=_int_list, default=None,
                   help="further components nested around --l, e.g. '1,2'")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("minl", help="smallest odd L meeting the bound for lambda >= lambda0")
    p.add_argument("--delta-sq", type=float, required=True)
    p.add_argument("--lambda0", type=float, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_minl)

    p = sub.add_parser("sweep", help="success probability curves over a lambda grid")
    p.add_argument("--delta-sq", type=float, required=True)
    p.add_argument("--l", type=_int_list, required=True, help="comma-separated iterate counts")
    p.add_argument("--lambda-min", type=float, default=1e-3)
    p.add_argument("--lambda-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spacing", choices=("linear", "log"), default="log")
    p.add_argument("--references", type=lambda s: [t for t in s.split(",") if t],
                   default=list(REFERENCES))
    p.add_argument("--pi3-k", type=_int_list, default=[1, 2])
    p.add_argument("--out", default=None, help="CSV path (a .meta.json sidecar is written next to it)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="simulate one sequence on a search instance")
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--marked", type=_int_list)
    group.add_argument("--num-marked", type=int)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--delta-sq", type=float, default=1.0)
    p.add_argument("--engine", choices=("2d", "direct", "circuit"), default="direct")
    p.add_argument("--mode", choices=MODES, default=AMPLIFY)
    p.add_argument("--dump", default=None, help="write the final register state here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant suites")
    level = p.add_mutually_exclusive_group()
    level.add_argument("--quick", action="store_true", default=True)
    level.add_argument("--full", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2


if __name__ == "__main__":
    sys.exit(main())
