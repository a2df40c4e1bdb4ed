"""Command line entry point.

Subcommands: ``teleport``, ``check``, ``entangle``, ``sweep``, ``version``.
Exit codes: 0 success, 1 malformed input, 2 condition violated under
``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__, conditions, entanglement, nmr
from .description import DescriptionError, ResolvedState, parse_complex, parse_family_flag, resolve
from .protocols import OUTSIDE, PROB_EPS, Protocol, haar_input_for_seed, run_monte_carlo, run_protocol_exact
from .states import WParams, ap_family, make_input_qubit, make_w_state, proposed_family

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for condition violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wteleport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, state=True):
        if state:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--family", help="family shorthand, e.g. n=1, m=99, nmr_ap:beta=0.3")
            src.add_argument("--state", help="state description JSON (inline or @path)")
        p.add_argument("--tolerance", type=_positive_float, default=conditions.DEFAULT_TOLERANCE)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("teleport", help="run a protocol exactly or by sampling")
    common(p)
    p.add_argument("--protocol", choices=[x.value for x in Protocol], required=True)
    p.add_argument("--input", default="haar", help='"haar" or amplitudes "alpha,beta"')
    p.add_argument("--trials", type=_nonnegative_int, default=0, help="0 runs the exact simulation")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true", help="exit 2 if the protocol condition fails")

    p = sub.add_parser("check", help="teleportability verdicts for a state")
    common(p)
    p.add_argument("--protocol", choices=[x.value for x in Protocol], default=None)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("entangle", help="entanglement report for a state")
    common(p)

    p = sub.add_parser("sweep", help="tabulate a family over a parameter grid")
    common(p, state=False)
    p.add_argument("--family", required=True, choices=("n", "m", "nmr_ap", "nmr_proposed"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    sub.add_parser("version", help="print version information")
    return parser


# --- helpers -----------------------------------------------------------------


def _load_state(args) -> ResolvedState:
    if args.family is not None:
        desc = parse_family_flag(args.family)
    else:
        text = args.state
        if text.startswith("@"):
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        try:
            desc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DescriptionError(f"--state is not valid JSON: {exc}") from None
    return resolve(desc)


def _parse_input(text: str, seed: int):
    if text.strip().lower() == "haar":
        return "haar", haar_input_for_seed(seed)
    parts = [s for s in text.split(",") if s.strip()]
    if len(parts) != 2:
        raise UsageError('--input must be "haar" or "alpha,beta"')
    try:
        return "fixed", make_input_qubit(parse_complex(parts[0]), parse_complex(parts[1]))
    except ValueError as exc:
        raise UsageError(f"bad --input: {exc}") from None


def _envelope(command: str, args, **body) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command, "seed": args.seed,
           "tolerance": args.tolerance}
    out.update(body)
    return out


def _cval(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(row.get(k)) for k in header])
    return buf.getvalue()


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            if v and isinstance(v[0], (list, tuple, dict)):
                out[key] = json.dumps(v, separators=(",", ":"))
            else:
                for i, x in enumerate(v):
                    out[f"{key}.{i}"] = x
        else:
            out[key] = v
    return out


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(args, payload: dict, rows: list[dict] | None, default_format: str = "json") -> None:
    fmt = args.format or default_format
    if fmt == "csv":
        text = to_csv(rows if rows is not None else [_flatten(payload)])
    else:
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------


def cmd_teleport(args) -> int:
    resolved = _load_state(args)
    params = resolved.require_params()
    protocol = Protocol(args.protocol)
    verdicts = conditions.check_all(params, args.tolerance)
    verdict = verdicts[protocol.value]
    mode, inp = _parse_input(args.input, args.seed)
    body = {"protocol": protocol.value, "state": resolved.to_dict(), "condition": verdict.to_dict()}

    if args.trials == 0:
        # completion outcomes outside the protocol's basis are listed only if they can occur
        reports = [r for r in run_protocol_exact(protocol, params, inp)
                   if not (r.outcome_label.startswith(OUTSIDE) and r.outcome_probability <= PROB_EPS)]
        body["input"] = {"mode": mode, "amplitudes": [_cval(inp.alpha), _cval(inp.beta)]}
        body["records"] = [r.to_dict() for r in reports]
        rows = [{k: v for k, v in r.to_dict().items() if k not in ("output_state", "stranded_state")}
                for r in reports]
    else:
        sampler = "haar" if mode == "haar" else inp
        summary = run_monte_carlo(protocol, params, sampler, args.trials, args.seed, workers=args.workers)
        body["input"] = {"mode": mode, "amplitudes": None if mode == "haar" else
                         [_cval(inp.alpha), _cval(inp.beta)]}
        body["summary"] = summary.to_dict()
        rows = [{"kind": "outcome", **o} for o in body["summary"]["outcomes"]]
        rows += [{"kind": "branch", **b} for b in body["summary"]["branches"]]
    _emit(args, _envelope("teleport", args, **body), rows)
    if args.strict and not verdict.satisfied:
        return EXIT_VIOLATION
    return EXIT_OK


def _closed_forms(params: WParams) -> dict:
    return {
        "concurrences": entanglement.concurrence_closed_form(params).__dict__,
        "negativities": entanglement.negativity_closed_form(params).__dict__,
        "pi_abc": entanglement.three_pi_w_closed_form(params),
    }


def cmd_check(args) -> int:
    resolved = _load_state(args)
    params = resolved.require_params()
    verdicts = conditions.check_all(params, args.tolerance)
    point = conditions.geometry_point(params)
    body = {
        "state": resolved.to_dict(),
        "verdicts": {k: verdicts[k].to_dict() if k in verdicts else None
                     for k in ("ap", "proposed", "ap_concurrence", "proposed_concurrence")},
        "concurrences": entanglement.concurrence_closed_form(params).__dict__,
        "o_expectations": list(entanglement.o_operator_expectations(make_w_state(params.as_basis("canonical")))),
        "geometry": {"u": point.u, "v": point.v, **conditions.perimeter_comparison().to_dict()},
    }
    _emit(args, _envelope("check", args, **body), None)
    if args.strict:
        if args.protocol is not None:
            ok = verdicts[args.protocol].satisfied
        else:
            ok = verdicts["ap"].satisfied or verdicts["proposed"].satisfied
        if not ok:
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_entangle(args) -> int:
    resolved = _load_state(args)
    report = entanglement.entanglement_report(resolved.state)
    body = {
        "state": resolved.to_dict(),
        "report": report.to_dict(),
        "closed_form": None if resolved.params is None else _closed_forms(resolved.params),
    }
    _emit(args, _envelope("entangle", args, **body), None)
    return EXIT_OK


def _sweep_params(family: str, value: float) -> WParams:
    if family == "n":
        return ap_family(value)
    if family == "m":
        return proposed_family(value)
    from .states import w_params_of

    state = nmr.nmr_ap_family(value) if family == "nmr_ap" else nmr.nmr_proposed_family(value)
    return w_params_of(state)


def sweep_rows(family: str, start: float, stop: float, steps: int, tol: float) -> list[dict]:
    if steps < 1:
        raise UsageError("--steps must be at least 1")
    grid = np.linspace(start, stop, steps) if steps > 1 else np.array([start])
    rows = []
    for value in grid:
        p = _sweep_params(family, float(value))
        ap = conditions.check_ap_condition(p, tol)
        pr = conditions.check_proposed_condition(p, tol)
        c = entanglement.concurrence_closed_form(p)
        state = make_w_state(p)
        n = entanglement.pairwise_negativities(state)
        rows.append({
            "family": family,
            "parameter": float(value),
            "abs_lambda0": p.moduli[0],
            "abs_lambda2": p.moduli[1],
            "abs_lambda3": p.moduli[2],
            "ap_satisfied": ap.satisfied,
            "ap_residual": ap.residual,
            "ap_geometry": ap.geometry.value,
            "proposed_satisfied": pr.satisfied,
            "proposed_residual": pr.residual,
            "proposed_geometry": pr.geometry.value,
            "success_probability": pr.success_probability,
            "cab": c.cab,
            "cbc": c.cbc,
            "cac": c.cac,
            "nab": n.nab,
            "nbc": n.nbc,
            "nca": n.nca,
            "pi_abc": entanglement.three_pi(state).pi_abc,
        })
    return rows


def cmd_sweep(args) -> int:
    rows = sweep_rows(args.family, args.start, args.stop, args.steps, args.tolerance)
    body = {"family": args.family, "grid": {"start": args.start, "stop": args.stop, "steps": args.steps},
            "rows": rows}
    _emit(args, _envelope("sweep", args, **body), rows, default_format="csv")
    return EXIT_OK


def cmd_version(args) -> int:
    sys.stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, "command": "version",
                                 "version": __version__}) + "\n")
    return EXIT_OK


COMMANDS = {
    "teleport": cmd_teleport,
    "check": cmd_check,
    "entangle": cmd_entangle,
    "sweep": cmd_sweep,
    "version": cmd_version,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DescriptionError, UsageError, ValueError, OSError) as exc:
        print(f"wteleport {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
