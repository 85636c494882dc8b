"""Command-line front end.

Subcommands:

* ``run-perm``     relabeling protocol, one record per parity outcome
* ``run-code``     generator protocol, one record per syndrome
* ``verify``       cross-check the two engines (single instance or random batch)
* ``sweep``        recurrence rounds over a grid of Werner inputs
* ``oracle-check`` dense-simulation comparison suites

Exit codes: 0 success, 1 configuration/validation error, 2 mismatch found.
All probabilities are printed with 15 significant digits; identical
configuration and seed produce byte-identical output.  Relative ``--output``
paths resolve against ``BELLDISTILL_OUTDIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import crosscheck, equivalence, permutation, stabilizer
from .gf2 import BinaryMatrix, BinaryVector
from .permutation import PermutationProtocol
from .stabilizer import StabilizerProtocol, parse_pauli_string, to_pauli_string
from .states import BellDiagonalState, PairDistribution, werner


class CliError(Exception):
    """Configuration or validation problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _round15(x: float) -> float:
    """Clamp a float to 15 significant digits for stable printing."""
    return float(format(float(x), ".15g"))


def _clean(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return _round15(value)
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [_clean(float(v)) for v in value]
    raise TypeError(f"unserializable value of type {type(value)!r}")


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".15g")
    if isinstance(value, list):
        return ";".join(_format_cell(v) for v in value)
    return str(value)


def _render(command: str, records: list[dict], columns: list[str],
            fmt: str, summary: dict | None = None) -> str:
    if fmt == "json":
        body = {"command": command, "records": _clean(records)}
        if summary is not None:
            body["summary"] = _clean(summary)
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_format_cell(_clean(rec.get(c))) for c in columns])
        return buf.getvalue()
    raise CliError(f"unknown output format {fmt!r}")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    if not path.is_absolute():
        base = os.environ.get("BELLDISTILL_OUTDIR")
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

_CONFIG_KEYS = ("werner", "pair", "state_file", "protocol_file", "generators",
                "matrix", "offset", "m", "threshold", "format", "output",
                "seed", "rounds", "grid", "random", "sizes", "count")


def _add_io_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file supplying any of the other options")
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help="output format (default json)")
    p.add_argument("--output", "-o", default=None,
                   help="output file (default stdout); relative paths use "
                        "BELLDISTILL_OUTDIR when set")


def _add_input_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--werner", type=float, default=None,
                   help="build the input from identical Werner pairs of this fidelity")
    p.add_argument("--pair", default=None,
                   help="four comma-separated pair weights (labels 00,01,10,11)")
    p.add_argument("--state-file", default=None,
                   help="JSON file {n, probs} with the full input distribution")


def _add_protocol_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol-file", default=None,
                   help="JSON protocol: {n,m,A,b} with bit-string rows, or "
                        "{n,m,generators} with Pauli strings")
    p.add_argument("--generators", default=None,
                   help="comma-separated Pauli strings, e.g. ZZ or ZZII,XXII")
    p.add_argument("--matrix", default=None,
                   help="comma-separated bit-string rows of a symplectic matrix")
    p.add_argument("--offset", default=None,
                   help="bit-string relabeling offset (default all zero)")
    p.add_argument("-m", type=int, default=None,
                   help="number of surviving pairs (required with --matrix)")
    p.add_argument("--threshold", type=float, default=None,
                   help="acceptance threshold (default: input fidelity)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="belldistill",
                     description="Exact simulation and cross-verification of "
                                 "entanglement distillation protocols on "
                                 "Bell-diagonal states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run-perm", help="run the relabeling protocol")
    _add_protocol_options(p)
    _add_input_options(p)
    _add_io_options(p)

    p = sub.add_parser("run-code", help="run the generator-measurement protocol")
    _add_protocol_options(p)
    _add_input_options(p)
    _add_io_options(p)

    p = sub.add_parser("verify", help="cross-check the two engines")
    _add_protocol_options(p)
    _add_input_options(p)
    _add_io_options(p)
    p.add_argument("--random", type=int, default=None,
                   help="verify this many random instances instead")
    p.add_argument("--sizes", default=None,
                   help="comma-separated pair counts for --random (default 2,3,4)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")

    p = sub.add_parser("sweep", help="recurrence rounds over a Werner-fidelity grid")
    _add_protocol_options(p)
    _add_io_options(p)
    p.add_argument("--grid", default=None,
                   help="fidelity grid: lo:hi:step or comma-separated values")
    p.add_argument("--rounds", type=int, default=None, help="rounds per grid point")

    p = sub.add_parser("oracle-check", help="dense-simulation comparison suites")
    _add_io_options(p)
    p.add_argument("--sizes", default=None,
                   help="comma-separated pair counts (default 2,3)")
    p.add_argument("--count", type=int, default=None,
                   help="random cases per suite (default 50)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    config_path = getattr(args, "config", None)
    if not config_path:
        return
    try:
        data = json.loads(Path(config_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {config_path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError("config file must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if attr not in _CONFIG_KEYS:
            raise CliError(f"unknown config key {key!r}")
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)


# ---------------------------------------------------------------------------
# Protocol and state loading
# ---------------------------------------------------------------------------

def _load_protocol(args) -> PermutationProtocol | StabilizerProtocol:
    sources = [s for s in (args.protocol_file, args.generators, args.matrix)
               if s is not None]
    if len(sources) != 1:
        raise CliError("provide exactly one protocol: --protocol-file, "
                       "--generators, or --matrix")
    if args.protocol_file is not None:
        try:
            data = json.loads(Path(args.protocol_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read protocol {args.protocol_file}: {exc}") from exc
        if "generators" in data:
            gens = tuple(parse_pauli_string(s) for s in data["generators"])
            return StabilizerProtocol(int(data["n"]), int(data["m"]), gens)
        matrix = BinaryMatrix.from_strings(data["A"])
        n = matrix.ncols // 2
        offset = BinaryVector.from_string(data.get("b") or "0" * 2 * n)
        return PermutationProtocol(n, int(data["m"]), matrix, offset)
    if args.generators is not None:
        strings = [s.strip() for s in args.generators.split(",") if s.strip()]
        gens = tuple(parse_pauli_string(s) for s in strings)
        if not gens:
            raise CliError("empty generator list")
        n = gens[0].pair_count
        m = args.m if args.m is not None else n - len(gens)
        return StabilizerProtocol(n, m, gens)
    rows = [s.strip() for s in args.matrix.split(",") if s.strip()]
    matrix = BinaryMatrix.from_strings(rows)
    if matrix.ncols % 2 or matrix.nrows != matrix.ncols:
        raise CliError("matrix must be square with even dimension 2n")
    n = matrix.ncols // 2
    if args.m is None:
        raise CliError("-m is required with an inline --matrix")
    offset = BinaryVector.from_string(args.offset) if args.offset \
        else BinaryVector.zeros(2 * n)
    return PermutationProtocol(n, args.m, matrix, offset)


def _as_permutation(proto) -> PermutationProtocol:
    if isinstance(proto, PermutationProtocol):
        return proto
    return equivalence.permutation_from_stabilizer(proto)


def _as_stabilizer(proto) -> StabilizerProtocol:
    if isinstance(proto, StabilizerProtocol):
        return proto
    return equivalence.stabilizer_from_permutation(proto)


def _load_state(args, n: int) -> BellDiagonalState:
    sources = [s for s in (args.werner, args.pair, args.state_file)
               if s is not None]
    if len(sources) != 1:
        raise CliError("provide exactly one input: --werner, --pair, or --state-file")
    if args.werner is not None:
        return BellDiagonalState.from_pairs([werner(args.werner)] * n)
    if args.pair is not None:
        parts = [float(x) for x in str(args.pair).split(",")]
        if len(parts) != 4:
            raise CliError("--pair needs exactly four comma-separated weights")
        return BellDiagonalState.from_pairs([PairDistribution(tuple(parts))] * n)
    try:
        data = json.loads(Path(args.state_file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read state {args.state_file}: {exc}") from exc
    state = BellDiagonalState.from_dict(data)
    if state.n != n:
        raise CliError(f"state has {state.n} pairs but the protocol needs {n}")
    return state


def _parse_sizes(text: str | None, default: tuple[int, ...]) -> tuple[int, ...]:
    if text is None:
        return default
    try:
        sizes = tuple(int(x) for x in str(text).split(","))
    except ValueError as exc:
        raise CliError(f"bad size list {text!r}") from exc
    if not sizes:
        raise CliError("empty size list")
    return sizes


def _parse_grid(text: str | None) -> list[float]:
    if text is None:
        raise CliError("sweep needs --grid")
    text = str(text)
    if ":" in text:
        try:
            lo, hi, step = (float(x) for x in text.split(":"))
        except ValueError as exc:
            raise CliError(f"bad grid {text!r}, expected lo:hi:step") from exc
        if step <= 0 or hi < lo:
            raise CliError("grid needs step > 0 and hi >= lo")
        points = int(round((hi - lo) / step)) + 1
        return [round(lo + i * step, 12) for i in range(points)]
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise CliError(f"bad grid {text!r}") from exc


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_run_perm(args) -> int:
    proto = _as_permutation(_load_protocol(args))
    state = _load_state(args, proto.n)
    outcomes = permutation.run(state, proto, args.threshold)
    records = [
        {
            "t": str(o.t),
            "prob": o.prob,
            "fidelity": o.fidelity,
            "unnormalized_fidelity": o.unnormalized_fidelity,
            "correction": str(o.correction),
            "accepted": o.accepted,
            "output": [float(p) for p in o.output.probs],
        }
        for o in outcomes
    ]
    columns = ["t", "prob", "fidelity", "unnormalized_fidelity",
               "correction", "accepted", "output"]
    _emit(_render("run-perm", records, columns, args.format), args.output)
    return 0


def _cmd_run_code(args) -> int:
    proto = _as_stabilizer(_load_protocol(args))
    state = _load_state(args, proto.n)
    branches = stabilizer.run(state, proto, args.threshold)
    records = [
        {
            "s": str(b.s),
            "prob": b.prob,
            "fidelity": b.fidelity,
            "unnormalized_fidelity": b.unnormalized_fidelity,
            "v": str(b.v),
            "u": str(b.u),
            "recovery": to_pauli_string(b.u),
            "accepted": b.accepted,
            "output": [float(p) for p in b.output.probs],
        }
        for b in branches
    ]
    columns = ["s", "prob", "fidelity", "unnormalized_fidelity", "v", "u",
               "recovery", "accepted", "output"]
    _emit(_render("run-code", records, columns, args.format), args.output)
    return 0


def _cmd_verify(args) -> int:
    if args.random is not None:
        rng = np.random.default_rng(args.seed if args.seed is not None else 0)
        sizes = _parse_sizes(args.sizes, (2, 3, 4))
        records = []
        for index in range(args.random):
            state, proto = equivalence.random_instance(rng, sizes)
            report = equivalence.verify_equivalence(state, proto, args.threshold)
            records.append({
                "instance": index,
                "n": report.n,
                "m": report.m,
                "generators": [to_pauli_string(g) for g in proto.generators],
                "passed": report.passed,
                "subspaces_match": report.subspaces_match,
                "coset_match": report.coset_match,
                "max_discrepancy": report.max_discrepancy,
            })
        failed = sum(1 for r in records if not r["passed"])
        summary = {"instances": len(records), "failed": failed,
                   "all_passed": failed == 0}
        columns = ["instance", "n", "m", "generators", "passed",
                   "subspaces_match", "coset_match", "max_discrepancy"]
        _emit(_render("verify", records, columns, args.format, summary),
              args.output)
        return 0 if failed == 0 else 2

    proto = _as_stabilizer(_load_protocol(args))
    state = _load_state(args, proto.n)
    report = equivalence.verify_equivalence(state, proto, args.threshold)
    data = report.to_dict()
    records = data.pop("branches")
    columns = ["t", "prob_perm", "prob_code", "fidelity_perm",
               "fidelity_code", "output_max_diff", "coset_match"]
    _emit(_render("verify", records, columns, args.format, summary=data),
          args.output)
    return 0 if report.passed else 2


def _cmd_sweep(args) -> int:
    proto = _as_permutation(_load_protocol(args))
    grid = _parse_grid(args.grid)
    rounds = args.rounds if args.rounds is not None else 1
    if rounds < 1:
        raise CliError("--rounds must be at least 1")
    records = []
    for f_in in grid:
        reports = permutation.recurrence_sweep(
            werner(f_in), proto, rounds, args.threshold)
        for rep in reports:
            records.append({
                "f_in": f_in,
                "round": rep.round_index,
                "f_out": rep.fidelity,
                "yield": rep.cumulative_yield,
                "accept_prob": rep.accept_prob,
                "accepted": rep.accepted,
            })
    columns = ["f_in", "round", "f_out", "yield", "accept_prob", "accepted"]
    _emit(_render("sweep", records, columns, args.format), args.output)
    return 0


def _cmd_oracle_check(args) -> int:
    sizes = _parse_sizes(args.sizes, (2, 3))
    if max(sizes) > 4:
        raise CliError("oracle size cap exceeded: pair counts above 4 are not "
                       "supported by the dense oracle")
    count = args.count if args.count is not None else 50
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    results = crosscheck.run_all(sizes, count, rng)
    records = [
        {
            "check": r.name,
            "cases": r.cases,
            "max_error": r.max_error,
            "tolerance": r.tolerance,
            "passed": r.passed,
        }
        for r in results
    ]
    all_passed = all(r.passed for r in results)
    summary = {"all_passed": all_passed}
    columns = ["check", "cases", "max_error", "tolerance", "passed"]
    _emit(_render("oracle-check", records, columns, args.format, summary),
          args.output)
    return 0 if all_passed else 2


_DISPATCH = {
    "run-perm": _cmd_run_perm,
    "run-code": _cmd_run_code,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "oracle-check": _cmd_oracle_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        if getattr(args, "format", None) is None:
            args.format = "json"
        return _DISPATCH[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
