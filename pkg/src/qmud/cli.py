"""Command-line front end: scenario parsing, experiments, CSV emission.

Subcommands:

* ``run``        one Monte Carlo experiment from a scenario JSON
* ``sweep``      the same experiment across one swept parameter
* ``povm-table`` analytic outcome probabilities for a gain grid

Exit codes: 0 success, 1 config or validation problems, 2 runtime failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from .config import QuantizerSpec, Scenario, default_amplitude
from .errors import (DomainError, IoError, ParseError, QmudError,
                     UnknownParameter, ValidationError)
from .harness import ALL_DETECTORS, MetricsReport, run_trials, sweep
from .povm import povm_table_rows

RESULTS_HEADER = ("scenario_id,detector,param_name,param_value,trials,bit_errors,ber,"
                  "correct,no_message,ambiguous,inconclusive,coverage_miss,mean_reps,seed")

_REQUIRED_KEYS = {"K", "PG", "signatures", "energies", "gains", "noise_sigma",
                  "N_ch", "gamma", "reps_max", "seed"}
_OPTIONAL_KEYS = {"amplitude_A", "delays"}


def parse_config(text: str) -> Scenario:
    """Build a validated Scenario from scenario JSON text.

    Signatures are re-normalized to unit norm, with a warning when the
    input norm is off by more than 1e-6.  Unknown keys are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("config must be a single JSON object")

    unknown = set(doc) - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(doc)
    if missing:
        raise ValidationError(f"missing config keys: {sorted(missing)}")

    signatures = doc["signatures"]
    if not isinstance(signatures, list) or len(signatures) != doc["K"]:
        raise ValidationError(f"signatures: expected {doc['K']} sequences")
    normalized = []
    for k, sig in enumerate(signatures):
        if not isinstance(sig, list) or len(sig) != doc["PG"]:
            raise ValidationError(f"signatures[{k}]: expected {doc['PG']} chips")
        try:
            norm = math.sqrt(sum(float(c) ** 2 for c in sig))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"signatures[{k}]: non-numeric chip") from exc
        if norm == 0:
            raise ValidationError(f"signatures[{k}]: zero vector cannot be normalized")
        if abs(norm - 1.0) > 1e-6:
            warnings.warn(f"signatures[{k}]: norm {norm:.6g} re-normalized to 1")
        normalized.append(tuple(float(c) / norm for c in sig))

    try:
        amplitude = doc.get("amplitude_A")
        if amplitude is None:
            amplitude = default_amplitude(normalized, doc["energies"], doc["gains"])
        quantizer = QuantizerSpec(n_ch=int(doc["N_ch"]), amplitude=float(amplitude))
        return Scenario(
            K=int(doc["K"]),
            PG=int(doc["PG"]),
            signatures=tuple(normalized),
            energies=tuple(doc["energies"]),
            gains=tuple(doc["gains"]),
            noise_sigma=float(doc["noise_sigma"]),
            quantizer=quantizer,
            gamma=int(doc["gamma"]),
            delays=tuple(doc.get("delays", [0])),
            reps_max=int(doc["reps_max"]),
            seed=int(doc["seed"]),
        )
    except ValidationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"invalid config value: {exc}") from exc


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def _report_rows(report: MetricsReport) -> list[str]:
    decided = report.trials * report.users
    rows = []
    common = (report.scenario_id, report.param_name or "", _fmt(report.param_value),
              str(report.trials))
    for kind in ALL_DETECTORS:
        if kind not in report.detector_bit_errors:
            continue
        errors = report.detector_bit_errors[kind]
        rows.append(",".join([
            common[0], kind.value, common[1], common[2], common[3],
            str(errors), _fmt(errors / decided), str(decided - errors),
            "0", "0", "0", "0", "", str(report.seed),
        ]))
    if report.qmud is not None:
        q = report.qmud
        rows.append(",".join([
            common[0], "qmud", common[1], common[2], common[3],
            str(q.false_decisions), _fmt(q.false_decisions / decided), str(q.correct),
            str(q.no_message), str(q.ambiguous), str(q.inconclusive),
            str(q.coverage_miss), _fmt(q.mean_reps), str(report.seed),
        ]))
    return rows


def write_csv(reports, out_path) -> None:
    """Emit the frozen results schema, one detector row set per report."""
    lines = [RESULTS_HEADER]
    for report in reports:
        lines.extend(_report_rows(report))
    try:
        with open(out_path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {out_path}: {exc}") from exc


def write_povm_table(n_s_values, betas, out_path) -> None:
    rows = povm_table_rows(n_s_values, betas)
    lines = ["n_s,beta,alpha,state,p1,p2,p3"]
    for n_s, beta, alpha, label, p1, p2, p3 in rows:
        lines.append(",".join([str(n_s), _fmt(beta), _fmt(alpha), label,
                               _fmt(p1), _fmt(p2), _fmt(p3)]))
    try:
        with open(out_path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {out_path}: {exc}") from exc


def _load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _parse_number_list(raw: str, caster, flag: str):
    try:
        return [caster(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"{flag}: expected a comma-separated number list") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmud", description="DS-CDMA multi-user detection simulator")
    sub = parser.add_subparsers(dest="command")

    run_p = sub.add_parser("run", help="run one Monte Carlo experiment")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", required=True)
    run_p.add_argument("--trials", type=int, default=1000)
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")

    sweep_p = sub.add_parser("sweep", help="sweep one scenario parameter")
    sweep_p.add_argument("--config", required=True)
    sweep_p.add_argument("--out", required=True)
    sweep_p.add_argument("--param", required=True)
    sweep_p.add_argument("--values", required=True)
    sweep_p.add_argument("--trials", type=int, default=1000)
    sweep_p.add_argument("--seed", type=int, default=None)

    tab_p = sub.add_parser("povm-table", help="analytic outcome probabilities")
    tab_p.add_argument("--ns", required=True, help="comma-separated populations")
    tab_p.add_argument("--beta", required=True, help="comma-separated reject gains")
    tab_p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        if args.command == "run":
            scenario = _load_scenario(args.config)
            seed = args.seed if args.seed is not None else scenario.seed
            report = run_trials(scenario, trials=args.trials, master_seed=seed)
            write_csv([report], args.out)
            print(f"wrote {args.out}: scenario {report.scenario_id}, "
                  f"{args.trials} trials, seed {seed}")
        elif args.command == "sweep":
            scenario = _load_scenario(args.config)
            seed = args.seed if args.seed is not None else scenario.seed
            values = _parse_number_list(args.values, float, "--values")
            reports = sweep(scenario, args.param, values, args.trials, seed)
            write_csv(reports, args.out)
            print(f"wrote {args.out}: {len(reports)} sweep points over {args.param}")
        else:
            n_s_values = _parse_number_list(args.ns, int, "--ns")
            betas = _parse_number_list(args.beta, float, "--beta")
            write_povm_table(n_s_values, betas, args.out)
            print(f"wrote {args.out}: {len(n_s_values) * len(betas) * 2} rows")
    except (ParseError, ValidationError, UnknownParameter, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QmudError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
