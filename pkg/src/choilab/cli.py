"""Command-line front end.

Commands: verify, choi, classify, mix, reproduce.  Global flags: --format
{human,json}, --tolerance <float> (overrides the default positivity
threshold; echoed in the report), --out <path>.  Exit codes: 0 pass,
1 claim failure, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .channels import choi, mix, verify_cptp
from .codec import (
    channel_from_dict,
    channel_to_dict,
    dumps,
    load_path,
    report_to_dict,
    state_from_dict,
    state_to_dict,
)
from .entanglement import (
    all_cut_indices,
    ghz_diagonal_coefficients,
    index_to_cut,
    npt_criterion,
    pairwise_distillability,
    ppt_check,
)
from .errors import ChoilabError, ParseError
from .nonadditivity import full_report
from .states import PartySystem

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _emit(report: dict, fmt: str, out_path: str | None) -> None:
    text = dumps(report)
    if fmt == "json":
        sys.stdout.write(text)
    else:
        _render_human(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _render_human(report: dict) -> None:
    print(f"choilab {report['version']} :: {report['command']}")
    if report.get("tolerance") is not None:
        print(f"positivity threshold: -{report['tolerance']:g}")
    for entry in report["entries"]:
        status = entry.get("status", "info")
        line = f"  [{status:>4}] {entry['id']:<34} {entry.get('computed', '')}"
        print(line)
    print(f"overall: {report['overall']}")


def _base_report(command: str, tolerance: float) -> dict:
    return {
        "version": __version__,
        "command": command,
        "tolerance": tolerance,
        "entries": [],
        "overall": "pass",
    }


def _cmd_verify(args) -> int:
    ch = channel_from_dict(load_path(args.channel))
    rep = verify_cptp(ch, psd_threshold=-args.tolerance)
    report = _base_report("verify", args.tolerance)
    report["entries"] = [
        {
            "id": "cptp-completeness",
            "status": "pass" if rep.trace_preserving_defect <= 1e-10 else "fail",
            "computed": f"defect = {rep.trace_preserving_defect:.3e}",
        },
        {
            "id": "cptp-choi-positive",
            "status": "pass" if rep.choi_min_eigenvalue >= -args.tolerance else "fail",
            "computed": f"choi min eigenvalue = {rep.choi_min_eigenvalue:.3e}",
        },
    ]
    report["overall"] = "pass" if rep.passed else "fail"
    _emit(report, args.format, args.out)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _reference_for_order(ch, order: list[str]) -> PartySystem:
    out_labels = set(ch.output_system.labels)
    ref_labels = tuple(l for l in order if l not in out_labels)
    d_in = ch.input_system.total_dim
    if len(ref_labels) == len(ch.input_system.dims):
        return PartySystem(ref_labels, ch.input_system.dims)
    if d_in == 2 ** len(ref_labels):
        return PartySystem(ref_labels, (2,) * len(ref_labels))
    raise ParseError(
        f"cannot split input dimension {d_in} over reference labels {ref_labels}"
    )


def _cmd_choi(args) -> int:
    ch = channel_from_dict(load_path(args.channel))
    order = [s.strip() for s in args.order.split(",")] if args.order else None
    if order:
        reference = _reference_for_order(ch, order)
        state = choi(ch, reference=reference, order=order)
    else:
        state = choi(ch)
    low = float(np.linalg.eigvalsh(state.matrix)[0])
    tr = float(np.real(np.trace(state.matrix)))
    report = _base_report("choi", args.tolerance)
    report["entries"] = [
        {
            "id": "choi-trace",
            "status": "pass" if abs(tr - 1) <= 1e-10 else "fail",
            "computed": f"trace = {tr:.15f}",
        },
        {
            "id": "choi-positive",
            "status": "pass" if low >= -args.tolerance else "fail",
            "computed": f"min eigenvalue = {low:.3e}",
        },
    ]
    ok = all(e["status"] == "pass" for e in report["entries"])
    report["overall"] = "pass" if ok else "fail"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(state_to_dict(state)))
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        _render_human(report)
    return EXIT_PASS if ok else EXIT_FAIL


def _parse_pairs(specs, system) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    pairs = []
    if specs:
        for spec in specs:
            try:
                one, two = spec.split(":")
            except ValueError:
                raise ParseError(f"--pair must look like L1,L2:L3 (got {spec!r})") from None
            pairs.append(
                (tuple(s.strip() for s in one.split(",")), tuple(s.strip() for s in two.split(",")))
            )
    else:
        labels = system.labels
        for i, a in enumerate(labels):
            for b in labels[i + 1 :]:
                pairs.append(((a,), (b,)))
    return pairs


def _cmd_classify(args) -> int:
    state = state_from_dict(load_path(args.state), psd_threshold=-args.tolerance)
    sys_ = state.system
    if not sys_.is_qubits():
        raise ParseError(f"classify needs a qubit system, got dims {sys_.dims}")
    coeffs = ghz_diagonal_coefficients(state)
    report = _base_report("classify", args.tolerance)
    entries = report["entries"]
    ghz_diagonal = coeffs.offdiagonal_residual <= 1e-8
    entries.append(
        {
            "id": "residual",
            "status": "info" if ghz_diagonal else "warn",
            "computed": f"off-diagonal residual = {coeffs.offdiagonal_residual:.3e}"
            + ("" if ghz_diagonal else " (not GHZ-diagonal: reporting PT facts only)"),
        }
    )
    if ghz_diagonal:
        entries.append(
            {
                "id": "delta",
                "status": "info",
                "computed": f"delta = {coeffs.delta:.12g}"
                + (" (asymmetric pair weights symmetrized)" if coeffs.asymmetry_flag else ""),
                "delta": coeffs.delta,
                "lambda0_plus": coeffs.lambda0_plus,
                "lambda0_minus": coeffs.lambda0_minus,
            }
        )
        for j in all_cut_indices(sys_.num_parties):
            entries.append(
                {
                    "id": f"lambda-{j}",
                    "status": "info",
                    "computed": f"lambda_{j} = {coeffs.lambdas[j]:.12g}",
                    "value": coeffs.lambdas[j],
                }
            )
    for j in all_cut_indices(sys_.num_parties):
        cut = index_to_cut(j, sys_)
        verdict = ppt_check(state, cut, threshold=-args.tolerance)
        row = {
            "id": f"cut-{j}",
            "status": "info",
            "cut": cut.describe(sys_),
            "min_eigenvalue": verdict.min_eigenvalue,
            "eigensolver": "PPT" if verdict.is_ppt else "NPT",
        }
        text = f"{cut.describe(sys_):<18} eigensolver {row['eigensolver']}"
        if ghz_diagonal:
            crit = "NPT" if npt_criterion(coeffs, cut) else "PPT"
            row["criterion"] = crit
            text += f", criterion {crit}"
            if crit != row["eigensolver"]:
                row["status"] = "fail"
                report["overall"] = "fail"
        row["computed"] = text + f", min eig = {verdict.min_eigenvalue: .6e}"
        entries.append(row)
    if ghz_diagonal:
        for one, two in _parse_pairs(args.pair, sys_):
            verdict = pairwise_distillability(coeffs, one, two)
            entries.append(
                {
                    "id": f"distill-{','.join(one)}-vs-{','.join(two)}",
                    "status": "info",
                    "computed": (
                        f"{','.join(one)} vs {','.join(two)}: "
                        + ("distillable" if verdict.distillable else "not distillable")
                        + (
                            ""
                            if verdict.distillable
                            else f" (blocking: {'; '.join(c.describe(sys_) for c in verdict.blocking_cuts)})"
                        )
                    ),
                    "distillable": verdict.distillable,
                }
            )
    _emit(report, args.format, args.out)
    return EXIT_PASS if report["overall"] == "pass" else EXIT_FAIL


def _cmd_mix(args) -> int:
    channels = [channel_from_dict(load_path(p)) for p in args.channels]
    weights = args.weights if args.weights else None
    mixed = mix(channels, weights=weights)
    parts = [choi(ch) for ch in channels]
    w = weights if weights else [1 / len(channels)] * len(channels)
    combo = sum(x * p.matrix for x, p in zip(w, parts))
    linearity = float(np.linalg.norm(choi(mixed).matrix - combo))
    rep = verify_cptp(mixed, psd_threshold=-args.tolerance)
    report = _base_report("mix", args.tolerance)
    report["entries"] = [
        {
            "id": "mix-choi-linearity",
            "status": "pass" if linearity <= 1e-12 else "fail",
            "computed": f"|choi(mix) - sum w*choi| = {linearity:.3e}",
        },
        {
            "id": "mix-cptp",
            "status": "pass" if rep.passed else "fail",
            "computed": f"defect = {rep.trace_preserving_defect:.3e}",
        },
    ]
    ok = all(e["status"] == "pass" for e in report["entries"])
    report["overall"] = "pass" if ok else "fail"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(channel_to_dict(mixed)))
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        _render_human(report)
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_reproduce(args) -> int:
    rep = full_report()
    body = report_to_dict(rep)
    entries = body["entries"]
    if args.claims:
        wanted = {s.strip() for spec in args.claims for s in spec.split(",")}
        unknown = wanted - {e["id"] for e in entries}
        if unknown:
            raise ParseError(f"unknown claim ids: {sorted(unknown)}")
        entries = [e for e in entries if e["id"] in wanted]
    report = _base_report("reproduce", args.tolerance)
    report["entries"] = entries
    ok = all(e["status"] == "pass" for e in entries)
    report["overall"] = "pass" if ok else "fail"
    headline = next((e for e in entries if e["id"] == "nonadditivity-headline"), None)
    _emit(report, args.format, args.out)
    if args.format == "human" and headline is not None:
        print(f"headline: {headline['computed']}")
    return EXIT_PASS if ok else EXIT_FAIL


def _add_global_flags(parser: argparse.ArgumentParser, top: bool) -> None:
    # The same flags are accepted before and after the subcommand; the
    # subparser copies use SUPPRESS so they only override when given.
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--format", choices=("human", "json"), default=default("human"))
    parser.add_argument(
        "--tolerance",
        type=float,
        default=default(1e-9),
        help="positivity threshold: eigenvalues >= -tolerance count as nonnegative",
    )
    parser.add_argument(
        "--out", default=default(None), help="write the machine-readable result to this path"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choilab",
        description="Kraus channels, Choi states and multipartite distillability checks.",
    )
    _add_global_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a channel file for trace preservation")
    _add_global_flags(p, top=False)
    p.add_argument("channel")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("choi", help="compute the Choi state of a channel file")
    _add_global_flags(p, top=False)
    p.add_argument("channel")
    p.add_argument(
        "--order",
        help="comma-separated party order of the result; labels not in the "
        "channel output name the reference parties",
    )
    p.set_defaults(func=_cmd_choi)

    p = sub.add_parser("classify", help="classify a qubit state file")
    _add_global_flags(p, top=False)
    p.add_argument("state")
    p.add_argument(
        "--pair",
        action="append",
        help="group pair to test for distillability, e.g. A1,A2:B (repeatable)",
    )
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("mix", help="classically mix channel files")
    _add_global_flags(p, top=False)
    p.add_argument("channels", nargs="+")
    p.add_argument("--weights", type=float, nargs="+")
    p.set_defaults(func=_cmd_mix)

    p = sub.add_parser("reproduce", help="run the bundled non-additivity witness suite")
    _add_global_flags(p, top=False)
    p.add_argument("--claims", action="append", help="only run these claim ids (comma-separated)")
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChoilabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())
